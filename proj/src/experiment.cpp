#include "fpcal/experiment.hpp"

#include "fpcal/error.hpp"

#include <algorithm>
#include <future>

namespace fpcal {

CleanedFit fit_without_outliers(std::span<const ProjectRecord> records, const WeightTable& weights,
                                double outlier_k) {
    const RegressionModel first = fit_power_law(size_effort_points(records, weights));
    const std::set<std::string> flagged = detect_outliers(records, first, weights, outlier_k);

    CleanedFit out;
    out.kept = remove_ids(records, flagged);
    out.outliers.assign(flagged.begin(), flagged.end());
    out.model = flagged.empty() ? first : fit_power_law(size_effort_points(out.kept, weights));
    return out;
}

void ExperimentConfig::validate() const {
    if (repetitions < 1) throw InvalidInput("experiment needs at least one repetition");
    if (!(outlier_k > 0.0)) throw InvalidInput("outlier k must be positive");
    calibration.validate();
    filter.validate();
}

RepetitionResult run_repetition(std::span<const ProjectRecord> filtered, std::uint64_t seed, std::size_t index,
                                const ExperimentConfig& config) {
    const Split parts = split(filtered, {seed, config.train_count});
    CleanedFit fit = fit_without_outliers(parts.train, config.original, config.outlier_k);

    RepetitionResult row;
    row.index = index;
    row.seed = seed;
    row.n_train = fit.kept.size();
    row.outliers = std::move(fit.outliers);
    row.model = fit.model;
    row.calibration = train(config.original, training_projects(fit.kept), row.model, config.calibration);
    row.evaluation = evaluate(parts.test, config.original, row.calibration.calibrated, row.model, config.pred_levels);
    return row;
}

ExperimentReport run_experiment(std::span<const ProjectRecord> corpus, const ExperimentConfig& config) {
    config.validate();
    const std::vector<ProjectRecord> filtered = filter_isbsg(corpus, config.filter);
    if (filtered.size() < config.train_count + 1) {
        throw InvalidInput("corpus has " + std::to_string(filtered.size()) +
                           " records after filtering; need at least train_count + 1 = " +
                           std::to_string(config.train_count + 1));
    }

    std::vector<std::future<RepetitionResult>> pending;
    pending.reserve(config.repetitions);
    for (std::size_t r = 0; r < config.repetitions; ++r) {
        pending.push_back(std::async(std::launch::async, [&filtered, &config, r] {
            return run_repetition(filtered, config.seed_base + r, r, config);
        }));
    }

    ExperimentReport rep;
    rep.corpus_size = corpus.size();
    rep.filtered_size = filtered.size();
    for (auto& f : pending) rep.rows.push_back(f.get());

    double improvement_sum = 0.0;
    WeightVector weight_sum{};
    for (const RepetitionResult& row : rep.rows) {
        improvement_sum += row.evaluation.improvement;
        const auto w = row.calibration.calibrated.flat();
        for (std::size_t j = 0; j < kCellCount; ++j) weight_sum[j] += w[j];
    }
    const double n = static_cast<double>(rep.rows.size());
    rep.mean_improvement = improvement_sum / n;
    for (double& w : weight_sum) w /= n;
    rep.mean_calibrated = WeightTable::from_flat(
        weight_sum, config.calibration.enforce_ordering ? OrderCheck::Enforce : OrderCheck::Skip);
    return rep;
}

} // namespace fpcal
