#include "fpcal/calibration.hpp"

#include "fpcal/error.hpp"
#include "fpcal/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fpcal {

namespace detail {

double pairwise_sum(std::span<const double> v) noexcept {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

Design::Design(std::span<const TrainingProject> projects, const RegressionModel& model) : model_(model) {
    if (projects.empty()) throw InvalidInput("calibration needs at least one project");
    if (!(model.A > 0.0) || !std::isfinite(model.A) || !std::isfinite(model.B)) {
        throw InvalidInput("calibration needs a model with finite A > 0 and finite B");
    }
    const std::size_t n = projects.size();
    counts_.resize(kCellCount * n);
    effort_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const TrainingProject& p = projects[i];
        if (!(p.effort > 0.0) || !std::isfinite(p.effort)) {
            throw InvalidInput("project " + std::to_string(i) + ": effort must be positive");
        }
        if (p.breakdown.is_zero()) {
            throw InvalidInput("project " + std::to_string(i) + ": all-zero breakdown gives UFP = 0");
        }
        effort_[i] = p.effort;
        const auto& flat = p.breakdown.flat();
        for (std::size_t j = 0; j < kCellCount; ++j) counts_[j * n + i] = static_cast<double>(flat[j]);
    }
}

void Design::residuals(std::span<const double, kCellCount> w, std::vector<double>& ufp,
                       std::vector<double>& r) const {
    const std::size_t n = size();
    ufp.resize(n);
    r.resize(n);
    kernels::dispatch().weighted_columns(w, counts_, n, ufp);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(ufp[i] > 0.0)) {
            throw InvalidInput("project " + std::to_string(i) + ": UFP must be positive under the current weights");
        }
        r[i] = (model_.A * std::pow(ufp[i], model_.B) - effort_[i]) / effort_[i];
    }
}

double Design::loss(std::span<const double, kCellCount> w) const {
    std::vector<double> ufp, r;
    residuals(w, ufp, r);
    for (double& x : r) x *= x;
    return pairwise_sum(r) / static_cast<double>(size());
}

WeightVector Design::gradient(std::span<const double, kCellCount> w) const {
    const std::size_t n = size();
    std::vector<double> ufp, r;
    residuals(w, ufp, r);

    // dL/dU_i = (2/n) r_i A B U_i^(B-1) / e_i
    std::vector<double> coeff(n);
    for (std::size_t i = 0; i < n; ++i) {
        coeff[i] = 2.0 * r[i] * model_.A * model_.B * std::pow(ufp[i], model_.B - 1.0) / effort_[i];
    }
    WeightVector g{};
    std::vector<double> terms(n);
    for (std::size_t j = 0; j < kCellCount; ++j) {
        const double* col = counts_.data() + j * n;
        for (std::size_t i = 0; i < n; ++i) terms[i] = coeff[i] * col[i];
        g[j] = pairwise_sum(terms) / static_cast<double>(n);
    }
    return g;
}

} // namespace detail

void CalibrationConfig::validate() const {
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw InvalidInput("learning_rate must be > 0");
    if (!(weight_floor > 0.0) || !std::isfinite(weight_floor)) throw InvalidInput("weight_floor must be > 0");
    if (!(tolerance >= 0.0)) throw InvalidInput("tolerance must be >= 0");
}

double loss(const WeightTable& weights, std::span<const TrainingProject> projects, const RegressionModel& model) {
    const auto w = weights.flat();
    return detail::Design(projects, model).loss(w);
}

WeightVector gradient(const WeightTable& weights, std::span<const TrainingProject> projects,
                      const RegressionModel& model) {
    const auto w = weights.flat();
    return detail::Design(projects, model).gradient(w);
}

WeightVector project_weights(const WeightVector& w, double floor, bool enforce_ordering) {
    WeightVector out = w;
    for (double& v : out) v = std::max(v, floor);
    if (!enforce_ordering) return out;

    for (std::size_t k = 0; k < kKindCount; ++k) {
        // Pool-adjacent-violators on one (Low, Average, High) row with unit weights.
        std::array<double, kLevelCount> value{};
        std::array<std::size_t, kLevelCount> size{};
        std::size_t blocks = 0;
        for (std::size_t l = 0; l < kLevelCount; ++l) {
            value[blocks] = out[k * kLevelCount + l];
            size[blocks] = 1;
            ++blocks;
            while (blocks > 1 && value[blocks - 2] > value[blocks - 1]) {
                const std::size_t merged = size[blocks - 2] + size[blocks - 1];
                value[blocks - 2] = (value[blocks - 2] * static_cast<double>(size[blocks - 2]) +
                                     value[blocks - 1] * static_cast<double>(size[blocks - 1])) /
                                    static_cast<double>(merged);
                size[blocks - 2] = merged;
                --blocks;
            }
        }
        std::size_t l = 0;
        for (std::size_t b = 0; b < blocks; ++b) {
            for (std::size_t c = 0; c < size[b]; ++c) out[k * kLevelCount + l++] = value[b];
        }
    }
    return out;
}

CalibrationResult train(const WeightTable& initial, std::span<const TrainingProject> projects,
                        const RegressionModel& model, const CalibrationConfig& config) {
    config.validate();
    const detail::Design design(projects, model);

    WeightVector w = project_weights(initial.flat(), config.weight_floor, config.enforce_ordering);
    double current = design.loss(w);
    double rate = config.learning_rate;

    CalibrationResult result{WeightTable::from_flat(w, config.enforce_ordering ? OrderCheck::Enforce
                                                                               : OrderCheck::Skip),
                             {}, 0, current, current, rate};
    result.loss_history.push_back({0, current});

    std::size_t epoch = 0;
    while (epoch < config.max_epochs && current > 0.0 && rate > 0.0) {
        const WeightVector g = design.gradient(w);
        if (std::all_of(g.begin(), g.end(), [](double v) { return v == 0.0; })) break;
        ++epoch;

        WeightVector step{};
        for (std::size_t j = 0; j < kCellCount; ++j) step[j] = w[j] - rate * g[j];
        const WeightVector trial = project_weights(step, config.weight_floor, config.enforce_ordering);
        const double trial_loss = design.loss(trial);

        if (!(trial_loss <= current)) {
            rate *= 0.5;
            continue;
        }
        const double improvement = (current - trial_loss) / current;
        w = trial;
        current = trial_loss;
        result.loss_history.push_back({epoch, current});
        if (improvement < config.tolerance) break;
    }

    result.calibrated = WeightTable::from_flat(w, config.enforce_ordering ? OrderCheck::Enforce : OrderCheck::Skip);
    result.epochs_run = epoch;
    result.final_loss = current;
    result.final_learning_rate = rate;
    return result;
}

} // namespace fpcal
