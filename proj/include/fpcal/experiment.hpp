#pragma once

// Repeated split / fit / calibrate / evaluate runs over one corpus.

#include "fpcal/calibration.hpp"
#include "fpcal/dataset.hpp"
#include "fpcal/effort_model.hpp"
#include "fpcal/fp_model.hpp"
#include "fpcal/metrics.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fpcal {

struct CleanedFit {
    RegressionModel model;             ///< refit on `kept`
    std::vector<ProjectRecord> kept;   ///< input order, outliers removed
    std::vector<std::string> outliers; ///< sorted ids
};

/// Fit under `weights`, drop log-residual outliers, refit on the rest.
CleanedFit fit_without_outliers(std::span<const ProjectRecord> records, const WeightTable& weights, double outlier_k);

struct ExperimentConfig {
    std::size_t repetitions = 5;
    std::uint64_t seed_base = 0;
    std::size_t train_count = 100;
    double outlier_k = kDefaultOutlierK;
    WeightTable original;
    CalibrationConfig calibration;
    FilterCriteria filter;
    std::vector<double> pred_levels = kDefaultPredLevels;

    void validate() const;
};

struct RepetitionResult {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    std::size_t n_train = 0; ///< after outlier removal
    std::vector<std::string> outliers;
    RegressionModel model;
    CalibrationResult calibration;
    EvaluationReport evaluation;
};

struct ExperimentReport {
    std::size_t corpus_size = 0;   ///< records parsed
    std::size_t filtered_size = 0; ///< records passing the filter
    std::vector<RepetitionResult> rows;
    double mean_improvement = 0.0;
    WeightTable mean_calibrated;
};

/// One repetition on an already-filtered corpus, split with `seed`.
RepetitionResult run_repetition(std::span<const ProjectRecord> filtered, std::uint64_t seed, std::size_t index,
                                const ExperimentConfig& config);

/// Filters the corpus, then runs repetition r with seed seed_base + r. Rows are
/// ordered by repetition index.
ExperimentReport run_experiment(std::span<const ProjectRecord> corpus, const ExperimentConfig& config);

} // namespace fpcal
