#pragma once

// Accuracy metrics for effort estimates: MRE, MMRE, PRED(p) and relative MMRE
// improvement, plus the original-vs-calibrated comparison report.

#include "fpcal/dataset.hpp"
#include "fpcal/effort_model.hpp"
#include "fpcal/fp_model.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace fpcal {

struct EstimatePair {
    double estimated;
    double actual;
};

double mre(double estimated, double actual);
double mmre(std::span<const EstimatePair> pairs);
/// Fraction of pairs with MRE <= p (inclusive).
double pred(std::span<const EstimatePair> pairs, double p);
double improvement(double mmre_original, double mmre_calibrated);

inline const std::vector<double> kDefaultPredLevels{0.25, 0.50, 0.75, 1.00};

struct EvaluationReport {
    std::size_t n_test = 0;
    double mmre_original = 0.0;
    double mmre_calibrated = 0.0;
    std::vector<double> pred_levels;
    std::vector<double> pred_original;
    std::vector<double> pred_calibrated;
    double improvement = 0.0;

    bool operator==(const EvaluationReport&) const = default;
};

/// Both variants are predicted as A * compute_ufp(breakdown, table)^B with the same model.
EvaluationReport evaluate(std::span<const ProjectRecord> test, const WeightTable& original,
                          const WeightTable& calibrated, const RegressionModel& model,
                          const std::vector<double>& pred_levels = kDefaultPredLevels);

} // namespace fpcal
