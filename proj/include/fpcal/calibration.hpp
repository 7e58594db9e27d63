#pragma once

// Weight calibration: the 15 UFP weights are the trainable parameters of
// Effort = A * (sum_j w_j n_j)^B with A and B held fixed. Training minimises
// the mean squared relative error by projected batch gradient descent.

#include "fpcal/effort_model.hpp"
#include "fpcal/fp_model.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace fpcal {

struct TrainingProject {
    UfpBreakdown breakdown;
    double effort; ///< person-hours
};

struct CalibrationConfig {
    /// Initial step size. Backtracking halves it whenever a step would raise the loss.
    double learning_rate = 1000.0;
    std::size_t max_epochs = 5000;
    /// Stop once an accepted step improves the loss by less than this fraction.
    double tolerance = 1e-9;
    double weight_floor = 0.1;
    bool enforce_ordering = true;
    /// Carried for reproducibility records; full-batch descent draws no random numbers.
    std::uint64_t seed = 0;

    void validate() const;
};

struct LossPoint {
    std::size_t epoch;
    double loss;
};

struct CalibrationResult {
    WeightTable calibrated;
    std::vector<LossPoint> loss_history; ///< initial loss at epoch 0, then every accepted step
    std::size_t epochs_run = 0;
    double initial_loss = 0.0;
    double final_loss = 0.0;
    double final_learning_rate = 0.0;
};

using WeightVector = std::array<double, kCellCount>;

/// Mean squared relative error (1/n) sum ((A U_i^B - e_i) / e_i)^2.
double loss(const WeightTable& weights, std::span<const TrainingProject> projects, const RegressionModel& model);

/// Analytic dL/dw in canonical cell order.
WeightVector gradient(const WeightTable& weights, std::span<const TrainingProject> projects,
                      const RegressionModel& model);

/// Clamp every weight to >= floor, then (optionally) restore Low <= Average <= High
/// per kind with pool-adjacent-violators.
WeightVector project_weights(const WeightVector& w, double floor, bool enforce_ordering);

CalibrationResult train(const WeightTable& initial, std::span<const TrainingProject> projects,
                        const RegressionModel& model, const CalibrationConfig& config = {});

namespace detail {

/// Column-major count matrix and efforts, validated once and reused every epoch.
class Design {
public:
    Design(std::span<const TrainingProject> projects, const RegressionModel& model);

    std::size_t size() const noexcept { return effort_.size(); }
    double loss(std::span<const double, kCellCount> w) const;
    WeightVector gradient(std::span<const double, kCellCount> w) const;

private:
    /// Relative residuals r_i and sizes U_i; throws InvalidInput when some U_i <= 0.
    void residuals(std::span<const double, kCellCount> w, std::vector<double>& ufp, std::vector<double>& r) const;

    std::vector<double> counts_; ///< kCellCount columns of length size()
    std::vector<double> effort_;
    RegressionModel model_;
};

/// Sum in a fixed pairwise order; identical inputs give bit-identical results.
double pairwise_sum(std::span<const double> v) noexcept;

} // namespace detail

} // namespace fpcal
