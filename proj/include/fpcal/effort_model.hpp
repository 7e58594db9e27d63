#pragma once

// Power-law effort model Effort = A * UFP^B, fit by ordinary least squares on
// (ln UFP, ln effort). Effort is in person-hours.

#include <cstddef>
#include <span>

namespace fpcal {

struct SizeEffortPoint {
    double ufp;
    double effort;
};

struct RegressionModel {
    double A = 1.0;
    double B = 1.0;
    std::size_t n_fit = 0;
    double r_squared = 0.0; ///< coefficient of determination in log space

    bool operator==(const RegressionModel&) const = default;
};

RegressionModel fit_power_law(std::span<const SizeEffortPoint> points);

double predict_effort(const RegressionModel& model, double ufp);

} // namespace fpcal
