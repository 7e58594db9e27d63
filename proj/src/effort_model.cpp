#include "fpcal/effort_model.hpp"

#include "fpcal/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace fpcal {

RegressionModel fit_power_law(std::span<const SizeEffortPoint> points) {
    const std::size_t n = points.size();
    if (n < 2) throw InvalidInput("power-law fit needs at least 2 points, got " + std::to_string(n));

    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = points[i];
        if (!(p.ufp > 0.0) || !(p.effort > 0.0) || !std::isfinite(p.ufp) || !std::isfinite(p.effort)) {
            throw InvalidInput("power-law fit needs positive finite coordinates (point " + std::to_string(i) + ")");
        }
        x[i] = std::log(p.ufp);
        y[i] = std::log(p.effort);
    }
    if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; })) {
        throw InvalidInput("power-law fit needs at least two distinct UFP values");
    }

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) throw InvalidInput("power-law fit: zero variance in ln(UFP)");

    RegressionModel m;
    m.B = sxy / sxx;
    const double intercept = my - m.B * mx;
    m.A = std::exp(intercept);
    m.n_fit = n;

    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (intercept + m.B * x[i]);
        ss_res += r * r;
    }
    m.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;

    if (!std::isfinite(m.A) || !(m.A > 0.0) || !std::isfinite(m.B)) {
        throw NumericError("power-law fit produced a non-finite model");
    }
    return m;
}

double predict_effort(const RegressionModel& model, double ufp) {
    if (!(ufp > 0.0)) throw InvalidInput("effort prediction needs UFP > 0, got " + std::to_string(ufp));
    return model.A * std::pow(ufp, model.B);
}

} // namespace fpcal
