#include "fpcal/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace fpcal::kernels::scalar {

CentroidSums centroid_sums(double lo, double step, std::size_t count, std::span<const ClippedTriangle> sets) {
    CentroidSums s;
    for (std::size_t k = 0; k < count; ++k) {
        const double x = lo + static_cast<double>(k) * step;
        double mu = 0.0;
        for (const ClippedTriangle& t : sets) {
            const double tri = std::max(0.0, 1.0 - std::fabs(x - t.center) / t.half_width);
            mu = std::max(mu, std::min(t.clip, tri));
        }
        s.moment += x * mu;
        s.mass += mu;
    }
    return s;
}

void weighted_columns(std::span<const double> weights, std::span<const double> counts, std::size_t stride,
                      std::span<double> out) {
    for (std::size_t i = 0; i < out.size(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < weights.size(); ++j) acc += weights[j] * counts[j * stride + i];
        out[i] = acc;
    }
}

} // namespace fpcal::kernels::scalar
