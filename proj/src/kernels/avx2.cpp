#include "fpcal/kernels.hpp"

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace fpcal::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d pair = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

} // namespace

CentroidSums centroid_sums(double lo, double step, std::size_t count, std::span<const ClippedTriangle> sets) {
    const __m256d zero = _mm256_setzero_pd();
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d sign = _mm256_set1_pd(-0.0);
    const __m256d vlo = _mm256_set1_pd(lo);
    const __m256d vstep = _mm256_set1_pd(step);
    const __m256d lane = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);

    __m256d moment = zero;
    __m256d mass = zero;
    std::size_t k = 0;
    for (; k + 4 <= count; k += 4) {
        // Same expression as the scalar path so sample points agree exactly.
        const __m256d kk = _mm256_add_pd(_mm256_set1_pd(static_cast<double>(k)), lane);
        const __m256d x = _mm256_add_pd(vlo, _mm256_mul_pd(kk, vstep));
        __m256d mu = zero;
        for (const ClippedTriangle& t : sets) {
            const __m256d dist = _mm256_andnot_pd(sign, _mm256_sub_pd(x, _mm256_set1_pd(t.center)));
            const __m256d tri = _mm256_max_pd(zero, _mm256_sub_pd(one, _mm256_div_pd(dist, _mm256_set1_pd(t.half_width))));
            mu = _mm256_max_pd(mu, _mm256_min_pd(_mm256_set1_pd(t.clip), tri));
        }
        moment = _mm256_fmadd_pd(x, mu, moment);
        mass = _mm256_add_pd(mass, mu);
    }

    CentroidSums s{hsum(moment), hsum(mass)};
    for (; k < count; ++k) {
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
    const std::size_t n = out.size();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t j = 0; j < weights.size(); ++j) {
            const __m256d c = _mm256_loadu_pd(counts.data() + j * stride + i);
            // mul then add, not fma: keeps each lane bit-identical to the scalar loop.
            acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(weights[j]), c));
        }
        _mm256_storeu_pd(out.data() + i, acc);
    }
    for (; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < weights.size(); ++j) acc += weights[j] * counts[j * stride + i];
        out[i] = acc;
    }
}

} // namespace fpcal::kernels::avx2
