#pragma once

// Data-parallel inner loops with a portable scalar reference and ISA-specific
// variants. dispatch() picks the best variant the running CPU supports; the
// choice is made once per process so results are reproducible within a run.

#include <cstddef>
#include <span>
#include <string_view>

namespace fpcal::kernels {

/// Symmetric triangle min-clipped at `clip`, the unit of a Mamdani aggregate.
struct ClippedTriangle {
    double center;
    double half_width;
    double clip;
};

/// Raw moments of a sampled membership function: sum of x*mu(x) and sum of mu(x).
struct CentroidSums {
    double moment = 0.0;
    double mass = 0.0;
};

/// Samples x_k = lo + k*step for k in [0, count) and accumulates the moments of
/// mu(x) = max_i min(clip_i, tri_i(x)).
using CentroidSumsFn = CentroidSums (*)(double lo, double step, std::size_t count,
                                        std::span<const ClippedTriangle> sets);

/// out[i] = sum_j weights[j] * counts[j * stride + i] for i < out.size(), with j
/// accumulated in ascending order. `counts` is column-major: one column of
/// length `stride` per weight.
using WeightedColumnsFn = void (*)(std::span<const double> weights, std::span<const double> counts,
                                   std::size_t stride, std::span<double> out);

enum class Isa { Scalar, Avx2 };

struct KernelTable {
    Isa isa;
    CentroidSumsFn centroid_sums;
    WeightedColumnsFn weighted_columns;
};

std::string_view to_string(Isa isa) noexcept;

/// Best table for this CPU. Setting FPCAL_SIMD=scalar in the environment forces the reference path.
const KernelTable& dispatch() noexcept;
const KernelTable& scalar_table() noexcept;
/// nullptr when the variant was not compiled in or the CPU lacks the instructions.
const KernelTable* avx2_table() noexcept;

namespace scalar {
CentroidSums centroid_sums(double lo, double step, std::size_t count, std::span<const ClippedTriangle> sets);
void weighted_columns(std::span<const double> weights, std::span<const double> counts, std::size_t stride,
                      std::span<double> out);
} // namespace scalar

#ifdef FPCAL_HAVE_AVX2
namespace avx2 {
CentroidSums centroid_sums(double lo, double step, std::size_t count, std::span<const ClippedTriangle> sets);
void weighted_columns(std::span<const double> weights, std::span<const double> counts, std::size_t stride,
                      std::span<double> out);
} // namespace avx2
#endif

} // namespace fpcal::kernels
