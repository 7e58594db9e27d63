#include "fpcal/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace fpcal::kernels {

namespace {

const KernelTable kScalar{Isa::Scalar, &scalar::centroid_sums, &scalar::weighted_columns};

#ifdef FPCAL_HAVE_AVX2
const KernelTable kAvx2{Isa::Avx2, &avx2::centroid_sums, &avx2::weighted_columns};

bool cpu_has_avx2() noexcept {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

bool forced_scalar() noexcept {
    const char* env = std::getenv("FPCAL_SIMD");
    return env != nullptr && std::string_view(env) == "scalar";
}

} // namespace

std::string_view to_string(Isa isa) noexcept {
    switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    }
    return "?";
}

const KernelTable& scalar_table() noexcept { return kScalar; }

const KernelTable* avx2_table() noexcept {
#ifdef FPCAL_HAVE_AVX2
    static const bool supported = cpu_has_avx2();
    return supported ? &kAvx2 : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& dispatch() noexcept {
    static const KernelTable& chosen = [] () -> const KernelTable& {
        if (forced_scalar()) return kScalar;
        if (const KernelTable* t = avx2_table()) return *t;
        return kScalar;
    }();
    return chosen;
}

} // namespace fpcal::kernels
