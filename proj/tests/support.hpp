#pragma once

#include "fpcal/calibration.hpp"
#include "fpcal/fp_model.hpp"

#include <algorithm>
#include <random>
#include <vector>

namespace testing_support {

inline fpcal::UfpBreakdown random_breakdown(std::mt19937_64& rng, int max_count = 10) {
    std::uniform_int_distribution<long long> d(0, max_count);
    std::array<fpcal::UfpBreakdown::Count, fpcal::kCellCount> c{};
    do {
        for (auto& v : c) v = d(rng);
    } while (std::all_of(c.begin(), c.end(), [](auto v) { return v == 0; }));
    return fpcal::UfpBreakdown::from_flat(c);
}

/// Ordered table with every entry perturbed by up to +-frac from `base`.
inline fpcal::WeightTable perturbed_table(std::mt19937_64& rng, const fpcal::WeightTable& base, double frac) {
    std::uniform_real_distribution<double> u(-frac, frac);
    auto flat = base.flat();
    for (std::size_t k = 0; k < fpcal::kKindCount; ++k) {
        std::array<double, 3> row{};
        do {
            for (std::size_t l = 0; l < 3; ++l) row[l] = flat[k * 3 + l] * (1.0 + u(rng));
        } while (!(row[0] <= row[1] && row[1] <= row[2]));
        for (std::size_t l = 0; l < 3; ++l) flat[k * 3 + l] = row[l];
    }
    return fpcal::WeightTable::from_flat(flat);
}

inline std::array<double, 15> as_doubles(const fpcal::UfpBreakdown& b) {
    std::array<double, 15> out{};
    for (std::size_t i = 0; i < 15; ++i) out[i] = static_cast<double>(b.flat()[i]);
    return out;
}

} // namespace testing_support
