#include "fpcal/fuzzy_complexity.hpp"

#include "fpcal/error.hpp"
#include "fpcal/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fpcal {

double TrapezoidSet::membership(double x) const noexcept {
    if (x < a || x > d) return 0.0;
    if (x >= b && x <= c) return 1.0;
    if (x < b) return (x - a) / (b - a);
    return (d - x) / (d - c);
}

double TriangleOutputSet::membership(double x) const noexcept {
    return std::max(0.0, 1.0 - std::fabs(x - center) / half_width);
}

void FuzzyConfig::validate() const {
    if (!(spread > 0.0 && spread < 0.5)) {
        throw InvalidInput("fuzzy spread must lie in (0, 0.5), got " + std::to_string(spread));
    }
    if (centroid_samples < 3) throw InvalidInput("fuzzy centroid_samples must be >= 3");
}

AxisPartition build_axis_partition(const std::array<int, 2>& cuts, double spread) {
    FuzzyConfig{spread, 3}.validate();
    std::array<double, 2> t{}, h{};
    for (std::size_t i = 0; i < 2; ++i) {
        t[i] = cuts[i] + 0.5;
        h[i] = std::max(0.5, spread * t[i]);
    }
    if (t[0] + h[0] > t[1] - h[1]) {
        throw InvalidInput("fuzzy ramps around cuts " + std::to_string(cuts[0]) + " and " +
                           std::to_string(cuts[1]) + " overlap; reduce spread");
    }
    AxisPartition p;
    p.sets[0] = {0.0, 0.0, t[0] - h[0], t[0] + h[0]};
    p.sets[1] = {t[0] - h[0], t[0] + h[0], t[1] - h[1], t[1] + h[1]};
    p.sets[2] = {t[1] - h[1], t[1] + h[1], kInfinity, kInfinity};
    return p;
}

FuzzyInputPartition build_partitions(const ComplexityMatrix& matrix, double spread) {
    FuzzyInputPartition p;
    for (ComponentKind k : kAllKinds) {
        p.kinds[index(k)] = {build_axis_partition(matrix[k].det_cuts, spread),
                             build_axis_partition(matrix[k].secondary_cuts, spread)};
    }
    return p;
}

OutputSets build_outputs(ComponentKind kind, const WeightTable& table) {
    const auto& w = table.row(kind);
    const double gap_low = w[1] - w[0];
    const double gap_high = w[2] - w[1];
    if (!(gap_low > 0.0) || !(gap_high > 0.0)) {
        throw InvalidInput(std::string(to_string(kind)) +
                           ": fuzzy outputs need strictly increasing weights (zero half-width)");
    }
    return {{{w[0], gap_low / 2}, {w[1], std::min(gap_low, gap_high) / 2}, {w[2], gap_high / 2}}};
}

FuzzyOutputs build_outputs(const WeightTable& table) {
    FuzzyOutputs o;
    for (ComponentKind k : kAllKinds) o.kinds[index(k)] = build_outputs(k, table);
    return o;
}

FuzzyRuleBase build_rules(const ComplexityMatrix& matrix) {
    FuzzyRuleBase rb;
    for (ComponentKind k : kAllKinds) {
        auto& rules = rb.kinds[index(k)];
        for (std::uint8_t s = 0; s < 3; ++s) {
            for (std::uint8_t d = 0; d < 3; ++d) rules[s * 3 + d] = {d, s, matrix[k].grid[s][d]};
        }
    }
    return rb;
}

FuzzyWeight infer_weight(ComponentKind kind, double det, double secondary, const FuzzyInputPartition& partition,
                         const FuzzyRuleBase& rules, const FuzzyOutputs& outputs, std::size_t samples) {
    if (!std::isfinite(det) || !std::isfinite(secondary) || det < kMinDet || secondary < min_secondary(kind)) {
        throw InvalidInput(std::string(to_string(kind)) + ": counts outside the fuzzy domain (det=" +
                           std::to_string(det) + ", secondary=" + std::to_string(secondary) + ")");
    }
    if (samples < 3) throw InvalidInput("centroid samples must be >= 3");

    const KindPartition& kp = partition[kind];
    std::array<double, 3> mu_det{}, mu_sec{};
    for (std::size_t i = 0; i < 3; ++i) {
        mu_det[i] = kp.det.sets[i].membership(det);
        mu_sec[i] = kp.secondary.sets[i].membership(secondary);
    }

    std::array<double, kLevelCount> clip{};
    for (const FuzzyRule& r : rules[kind]) {
        const double activation = std::min(mu_det[r.det_set], mu_sec[r.secondary_set]);
        double& c = clip[index(r.consequent)];
        c = std::max(c, activation);
    }
    if (clip[0] == 0.0 && clip[1] == 0.0 && clip[2] == 0.0) {
        throw NumericError("no fuzzy rule fired; input partition does not cover the point");
    }

    const OutputSets& out = outputs[kind];
    // A lone symmetric clipped triangle has its centroid exactly at the centre.
    if (std::count_if(clip.begin(), clip.end(), [](double c) { return c > 0.0; }) == 1) {
        for (std::size_t l = 0; l < kLevelCount; ++l) {
            if (clip[l] > 0.0) return {out[l].center};
        }
    }

    std::array<kernels::ClippedTriangle, kLevelCount> sets{};
    double max_half = 0.0;
    for (std::size_t l = 0; l < kLevelCount; ++l) {
        sets[l] = {out[l].center, out[l].half_width, clip[l]};
        max_half = std::max(max_half, out[l].half_width);
    }
    const double lo_center = std::min({out[0].center, out[1].center, out[2].center});
    const double hi_center = std::max({out[0].center, out[1].center, out[2].center});
    const double lo = lo_center - max_half;
    const double hi = hi_center + max_half;
    const double step = (hi - lo) / static_cast<double>(samples - 1);

    const kernels::CentroidSums s = kernels::dispatch().centroid_sums(lo, step, samples, sets);
    if (!(s.mass > 0.0)) throw NumericError("aggregate fuzzy set has zero area");
    // The exact centroid of non-overlapping symmetric clipped triangles lies in the hull of their centres.
    return {std::clamp(s.moment / s.mass, lo_center, hi_center)};
}

double fuzzy_ufp(std::span<const ComponentRecord> components, const FuzzyInputPartition& partition,
                 const FuzzyRuleBase& rules, const FuzzyOutputs& outputs, std::size_t samples) {
    double total = 0.0;
    for (std::size_t i = 0; i < components.size(); ++i) {
        const ComponentRecord& c = components[i];
        try {
            c.validate();
            total += infer_weight(c.kind, c.det, c.secondary, partition, rules, outputs, samples).value;
        } catch (const InvalidInput& e) {
            throw InvalidInput("component " + std::to_string(i) + ": " + e.what());
        }
    }
    return total;
}

FuzzySystem::FuzzySystem(const ComplexityMatrix& matrix, const WeightTable& table, const FuzzyConfig& config)
    : partition_((config.validate(), build_partitions(matrix, config.spread))),
      rules_(build_rules(matrix)),
      outputs_(build_outputs(table)),
      samples_(config.centroid_samples) {}

} // namespace fpcal
