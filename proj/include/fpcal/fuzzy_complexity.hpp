#pragma once

// Mamdani fuzzy inference over (DET, RET/FTR) counts. Replaces the step-wise
// crisp classification with a continuous component weight that agrees with
// the crisp weight deep inside each matrix cell.

#include "fpcal/fp_model.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>

namespace fpcal {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Trapezoid with breakpoints a <= b <= c <= d. a == b gives a left shoulder,
/// c == d == +inf a right shoulder.
struct TrapezoidSet {
    double a, b, c, d;

    double membership(double x) const noexcept;
};

/// Small, Medium, Large along one count axis.
struct AxisPartition {
    std::array<TrapezoidSet, 3> sets;
};

struct KindPartition {
    AxisPartition det;
    AxisPartition secondary;
};

struct FuzzyInputPartition {
    std::array<KindPartition, kKindCount> kinds;

    const KindPartition& operator[](ComponentKind k) const noexcept { return kinds[index(k)]; }
};

struct TriangleOutputSet {
    double center;
    double half_width;

    double membership(double x) const noexcept;
};

using OutputSets = std::array<TriangleOutputSet, kLevelCount>;

struct FuzzyOutputs {
    std::array<OutputSets, kKindCount> kinds;

    const OutputSets& operator[](ComponentKind k) const noexcept { return kinds[index(k)]; }
};

struct FuzzyRule {
    std::uint8_t det_set;
    std::uint8_t secondary_set;
    ComplexityLevel consequent;
};

struct FuzzyRuleBase {
    std::array<std::array<FuzzyRule, 9>, kKindCount> kinds;

    std::span<const FuzzyRule, 9> operator[](ComponentKind k) const noexcept { return kinds[index(k)]; }
};

struct FuzzyWeight {
    double value;
};

struct FuzzyConfig {
    double spread = 0.15;
    std::size_t centroid_samples = 16001;

    void validate() const;
};

/// One axis: crossover at cut + 0.5 with ramp half-width max(0.5, spread * crossover).
/// Throws InvalidInput when spread is outside (0, 0.5) or adjacent ramps would overlap.
AxisPartition build_axis_partition(const std::array<int, 2>& cuts, double spread);
FuzzyInputPartition build_partitions(const ComplexityMatrix& matrix, double spread);

/// Triangles centred on the kind's weights; each half-width is half the gap to
/// the nearest neighbouring centre. Throws InvalidInput on equal adjacent weights.
OutputSets build_outputs(ComponentKind kind, const WeightTable& table);
FuzzyOutputs build_outputs(const WeightTable& table);

/// Nine rules per kind, copied cell-for-cell from the matrix grid.
FuzzyRuleBase build_rules(const ComplexityMatrix& matrix);

/// Min-activation, min-clipping, max-aggregation, centroid defuzzification on a
/// uniform grid of `samples` points.
FuzzyWeight infer_weight(ComponentKind kind, double det, double secondary, const FuzzyInputPartition& partition,
                         const FuzzyRuleBase& rules, const FuzzyOutputs& outputs,
                         std::size_t samples = FuzzyConfig{}.centroid_samples);

double fuzzy_ufp(std::span<const ComponentRecord> components, const FuzzyInputPartition& partition,
                 const FuzzyRuleBase& rules, const FuzzyOutputs& outputs,
                 std::size_t samples = FuzzyConfig{}.centroid_samples);

/// Partition, rules and outputs bundled for one matrix/weight-table pair.
class FuzzySystem {
public:
    FuzzySystem(const ComplexityMatrix& matrix, const WeightTable& table, const FuzzyConfig& config = {});

    FuzzyWeight infer(ComponentKind kind, double det, double secondary) const {
        return infer_weight(kind, det, secondary, partition_, rules_, outputs_, samples_);
    }
    double ufp(std::span<const ComponentRecord> components) const {
        return fuzzy_ufp(components, partition_, rules_, outputs_, samples_);
    }

    const FuzzyInputPartition& partition() const noexcept { return partition_; }
    const FuzzyRuleBase& rules() const noexcept { return rules_; }
    const FuzzyOutputs& outputs() const noexcept { return outputs_; }

private:
    FuzzyInputPartition partition_;
    FuzzyRuleBase rules_;
    FuzzyOutputs outputs_;
    std::size_t samples_;
};

} // namespace fpcal
