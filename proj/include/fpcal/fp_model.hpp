#pragma once

// Crisp IFPUG function-point model: complexity matrices, weight tables,
// classification and unadjusted function point (UFP) totals.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace fpcal {

enum class ComponentKind : std::uint8_t { EI = 0, EO, EQ, ILF, EIF };
enum class ComplexityLevel : std::uint8_t { Low = 0, Average, High };

inline constexpr std::size_t kKindCount = 5;
inline constexpr std::size_t kLevelCount = 3;
inline constexpr std::size_t kCellCount = kKindCount * kLevelCount;

/// Canonical serialization order.
inline constexpr std::array<ComponentKind, kKindCount> kAllKinds = {
    ComponentKind::EI, ComponentKind::EO, ComponentKind::EQ, ComponentKind::ILF, ComponentKind::EIF};
inline constexpr std::array<ComplexityLevel, kLevelCount> kAllLevels = {
    ComplexityLevel::Low, ComplexityLevel::Average, ComplexityLevel::High};

constexpr std::size_t index(ComponentKind k) noexcept { return static_cast<std::size_t>(k); }
constexpr std::size_t index(ComplexityLevel l) noexcept { return static_cast<std::size_t>(l); }
constexpr std::size_t cell_index(ComponentKind k, ComplexityLevel l) noexcept {
    return index(k) * kLevelCount + index(l);
}

std::string_view to_string(ComponentKind k) noexcept;
std::string_view to_string(ComplexityLevel l) noexcept;
/// Accepts "EI", "ei", ... ; nullopt when unrecognized.
std::optional<ComponentKind> parse_kind(std::string_view s) noexcept;
/// Accepts "low"/"average"/"avg"/"high" in any case.
std::optional<ComplexityLevel> parse_level(std::string_view s) noexcept;

/// Data functions (ILF, EIF) count RETs and need at least one; transactions count FTRs from zero.
constexpr bool is_data_function(ComponentKind k) noexcept {
    return k == ComponentKind::ILF || k == ComponentKind::EIF;
}
constexpr int min_secondary(ComponentKind k) noexcept { return is_data_function(k) ? 1 : 0; }
inline constexpr int kMinDet = 1;

struct ComponentRecord {
    ComponentKind kind;
    int det;
    int secondary; ///< RET for ILF/EIF, FTR for EI/EO/EQ

    /// Throws InvalidInput when the counts fall outside the kind's domain.
    void validate() const;
};

/// 3x3 lookup from (secondary range, det range) to a level for one kind.
///
/// Cuts are the inclusive upper ends of the first two ranges: det_cuts = {19, 50}
/// means det ranges [1,19], [20,50], [51,inf). grid[s][d] is indexed by the
/// secondary range first, matching the printed IFPUG tables.
struct KindMatrix {
    std::array<int, 2> det_cuts{};
    std::array<int, 2> secondary_cuts{};
    std::array<std::array<ComplexityLevel, 3>, 3> grid{};

    bool operator==(const KindMatrix&) const = default;
};

class ComplexityMatrix {
public:
    /// IFPUG 4.x defaults for all five kinds.
    ComplexityMatrix();
    /// Throws InvalidInput if any per-kind matrix violates the range or monotonicity rules.
    explicit ComplexityMatrix(std::array<KindMatrix, kKindCount> kinds);

    const KindMatrix& operator[](ComponentKind k) const noexcept { return kinds_[index(k)]; }

    static void validate(ComponentKind kind, const KindMatrix& m);

    bool operator==(const ComplexityMatrix&) const = default;

private:
    std::array<KindMatrix, kKindCount> kinds_;
};

/// Range index (0, 1, 2) of a count given two inclusive upper cuts.
constexpr std::size_t range_of(int value, const std::array<int, 2>& cuts) noexcept {
    return value <= cuts[0] ? 0 : (value <= cuts[1] ? 1 : 2);
}

/// Whether a weight table must satisfy Low <= Average <= High per kind.
/// Skip exists only for calibration runs with ordering enforcement disabled.
enum class OrderCheck { Enforce, Skip };

class WeightTable {
public:
    /// Albrecht/IFPUG weights.
    WeightTable();
    /// Throws InvalidInput unless every weight is positive, finite and ordered Low <= Average <= High per kind.
    explicit WeightTable(std::array<std::array<double, kLevelCount>, kKindCount> w,
                         OrderCheck check = OrderCheck::Enforce);
    /// Flat constructor in canonical (kind-major, level-minor) order.
    static WeightTable from_flat(std::span<const double, kCellCount> flat, OrderCheck check = OrderCheck::Enforce);

    bool is_ordered() const noexcept;

    double operator()(ComponentKind k, ComplexityLevel l) const noexcept { return w_[index(k)][index(l)]; }
    const std::array<double, kLevelCount>& row(ComponentKind k) const noexcept { return w_[index(k)]; }
    std::array<double, kCellCount> flat() const noexcept;

    bool operator==(const WeightTable&) const = default;

private:
    std::array<std::array<double, kLevelCount>, kKindCount> w_;
};

class UfpBreakdown {
public:
    using Count = std::int64_t;

    UfpBreakdown() = default;

    Count operator()(ComponentKind k, ComplexityLevel l) const noexcept { return n_[cell_index(k, l)]; }
    /// Throws InvalidInput on a negative count.
    void set(ComponentKind k, ComplexityLevel l, Count value);
    void add(ComponentKind k, ComplexityLevel l, Count delta = 1) { set(k, l, (*this)(k, l) + delta); }

    /// Canonical order, same as WeightTable::flat.
    const std::array<Count, kCellCount>& flat() const noexcept { return n_; }
    static UfpBreakdown from_flat(std::span<const Count, kCellCount> flat);

    Count total() const noexcept;
    bool is_zero() const noexcept { return total() == 0; }

    UfpBreakdown& operator+=(const UfpBreakdown& other);
    friend UfpBreakdown operator+(UfpBreakdown a, const UfpBreakdown& b) { return a += b; }
    bool operator==(const UfpBreakdown&) const = default;

private:
    std::array<Count, kCellCount> n_{};
};

ComplexityLevel classify(ComponentKind kind, int det, int secondary, const ComplexityMatrix& matrix);

inline double weight_of(ComponentKind kind, ComplexityLevel level, const WeightTable& table) noexcept {
    return table(kind, level);
}

/// Errors carry the offending record's 0-based index.
UfpBreakdown breakdown_from_components(std::span<const ComponentRecord> components, const ComplexityMatrix& matrix);

double compute_ufp(const UfpBreakdown& breakdown, const WeightTable& table) noexcept;

} // namespace fpcal
