#include "fpcal/fp_model.hpp"

#include "fpcal/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

namespace fpcal {

namespace {

using L = ComplexityLevel;

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

constexpr std::array<std::array<L, 3>, 3> kStandardGrid = {{
    {L::Low, L::Low, L::Average},
    {L::Low, L::Average, L::High},
    {L::Average, L::High, L::High},
}};

constexpr KindMatrix kDataFunctionMatrix{{19, 50}, {1, 5}, kStandardGrid};
constexpr KindMatrix kInputMatrix{{4, 15}, {1, 2}, kStandardGrid};
constexpr KindMatrix kOutputMatrix{{5, 19}, {1, 3}, kStandardGrid};

} // namespace

std::string_view to_string(ComponentKind k) noexcept {
    switch (k) {
    case ComponentKind::EI: return "EI";
    case ComponentKind::EO: return "EO";
    case ComponentKind::EQ: return "EQ";
    case ComponentKind::ILF: return "ILF";
    case ComponentKind::EIF: return "EIF";
    }
    return "?";
}

std::string_view to_string(ComplexityLevel l) noexcept {
    switch (l) {
    case ComplexityLevel::Low: return "low";
    case ComplexityLevel::Average: return "average";
    case ComplexityLevel::High: return "high";
    }
    return "?";
}

std::optional<ComponentKind> parse_kind(std::string_view s) noexcept {
    const std::string t = lower(s);
    for (ComponentKind k : kAllKinds) {
        if (t == lower(to_string(k))) return k;
    }
    return std::nullopt;
}

std::optional<ComplexityLevel> parse_level(std::string_view s) noexcept {
    const std::string t = lower(s);
    if (t == "low") return L::Low;
    if (t == "average" || t == "avg") return L::Average;
    if (t == "high") return L::High;
    return std::nullopt;
}

void ComponentRecord::validate() const {
    if (det < kMinDet) {
        throw InvalidInput(std::string(to_string(kind)) + ": DET must be >= 1, got " + std::to_string(det));
    }
    if (secondary < min_secondary(kind)) {
        throw InvalidInput(std::string(to_string(kind)) + ": " + (is_data_function(kind) ? "RET" : "FTR") +
                           " must be >= " + std::to_string(min_secondary(kind)) + ", got " +
                           std::to_string(secondary));
    }
}

ComplexityMatrix::ComplexityMatrix()
    : kinds_{kInputMatrix, kOutputMatrix, kOutputMatrix, kDataFunctionMatrix, kDataFunctionMatrix} {}

ComplexityMatrix::ComplexityMatrix(std::array<KindMatrix, kKindCount> kinds) : kinds_(kinds) {
    for (ComponentKind k : kAllKinds) validate(k, kinds_[index(k)]);
}

void ComplexityMatrix::validate(ComponentKind kind, const KindMatrix& m) {
    const std::string name(to_string(kind));
    if (m.det_cuts[0] < kMinDet || m.det_cuts[1] <= m.det_cuts[0]) {
        throw InvalidInput(name + ": det_cuts must be ascending and start at >= 1");
    }
    if (m.secondary_cuts[0] < min_secondary(kind) || m.secondary_cuts[1] <= m.secondary_cuts[0]) {
        throw InvalidInput(name + ": secondary_cuts must be ascending and start at >= " +
                           std::to_string(min_secondary(kind)));
    }
    for (std::size_t s = 0; s < 3; ++s) {
        for (std::size_t d = 0; d < 3; ++d) {
            if (d + 1 < 3 && m.grid[s][d + 1] < m.grid[s][d]) {
                throw InvalidInput(name + ": grid must be nondecreasing along the DET axis");
            }
            if (s + 1 < 3 && m.grid[s + 1][d] < m.grid[s][d]) {
                throw InvalidInput(name + ": grid must be nondecreasing along the secondary axis");
            }
        }
    }
}

WeightTable::WeightTable()
    : w_{{{3, 4, 6}, {4, 5, 7}, {3, 4, 6}, {7, 10, 15}, {5, 7, 10}}} {}

WeightTable::WeightTable(std::array<std::array<double, kLevelCount>, kKindCount> w, OrderCheck check) : w_(w) {
    for (ComponentKind k : kAllKinds) {
        const auto& r = w_[index(k)];
        for (double v : r) {
            if (!std::isfinite(v) || v <= 0.0) {
                throw InvalidInput(std::string(to_string(k)) + ": weights must be positive and finite");
            }
        }
        if (check == OrderCheck::Enforce && (r[0] > r[1] || r[1] > r[2])) {
            throw InvalidInput(std::string(to_string(k)) + ": weights must satisfy low <= average <= high");
        }
    }
}

WeightTable WeightTable::from_flat(std::span<const double, kCellCount> flat, OrderCheck check) {
    std::array<std::array<double, kLevelCount>, kKindCount> w{};
    for (std::size_t i = 0; i < kCellCount; ++i) w[i / kLevelCount][i % kLevelCount] = flat[i];
    return WeightTable(w, check);
}

bool WeightTable::is_ordered() const noexcept {
    return std::all_of(w_.begin(), w_.end(), [](const auto& r) { return r[0] <= r[1] && r[1] <= r[2]; });
}

std::array<double, kCellCount> WeightTable::flat() const noexcept {
    std::array<double, kCellCount> out{};
    for (std::size_t i = 0; i < kCellCount; ++i) out[i] = w_[i / kLevelCount][i % kLevelCount];
    return out;
}

void UfpBreakdown::set(ComponentKind k, ComplexityLevel l, Count value) {
    if (value < 0) throw InvalidInput("breakdown counts must be nonnegative");
    n_[cell_index(k, l)] = value;
}

UfpBreakdown UfpBreakdown::from_flat(std::span<const Count, kCellCount> flat) {
    UfpBreakdown b;
    for (std::size_t i = 0; i < kCellCount; ++i) {
        if (flat[i] < 0) throw InvalidInput("breakdown counts must be nonnegative");
        b.n_[i] = flat[i];
    }
    return b;
}

UfpBreakdown::Count UfpBreakdown::total() const noexcept {
    Count t = 0;
    for (Count c : n_) t += c;
    return t;
}

UfpBreakdown& UfpBreakdown::operator+=(const UfpBreakdown& other) {
    for (std::size_t i = 0; i < kCellCount; ++i) n_[i] += other.n_[i];
    return *this;
}

ComplexityLevel classify(ComponentKind kind, int det, int secondary, const ComplexityMatrix& matrix) {
    ComponentRecord{kind, det, secondary}.validate();
    const KindMatrix& m = matrix[kind];
    return m.grid[range_of(secondary, m.secondary_cuts)][range_of(det, m.det_cuts)];
}

UfpBreakdown breakdown_from_components(std::span<const ComponentRecord> components, const ComplexityMatrix& matrix) {
    UfpBreakdown b;
    for (std::size_t i = 0; i < components.size(); ++i) {
        const ComponentRecord& c = components[i];
        try {
            b.add(c.kind, classify(c.kind, c.det, c.secondary, matrix));
        } catch (const InvalidInput& e) {
            throw InvalidInput("component " + std::to_string(i) + ": " + e.what());
        }
    }
    return b;
}

double compute_ufp(const UfpBreakdown& breakdown, const WeightTable& table) noexcept {
    const auto w = table.flat();
    const auto& n = breakdown.flat();
    double ufp = 0.0;
    for (std::size_t i = 0; i < kCellCount; ++i) ufp += w[i] * static_cast<double>(n[i]);
    return ufp;
}

} // namespace fpcal
