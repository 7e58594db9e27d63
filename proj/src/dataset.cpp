#include "fpcal/dataset.hpp"

#include "fpcal/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <unordered_set>

namespace fpcal {

namespace {

// Each consumer of a seed draws from its own stream so adding draws in one
// place never shifts another.
enum Stream : std::uint32_t { kCounts = 1, kNoise = 2, kRatings = 3, kSplit = 4 };

std::mt19937_64 make_engine(std::uint64_t seed, Stream stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream)};
    return std::mt19937_64(seq);
}

constexpr std::array<std::string_view, kLevelCount> kLevelSuffix = {"low", "avg", "high"};

std::vector<std::string> make_columns() {
    std::vector<std::string> cols = {"id", "quality", "count_method", "resource_level", "dev_type"};
    for (ComponentKind k : kAllKinds) {
        std::string kind(to_string(k));
        std::transform(kind.begin(), kind.end(), kind.begin(), [](unsigned char c) { return std::tolower(c); });
        for (auto suffix : kLevelSuffix) cols.push_back(kind + "_" + std::string(suffix));
    }
    for (std::size_t g = 1; g <= kGscCount; ++g) cols.push_back("gsc_" + std::to_string(g));
    cols.push_back("effort_hours");
    return cols;
}

constexpr std::size_t kBreakdownColumn = 5;
constexpr std::size_t kGscColumn = kBreakdownColumn + kCellCount;
constexpr std::size_t kEffortColumn = kGscColumn + kGscCount;

std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted) throw ParseError(line_no, "unterminated quoted field");
    fields.push_back(std::move(cur));
    return fields;
}

std::string quote_if_needed(std::string_view s) {
    if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

template <class Int>
Int parse_int(const std::string& s, std::size_t line, std::string_view column) {
    Int v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        throw ParseError(line, "column '" + std::string(column) + "': expected an integer, got '" + s + "'");
    }
    return v;
}

double parse_double(const std::string& s, std::size_t line, std::string_view column) {
    double v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        throw ParseError(line, "column '" + std::string(column) + "': expected a number, got '" + s + "'");
    }
    return v;
}

std::string format_double(double v) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

} // namespace

std::string_view to_string(Quality q) noexcept {
    switch (q) {
    case Quality::A: return "A";
    case Quality::B: return "B";
    case Quality::C: return "C";
    case Quality::D: return "D";
    }
    return "?";
}

std::optional<Quality> parse_quality(std::string_view s) noexcept {
    if (s == "A") return Quality::A;
    if (s == "B") return Quality::B;
    if (s == "C") return Quality::C;
    if (s == "D") return Quality::D;
    return std::nullopt;
}

const std::vector<std::string>& csv_columns() {
    static const std::vector<std::string> cols = make_columns();
    return cols;
}

std::vector<ProjectRecord> parse_projects(std::string_view text) {
    const auto& columns = csv_columns();
    std::vector<std::string> lines;
    {
        std::size_t start = 0;
        while (start <= text.size()) {
            std::size_t end = text.find('\n', start);
            if (end == std::string_view::npos) end = text.size();
            std::string_view line = text.substr(start, end - start);
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            lines.emplace_back(line);
            start = end + 1;
        }
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty()) throw ParseError(1, "missing header row");
    if (lines[0].rfind("\xEF\xBB\xBF", 0) == 0) lines[0].erase(0, 3);

    // position[c] = field index of canonical column c
    std::vector<std::size_t> position(columns.size(), std::numeric_limits<std::size_t>::max());
    const auto header = split_csv_line(lines[0], 1);
    for (std::size_t f = 0; f < header.size(); ++f) {
        const auto it = std::find(columns.begin(), columns.end(), header[f]);
        if (it == columns.end()) throw ParseError(1, "unknown column '" + header[f] + "'");
        const std::size_t c = static_cast<std::size_t>(it - columns.begin());
        if (position[c] != std::numeric_limits<std::size_t>::max()) {
            throw ParseError(1, "duplicate column '" + header[f] + "'");
        }
        position[c] = f;
    }
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (position[c] == std::numeric_limits<std::size_t>::max()) {
            throw ParseError(1, "missing column '" + columns[c] + "'");
        }
    }

    std::vector<ProjectRecord> records;
    std::unordered_set<std::string> ids;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        const std::size_t line_no = li + 1;
        if (lines[li].empty()) continue;
        const auto fields = split_csv_line(lines[li], line_no);
        if (fields.size() != header.size()) {
            throw ParseError(line_no, "expected " + std::to_string(header.size()) + " fields, got " +
                                          std::to_string(fields.size()));
        }
        auto field = [&](std::size_t c) -> const std::string& { return fields[position[c]]; };

        ProjectRecord r;
        r.id = field(0);
        if (r.id.empty()) throw ParseError(line_no, "empty id");
        if (!ids.insert(r.id).second) throw ParseError(line_no, "duplicate id '" + r.id + "'");
        const auto q = parse_quality(field(1));
        if (!q) throw ParseError(line_no, "quality must be one of A, B, C, D, got '" + field(1) + "'");
        r.quality = *q;
        r.count_method = field(2);
        r.resource_level = parse_int<int>(field(3), line_no, columns[3]);
        r.dev_type = field(4);

        bool breakdown_blank = false;
        std::array<UfpBreakdown::Count, kCellCount> counts{};
        for (std::size_t j = 0; j < kCellCount; ++j) {
            const std::string& s = field(kBreakdownColumn + j);
            if (s.empty()) {
                breakdown_blank = true;
                continue;
            }
            counts[j] = parse_int<UfpBreakdown::Count>(s, line_no, columns[kBreakdownColumn + j]);
            if (counts[j] < 0) {
                throw ParseError(line_no, "column '" + columns[kBreakdownColumn + j] + "' must be >= 0");
            }
        }
        if (!breakdown_blank) r.breakdown = UfpBreakdown::from_flat(counts);

        bool gsc_blank = false;
        GscRatings gsc{};
        for (std::size_t g = 0; g < kGscCount; ++g) {
            const std::string& s = field(kGscColumn + g);
            if (s.empty()) {
                gsc_blank = true;
                continue;
            }
            gsc[g] = parse_int<int>(s, line_no, columns[kGscColumn + g]);
            if (gsc[g] < 0 || gsc[g] > 5) {
                throw ParseError(line_no, "column '" + columns[kGscColumn + g] + "' must lie in [0, 5]");
            }
        }
        if (!gsc_blank) r.gsc = gsc;

        r.effort = parse_double(field(kEffortColumn), line_no, columns[kEffortColumn]);
        if (!(r.effort > 0.0) || !std::isfinite(r.effort)) {
            throw ParseError(line_no, "effort_hours must be positive, got " + field(kEffortColumn));
        }
        records.push_back(std::move(r));
    }
    return records;
}

std::string write_projects(std::span<const ProjectRecord> records) {
    const auto& columns = csv_columns();
    std::string out;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (c) out += ',';
        out += columns[c];
    }
    out += '\n';
    for (const ProjectRecord& r : records) {
        out += quote_if_needed(r.id);
        out += ',';
        out += to_string(r.quality);
        out += ',';
        out += quote_if_needed(r.count_method);
        out += ',';
        out += std::to_string(r.resource_level);
        out += ',';
        out += quote_if_needed(r.dev_type);
        for (std::size_t j = 0; j < kCellCount; ++j) {
            out += ',';
            if (r.breakdown) out += std::to_string(r.breakdown->flat()[j]);
        }
        for (std::size_t g = 0; g < kGscCount; ++g) {
            out += ',';
            if (r.gsc) out += std::to_string((*r.gsc)[g]);
        }
        out += ',';
        out += format_double(r.effort);
        out += '\n';
    }
    return out;
}

void FilterCriteria::validate() const {
    if (qualities.empty()) throw InvalidInput("filter: allowed qualities must not be empty");
    if (dev_types.empty()) throw InvalidInput("filter: allowed development types must not be empty");
}

std::vector<ProjectRecord> filter_isbsg(std::span<const ProjectRecord> records, const FilterCriteria& criteria) {
    criteria.validate();
    std::vector<ProjectRecord> kept;
    for (const ProjectRecord& r : records) {
        if (std::find(criteria.qualities.begin(), criteria.qualities.end(), r.quality) == criteria.qualities.end()) {
            continue;
        }
        if (r.count_method != criteria.count_method) continue;
        if (r.resource_level != criteria.resource_level) continue;
        if (std::find(criteria.dev_types.begin(), criteria.dev_types.end(), r.dev_type) == criteria.dev_types.end()) {
            continue;
        }
        if (criteria.require_complete && (!r.breakdown || !r.gsc)) continue;
        kept.push_back(r);
    }
    return kept;
}

Split split(std::span<const ProjectRecord> records, const SplitSpec& spec) {
    if (spec.train_count == 0 || spec.train_count >= records.size()) {
        throw InvalidInput("split: train_count must lie in (0, " + std::to_string(records.size()) + "), got " +
                           std::to_string(spec.train_count));
    }
    std::vector<std::size_t> order(records.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto engine = make_engine(spec.seed, kSplit);
    std::shuffle(order.begin(), order.end(), engine);

    std::vector<bool> in_train(records.size(), false);
    for (std::size_t i = 0; i < spec.train_count; ++i) in_train[order[i]] = true;

    Split s;
    s.train.reserve(spec.train_count);
    s.test.reserve(records.size() - spec.train_count);
    for (std::size_t i = 0; i < records.size(); ++i) (in_train[i] ? s.train : s.test).push_back(records[i]);
    return s;
}

std::set<std::string> detect_outliers(std::span<const ProjectRecord> records, const RegressionModel& model,
                                      const WeightTable& weights, double k) {
    if (records.size() < 3) throw InvalidInput("outlier detection needs at least 3 records");
    if (!(k > 0.0)) throw InvalidInput("outlier threshold k must be positive");

    const auto points = size_effort_points(records, weights);
    std::vector<double> residual(points.size());
    double scale = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double log_effort = std::log(points[i].effort);
        residual[i] = log_effort - std::log(predict_effort(model, points[i].ufp));
        scale = std::max(scale, std::fabs(log_effort));
    }
    const double n = static_cast<double>(residual.size());
    const double mean = std::accumulate(residual.begin(), residual.end(), 0.0) / n;
    double var = 0.0;
    for (double r : residual) var += (r - mean) * (r - mean);
    const double sigma = std::sqrt(var / n);

    std::set<std::string> flagged;
    // Residual spread at rounding level means the data follow the law exactly.
    const double degenerate = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, scale);
    if (!(sigma > degenerate) || std::isinf(k)) return flagged;
    for (std::size_t i = 0; i < residual.size(); ++i) {
        if (std::fabs(residual[i]) > k * sigma) flagged.insert(records[i].id);
    }
    return flagged;
}

std::vector<ProjectRecord> remove_ids(std::span<const ProjectRecord> records, const std::set<std::string>& ids) {
    std::vector<ProjectRecord> kept;
    for (const ProjectRecord& r : records) {
        if (!ids.contains(r.id)) kept.push_back(r);
    }
    return kept;
}

void SyntheticSpec::validate() const {
    if (project_count < 1) throw InvalidInput("synthetic corpus needs project_count >= 1");
    if (!(A > 0.0) || !std::isfinite(A)) throw InvalidInput("synthetic corpus needs A > 0");
    if (!std::isfinite(B)) throw InvalidInput("synthetic corpus needs a finite B");
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) throw InvalidInput("noise_sigma must be >= 0");
    if (count_max < 1) throw InvalidInput("count_max must be >= 1");
}

std::vector<ProjectRecord> gen_synthetic(const SyntheticSpec& spec) {
    spec.validate();
    auto counts_rng = make_engine(spec.seed, kCounts);
    auto noise_rng = make_engine(spec.seed, kNoise);
    auto ratings_rng = make_engine(spec.seed, kRatings);
    std::uniform_int_distribution<UfpBreakdown::Count> count_dist(0, spec.count_max);
    std::uniform_int_distribution<int> rating_dist(0, 5);
    std::normal_distribution<double> noise_dist(0.0, 1.0);

    const std::size_t width = std::to_string(spec.project_count).size();
    std::vector<ProjectRecord> out;
    out.reserve(spec.project_count);
    for (std::size_t p = 0; p < spec.project_count; ++p) {
        std::array<UfpBreakdown::Count, kCellCount> counts{};
        do {
            for (auto& c : counts) c = count_dist(counts_rng);
        } while (std::all_of(counts.begin(), counts.end(), [](auto c) { return c == 0; }));

        ProjectRecord r;
        std::string num = std::to_string(p + 1);
        r.id = "SYN-" + std::string(width - num.size(), '0') + num;
        r.quality = Quality::A;
        r.count_method = "IFPUG";
        r.resource_level = 1;
        r.dev_type = "New Development";
        r.breakdown = UfpBreakdown::from_flat(counts);
        GscRatings gsc{};
        for (int& g : gsc) g = rating_dist(ratings_rng);
        r.gsc = gsc;

        const double eps = spec.noise_sigma > 0.0 ? spec.noise_sigma * noise_dist(noise_rng) : 0.0;
        const double exact = spec.A * std::pow(compute_ufp(*r.breakdown, spec.hidden_weights), spec.B);
        r.effort = eps == 0.0 ? exact : exact * std::exp(eps);
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<TrainingProject> training_projects(std::span<const ProjectRecord> records) {
    std::vector<TrainingProject> out;
    out.reserve(records.size());
    for (const ProjectRecord& r : records) {
        if (!r.breakdown) throw InvalidInput("project '" + r.id + "' has no UFP breakdown");
        out.push_back({*r.breakdown, r.effort});
    }
    return out;
}

std::vector<SizeEffortPoint> size_effort_points(std::span<const ProjectRecord> records, const WeightTable& weights) {
    std::vector<SizeEffortPoint> out;
    out.reserve(records.size());
    for (const ProjectRecord& r : records) {
        if (!r.breakdown) throw InvalidInput("project '" + r.id + "' has no UFP breakdown");
        out.push_back({compute_ufp(*r.breakdown, weights), r.effort});
    }
    return out;
}

} // namespace fpcal
