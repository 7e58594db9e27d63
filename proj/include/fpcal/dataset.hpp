#pragma once

// ISBSG-style project rows: CSV ingestion, the quality/method filter, seeded
// train/test splits, log-residual outlier flagging and a synthetic corpus
// generator with a known weight table.

#include "fpcal/calibration.hpp"
#include "fpcal/effort_model.hpp"
#include "fpcal/fp_model.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fpcal {

enum class Quality : std::uint8_t { A, B, C, D };

std::string_view to_string(Quality q) noexcept;
std::optional<Quality> parse_quality(std::string_view s) noexcept;

inline constexpr std::size_t kGscCount = 14;
using GscRatings = std::array<int, kGscCount>;

struct ProjectRecord {
    std::string id;
    Quality quality = Quality::A;
    std::string count_method;
    int resource_level = 1;
    std::string dev_type;
    std::optional<UfpBreakdown> breakdown; ///< nullopt when any of the 15 cells is blank
    std::optional<GscRatings> gsc;         ///< nullopt when any rating is blank
    double effort = 0.0;                   ///< person-hours

    bool operator==(const ProjectRecord&) const = default;
};

/// CSV column names in canonical order.
const std::vector<std::string>& csv_columns();

/// Throws ParseError naming the offending line.
std::vector<ProjectRecord> parse_projects(std::string_view csv_text);
std::string write_projects(std::span<const ProjectRecord> records);

struct FilterCriteria {
    std::vector<Quality> qualities{Quality::A, Quality::B};
    std::string count_method = "IFPUG";
    int resource_level = 1;
    std::vector<std::string> dev_types{"New Development", "Re-development"};
    bool require_complete = true;

    void validate() const;
};

std::vector<ProjectRecord> filter_isbsg(std::span<const ProjectRecord> records, const FilterCriteria& criteria = {});

struct SplitSpec {
    std::uint64_t seed = 0;
    std::size_t train_count = 100;
};

struct Split {
    std::vector<ProjectRecord> train;
    std::vector<ProjectRecord> test;
};

/// Uniform random partition; both halves keep the input order.
Split split(std::span<const ProjectRecord> records, const SplitSpec& spec);

inline constexpr double kDefaultOutlierK = 2.5;

/// Ids whose |ln effort - ln predicted| exceeds k times the (population)
/// standard deviation of the log residuals, with UFP computed under `weights`.
std::set<std::string> detect_outliers(std::span<const ProjectRecord> records, const RegressionModel& model,
                                      const WeightTable& weights, double k = kDefaultOutlierK);

std::vector<ProjectRecord> remove_ids(std::span<const ProjectRecord> records, const std::set<std::string>& ids);

struct SyntheticSpec {
    std::size_t project_count = 200;
    WeightTable hidden_weights;
    double A = 10.0;
    double B = 1.0;
    double noise_sigma = 0.0; ///< std-dev of Gaussian noise on ln effort
    int count_max = 10;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Fully determined by spec.seed.
std::vector<ProjectRecord> gen_synthetic(const SyntheticSpec& spec);

/// Throws InvalidInput when a record has no breakdown.
std::vector<TrainingProject> training_projects(std::span<const ProjectRecord> records);
std::vector<SizeEffortPoint> size_effort_points(std::span<const ProjectRecord> records, const WeightTable& weights);

} // namespace fpcal
