#pragma once

// JSON and CSV forms of tables, configs, models and reports. JSON objects are
// emitted with a fixed key order so identical values print identical bytes.

#include "fpcal/calibration.hpp"
#include "fpcal/dataset.hpp"
#include "fpcal/effort_model.hpp"
#include "fpcal/experiment.hpp"
#include "fpcal/fp_model.hpp"
#include "fpcal/fuzzy_complexity.hpp"
#include "fpcal/metrics.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <string_view>

namespace fpcal {

using Json = nlohmann::ordered_json;

// {"EI": {"low": 3, "average": 4, "high": 6}, ...}; unknown keys are ignored so
// a calibration result can be read back as a weight table.
Json to_json(const WeightTable& table);
WeightTable weights_from_json(const Json& j, OrderCheck check = OrderCheck::Enforce);

// {"EI": {"det_cuts": [4, 15], "secondary_cuts": [1, 2], "grid": [["low", ...], ...]}, ...}
Json to_json(const ComplexityMatrix& matrix);
ComplexityMatrix matrix_from_json(const Json& j);

Json to_json(const FuzzyConfig& c);
FuzzyConfig fuzzy_config_from_json(const Json& j);

Json to_json(const CalibrationConfig& c);
CalibrationConfig calibration_config_from_json(const Json& j);

Json to_json(const RegressionModel& m);
RegressionModel model_from_json(const Json& j);

/// Weight table keys plus epochs_run, initial_loss, final_loss.
Json to_json(const CalibrationResult& r);
std::string loss_history_csv(const CalibrationResult& r);

Json to_json(const EvaluationReport& r);
/// Header plus one row per variant (original, calibrated).
std::string evaluation_csv(const EvaluationReport& r);

Json to_json(const ExperimentReport& r);
/// One row per repetition.
std::string experiment_csv(const ExperimentReport& r);

/// Top-level config file; every section is optional and falls back to defaults.
struct ToolConfig {
    ComplexityMatrix matrix;
    WeightTable weights;
    FuzzyConfig fuzzy;
    CalibrationConfig calibration;
};

ToolConfig config_from_json(const Json& j);
Json to_json(const ToolConfig& c);

/// Pretty-printed (2-space indent) with a trailing newline.
std::string dump(const Json& j);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);
/// Parse errors are rethrown as ParseError naming the file.
Json read_json_file(const std::filesystem::path& path);

} // namespace fpcal
