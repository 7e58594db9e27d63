#include "fpcal/io.hpp"

#include "fpcal/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace fpcal {

namespace {

std::string fmt(double v) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

const Json& member(const Json& j, std::string_view key, std::string_view where) {
    if (!j.is_object()) throw InvalidInput(std::string(where) + ": expected a JSON object");
    const auto it = j.find(key);
    if (it == j.end()) throw InvalidInput(std::string(where) + ": missing key '" + std::string(key) + "'");
    return *it;
}

double number(const Json& j, std::string_view where) {
    if (!j.is_number()) throw InvalidInput(std::string(where) + ": expected a number");
    return j.get<double>();
}

template <class T>
void read_optional(const Json& j, std::string_view key, T& out) {
    const auto it = j.find(key);
    if (it == j.end()) return;
    try {
        out = it->template get<T>();
    } catch (const nlohmann::json::exception&) {
        throw InvalidInput("key '" + std::string(key) + "' has the wrong type");
    }
}

ComplexityLevel level_from_json(const Json& j, std::string_view where) {
    if (j.is_string()) {
        if (auto l = parse_level(j.get<std::string>())) return *l;
    } else if (j.is_number_integer()) {
        const auto v = j.get<long long>();
        if (v >= 0 && v < 3) return static_cast<ComplexityLevel>(v);
    }
    throw InvalidInput(std::string(where) + ": grid cells must be \"low\", \"average\" or \"high\"");
}

std::array<int, 2> cuts_from_json(const Json& j, std::string_view where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
        throw InvalidInput(std::string(where) + ": expected two integer cut points");
    }
    return {j[0].get<int>(), j[1].get<int>()};
}

} // namespace

Json to_json(const WeightTable& table) {
    Json j = Json::object();
    for (ComponentKind k : kAllKinds) {
        Json row = Json::object();
        for (ComplexityLevel l : kAllLevels) row[std::string(to_string(l))] = table(k, l);
        j[std::string(to_string(k))] = row;
    }
    return j;
}

WeightTable weights_from_json(const Json& j, OrderCheck check) {
    std::array<std::array<double, kLevelCount>, kKindCount> w{};
    for (ComponentKind k : kAllKinds) {
        const std::string kind(to_string(k));
        const Json& row = member(j, kind, "weights");
        for (ComplexityLevel l : kAllLevels) {
            const std::string level(to_string(l));
            w[index(k)][index(l)] = number(member(row, level, "weights." + kind), "weights." + kind + "." + level);
        }
    }
    return WeightTable(w, check);
}

Json to_json(const ComplexityMatrix& matrix) {
    Json j = Json::object();
    for (ComponentKind k : kAllKinds) {
        const KindMatrix& m = matrix[k];
        Json grid = Json::array();
        for (const auto& row : m.grid) {
            Json r = Json::array();
            for (ComplexityLevel l : row) r.push_back(std::string(to_string(l)));
            grid.push_back(r);
        }
        j[std::string(to_string(k))] = Json{{"det_cuts", {m.det_cuts[0], m.det_cuts[1]}},
                                            {"secondary_cuts", {m.secondary_cuts[0], m.secondary_cuts[1]}},
                                            {"grid", grid}};
    }
    return j;
}

ComplexityMatrix matrix_from_json(const Json& j) {
    std::array<KindMatrix, kKindCount> kinds{};
    for (ComponentKind k : kAllKinds) {
        const std::string where = "matrices." + std::string(to_string(k));
        const Json& m = member(j, to_string(k), "matrices");
        KindMatrix& km = kinds[index(k)];
        km.det_cuts = cuts_from_json(member(m, "det_cuts", where), where + ".det_cuts");
        km.secondary_cuts = cuts_from_json(member(m, "secondary_cuts", where), where + ".secondary_cuts");
        const Json& grid = member(m, "grid", where);
        if (!grid.is_array() || grid.size() != 3) throw InvalidInput(where + ".grid: expected 3 rows");
        for (std::size_t s = 0; s < 3; ++s) {
            if (!grid[s].is_array() || grid[s].size() != 3) throw InvalidInput(where + ".grid: expected 3 columns");
            for (std::size_t d = 0; d < 3; ++d) km.grid[s][d] = level_from_json(grid[s][d], where + ".grid");
        }
    }
    return ComplexityMatrix(kinds);
}

Json to_json(const FuzzyConfig& c) {
    return Json{{"spread", c.spread}, {"centroid_samples", c.centroid_samples}};
}

FuzzyConfig fuzzy_config_from_json(const Json& j) {
    if (!j.is_object()) throw InvalidInput("fuzzy: expected a JSON object");
    FuzzyConfig c;
    read_optional(j, "spread", c.spread);
    read_optional(j, "centroid_samples", c.centroid_samples);
    c.validate();
    return c;
}

Json to_json(const CalibrationConfig& c) {
    return Json{{"learning_rate", c.learning_rate}, {"max_epochs", c.max_epochs},
                {"tolerance", c.tolerance},         {"weight_floor", c.weight_floor},
                {"enforce_ordering", c.enforce_ordering}, {"seed", c.seed}};
}

CalibrationConfig calibration_config_from_json(const Json& j) {
    if (!j.is_object()) throw InvalidInput("calibration: expected a JSON object");
    CalibrationConfig c;
    read_optional(j, "learning_rate", c.learning_rate);
    read_optional(j, "max_epochs", c.max_epochs);
    read_optional(j, "tolerance", c.tolerance);
    read_optional(j, "weight_floor", c.weight_floor);
    read_optional(j, "enforce_ordering", c.enforce_ordering);
    read_optional(j, "seed", c.seed);
    c.validate();
    return c;
}

Json to_json(const RegressionModel& m) {
    return Json{{"A", m.A}, {"B", m.B}, {"n_fit", m.n_fit}, {"r_squared", m.r_squared}};
}

RegressionModel model_from_json(const Json& j) {
    RegressionModel m;
    m.A = number(member(j, "A", "model"), "model.A");
    m.B = number(member(j, "B", "model"), "model.B");
    read_optional(j, "n_fit", m.n_fit);
    read_optional(j, "r_squared", m.r_squared);
    if (!(m.A > 0.0) || !std::isfinite(m.A) || !std::isfinite(m.B)) {
        throw InvalidInput("model: A must be positive and B finite");
    }
    return m;
}

Json to_json(const CalibrationResult& r) {
    Json j = to_json(r.calibrated);
    j["epochs_run"] = r.epochs_run;
    j["initial_loss"] = r.initial_loss;
    j["final_loss"] = r.final_loss;
    return j;
}

std::string loss_history_csv(const CalibrationResult& r) {
    std::string out = "epoch,loss\n";
    for (const LossPoint& p : r.loss_history) out += std::to_string(p.epoch) + "," + fmt(p.loss) + "\n";
    return out;
}

Json to_json(const EvaluationReport& r) {
    Json pred = Json::array();
    for (std::size_t i = 0; i < r.pred_levels.size(); ++i) {
        pred.push_back(Json{{"level", r.pred_levels[i]},
                            {"original", r.pred_original[i]},
                            {"calibrated", r.pred_calibrated[i]}});
    }
    return Json{{"n_test", r.n_test},
                {"mmre_original", r.mmre_original},
                {"mmre_calibrated", r.mmre_calibrated},
                {"improvement", r.improvement},
                {"pred", pred}};
}

std::string evaluation_csv(const EvaluationReport& r) {
    std::string out = "variant,n_test,mmre";
    for (double p : r.pred_levels) out += ",pred_" + std::to_string(static_cast<int>(std::lround(p * 100)));
    out += "\n";
    auto row = [&](std::string_view name, double m, const std::vector<double>& pred) {
        out += std::string(name) + "," + std::to_string(r.n_test) + "," + fmt(m);
        for (double v : pred) out += "," + fmt(v);
        out += "\n";
    };
    row("original", r.mmre_original, r.pred_original);
    row("calibrated", r.mmre_calibrated, r.pred_calibrated);
    return out;
}

Json to_json(const ExperimentReport& r) {
    Json rows = Json::array();
    for (const RepetitionResult& row : r.rows) {
        rows.push_back(Json{{"repetition", row.index},
                            {"seed", row.seed},
                            {"n_train", row.n_train},
                            {"outliers", row.outliers},
                            {"model", to_json(row.model)},
                            {"calibration", to_json(row.calibration)},
                            {"evaluation", to_json(row.evaluation)}});
    }
    return Json{{"corpus_size", r.corpus_size},
                {"filtered_size", r.filtered_size},
                {"repetitions", rows},
                {"mean_improvement", r.mean_improvement},
                {"mean_calibrated_weights", to_json(r.mean_calibrated)}};
}

std::string experiment_csv(const ExperimentReport& r) {
    std::string out = "repetition,seed,n_train,n_outliers,n_test,A,B,initial_loss,final_loss,epochs_run,"
                      "mmre_original,mmre_calibrated,improvement";
    if (!r.rows.empty()) {
        for (double p : r.rows.front().evaluation.pred_levels) {
            const std::string tag = std::to_string(static_cast<int>(std::lround(p * 100)));
            out += ",pred_" + tag + "_original,pred_" + tag + "_calibrated";
        }
    }
    out += "\n";
    for (const RepetitionResult& row : r.rows) {
        const EvaluationReport& e = row.evaluation;
        out += std::to_string(row.index) + "," + std::to_string(row.seed) + "," + std::to_string(row.n_train) + "," +
               std::to_string(row.outliers.size()) + "," + std::to_string(e.n_test) + "," + fmt(row.model.A) + "," +
               fmt(row.model.B) + "," + fmt(row.calibration.initial_loss) + "," + fmt(row.calibration.final_loss) +
               "," + std::to_string(row.calibration.epochs_run) + "," + fmt(e.mmre_original) + "," +
               fmt(e.mmre_calibrated) + "," + fmt(e.improvement);
        for (std::size_t i = 0; i < e.pred_levels.size(); ++i) {
            out += "," + fmt(e.pred_original[i]) + "," + fmt(e.pred_calibrated[i]);
        }
        out += "\n";
    }
    return out;
}

ToolConfig config_from_json(const Json& j) {
    if (!j.is_object()) throw InvalidInput("config: expected a JSON object");
    ToolConfig c;
    if (j.contains("matrices")) c.matrix = matrix_from_json(j["matrices"]);
    if (j.contains("weights")) c.weights = weights_from_json(j["weights"]);
    if (j.contains("fuzzy")) c.fuzzy = fuzzy_config_from_json(j["fuzzy"]);
    if (j.contains("calibration")) c.calibration = calibration_config_from_json(j["calibration"]);
    return c;
}

Json to_json(const ToolConfig& c) {
    return Json{{"matrices", to_json(c.matrix)},
                {"weights", to_json(c.weights)},
                {"fuzzy", to_json(c.fuzzy)},
                {"calibration", to_json(c.calibration)}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInput("cannot open '" + path.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw InvalidInput("failed writing '" + path.string() + "'");
}

Json read_json_file(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(0, path.string() + ": " + e.what());
    }
}

} // namespace fpcal
