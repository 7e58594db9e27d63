#include "cli.hpp"

#include "fpcal/calibration.hpp"
#include "fpcal/dataset.hpp"
#include "fpcal/effort_model.hpp"
#include "fpcal/error.hpp"
#include "fpcal/experiment.hpp"
#include "fpcal/fp_model.hpp"
#include "fpcal/fuzzy_complexity.hpp"
#include "fpcal/io.hpp"
#include "fpcal/metrics.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

namespace fpcal::cli {

namespace {

struct Common {
    std::string input;
    std::string output;
    std::string config;
    std::uint64_t seed = 0;
};

ToolConfig load_config(const std::string& path) {
    return path.empty() ? ToolConfig{} : config_from_json(read_json_file(path));
}

std::vector<ProjectRecord> load_projects(const std::string& path) { return parse_projects(read_file(path)); }

void emit(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty()) {
        out << content;
    } else {
        write_file(path, content);
    }
}

std::vector<std::string> split_list(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) {
        const auto b = cur.find_first_not_of(" \t");
        const auto e = cur.find_last_not_of(" \t\r");
        parts.push_back(b == std::string::npos ? std::string{} : cur.substr(b, e - b + 1));
    }
    return parts;
}

int to_int(const std::string& s, std::string_view what) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        throw InvalidInput(std::string(what) + ": expected an integer, got '" + s + "'");
    }
    return v;
}

UfpBreakdown parse_breakdown_flag(const std::string& s) {
    const auto parts = split_list(s, ',');
    if (parts.size() != kCellCount) {
        throw InvalidInput("--breakdown needs 15 comma-separated counts (EI low/avg/high, EO, EQ, ILF, EIF)");
    }
    std::array<UfpBreakdown::Count, kCellCount> counts{};
    for (std::size_t i = 0; i < kCellCount; ++i) counts[i] = to_int(parts[i], "--breakdown");
    return UfpBreakdown::from_flat(counts);
}

/// CSV with header kind,det,secondary.
std::vector<ComponentRecord> parse_components(const std::string& text) {
    std::vector<ComponentRecord> out;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    bool header = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split_list(line, ',');
        if (header) {
            if (f != std::vector<std::string>{"kind", "det", "secondary"}) {
                throw ParseError(line_no, "component list header must be 'kind,det,secondary'");
            }
            header = false;
            continue;
        }
        if (f.size() != 3) throw ParseError(line_no, "expected 3 fields");
        const auto kind = parse_kind(f[0]);
        if (!kind) throw ParseError(line_no, "unknown component kind '" + f[0] + "'");
        try {
            ComponentRecord r{*kind, to_int(f[1], "det"), to_int(f[2], "secondary")};
            r.validate();
            out.push_back(r);
        } catch (const InvalidInput& e) {
            throw ParseError(line_no, e.what());
        }
    }
    if (header) throw ParseError(1, "component list is missing its header row");
    return out;
}

Json breakdown_json(const UfpBreakdown& b) {
    Json j = Json::object();
    for (ComponentKind k : kAllKinds) {
        Json row = Json::object();
        for (ComplexityLevel l : kAllLevels) row[std::string(to_string(l))] = b(k, l);
        j[std::string(to_string(k))] = row;
    }
    return j;
}

void add_common(CLI::App* cmd, Common& c, bool input, bool seed) {
    if (input) cmd->add_option("--input", c.input, "Input file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--output", c.output, "Output file (stdout when omitted)");
    cmd->add_option("--config", c.config, "JSON config with matrices/weights/fuzzy/calibration sections")
        ->check(CLI::ExistingFile);
    if (seed) cmd->add_option("--seed", c.seed, "Random seed");
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Function-point weight calibration toolkit", "fpcal"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    Common common;
    std::function<void()> action;

    // gen
    SyntheticSpec gen_spec;
    std::string hidden_weights;
    auto* gen = app.add_subcommand("gen", "Write a synthetic corpus with a known weight table");
    add_common(gen, common, false, true);
    gen->add_option("--count", gen_spec.project_count, "Number of projects")->capture_default_str();
    gen->add_option("--sigma", gen_spec.noise_sigma, "Std-dev of Gaussian noise on ln(effort)")->capture_default_str();
    gen->add_option("--count-max", gen_spec.count_max, "Max components per breakdown cell")->capture_default_str();
    gen->add_option("-A,--A", gen_spec.A, "True effort-law coefficient")->capture_default_str();
    gen->add_option("-B,--B", gen_spec.B, "True effort-law exponent")->capture_default_str();
    gen->add_option("--hidden-weights", hidden_weights, "Weight table JSON used to generate efforts")
        ->check(CLI::ExistingFile);
    gen->callback([&] {
        action = [&] {
            const ToolConfig cfg = load_config(common.config);
            gen_spec.hidden_weights = hidden_weights.empty() ? cfg.weights
                                                             : weights_from_json(read_json_file(hidden_weights));
            gen_spec.seed = common.seed;
            if (common.output.empty()) throw CLI::RequiredError("--output");
            write_file(common.output, write_projects(gen_synthetic(gen_spec)));
        };
    });

    // filter
    FilterCriteria criteria;
    std::string qualities = "A,B";
    std::string dev_types = "New Development;Re-development";
    bool allow_incomplete = false;
    auto* filt = app.add_subcommand("filter", "Keep rows meeting the data-quality criteria");
    add_common(filt, common, true, false);
    filt->add_option("--qualities", qualities, "Comma-separated allowed quality ratings")->capture_default_str();
    filt->add_option("--count-method", criteria.count_method, "Required counting method")->capture_default_str();
    filt->add_option("--resource-level", criteria.resource_level, "Required effort resource level")
        ->capture_default_str();
    filt->add_option("--dev-types", dev_types, "Semicolon-separated allowed development types")
        ->capture_default_str();
    filt->add_flag("--allow-incomplete", allow_incomplete, "Keep rows with blank breakdown or GSC cells");
    filt->callback([&] {
        action = [&] {
            criteria.qualities.clear();
            for (const auto& q : split_list(qualities, ',')) {
                const auto parsed = parse_quality(q);
                if (!parsed) throw InvalidInput("--qualities: unknown rating '" + q + "'");
                criteria.qualities.push_back(*parsed);
            }
            criteria.dev_types = split_list(dev_types, ';');
            criteria.require_complete = !allow_incomplete;
            const auto kept = filter_isbsg(load_projects(common.input), criteria);
            emit(common.output, write_projects(kept), out);
        };
    });

    // split
    SplitSpec split_spec;
    std::string train_path, test_path;
    auto* spl = app.add_subcommand("split", "Random train/test partition");
    add_common(spl, common, true, true);
    spl->add_option("--train-count", split_spec.train_count, "Training-set size")->capture_default_str();
    spl->add_option("--train", train_path, "Training CSV output");
    spl->add_option("--test", test_path, "Test CSV output");
    spl->callback([&] {
        action = [&] {
            if (train_path.empty()) train_path = common.output.empty() ? "" : common.output + ".train.csv";
            if (test_path.empty()) test_path = common.output.empty() ? "" : common.output + ".test.csv";
            if (train_path.empty() || test_path.empty()) throw CLI::RequiredError("--train/--test or --output");
            split_spec.seed = common.seed;
            const auto parts = split(load_projects(common.input), split_spec);
            write_file(train_path, write_projects(parts.train));
            write_file(test_path, write_projects(parts.test));
        };
    });

    // fit
    std::optional<double> fit_outlier_k;
    std::string cleaned_path;
    auto* fit = app.add_subcommand("fit", "Fit Effort = A * UFP^B on a project CSV");
    add_common(fit, common, true, false);
    fit->add_option("--outlier-k", fit_outlier_k, "Drop log-residual outliers beyond k sigma and refit");
    fit->add_option("--cleaned", cleaned_path, "Write the rows kept after outlier removal");
    fit->callback([&] {
        action = [&] {
            const ToolConfig cfg = load_config(common.config);
            const auto records = load_projects(common.input);
            RegressionModel model;
            std::vector<ProjectRecord> kept;
            if (fit_outlier_k) {
                CleanedFit cf = fit_without_outliers(records, cfg.weights, *fit_outlier_k);
                model = cf.model;
                kept = std::move(cf.kept);
            } else {
                model = fit_power_law(size_effort_points(records, cfg.weights));
                kept = records;
            }
            if (!cleaned_path.empty()) write_file(cleaned_path, write_projects(kept));
            emit(common.output, dump(to_json(model)), out);
        };
    });

    // calibrate
    std::string model_path, loss_csv, initial_path;
    auto* cal = app.add_subcommand("calibrate", "Train the 15 UFP weights against a fixed effort model");
    add_common(cal, common, true, false);
    cal->add_option("--model", model_path, "Model JSON from 'fit'")->required()->check(CLI::ExistingFile);
    cal->add_option("--initial-weights", initial_path, "Starting weight table (default: config weights)")
        ->check(CLI::ExistingFile);
    cal->add_option("--loss-csv", loss_csv, "Write the loss history as epoch,loss CSV");
    cal->callback([&] {
        action = [&] {
            const ToolConfig cfg = load_config(common.config);
            const WeightTable initial = initial_path.empty() ? cfg.weights
                                                             : weights_from_json(read_json_file(initial_path));
            const RegressionModel model = model_from_json(read_json_file(model_path));
            const auto projects = training_projects(load_projects(common.input));
            const CalibrationResult result = train(initial, projects, model, cfg.calibration);
            if (!loss_csv.empty()) write_file(loss_csv, loss_history_csv(result));
            emit(common.output, dump(to_json(result)), out);
        };
    });

    // evaluate
    std::string eval_model, eval_weights, eval_csv;
    auto* ev = app.add_subcommand("evaluate", "MMRE/PRED of original vs calibrated weights on a test CSV");
    add_common(ev, common, true, false);
    ev->add_option("--model", eval_model, "Model JSON")->required()->check(CLI::ExistingFile);
    ev->add_option("--weights", eval_weights, "Calibrated weight table JSON")->required()->check(CLI::ExistingFile);
    ev->add_option("--csv", eval_csv, "Also write the two-row CSV report");
    ev->callback([&] {
        action = [&] {
            const ToolConfig cfg = load_config(common.config);
            const RegressionModel model = model_from_json(read_json_file(eval_model));
            const WeightTable calibrated = weights_from_json(read_json_file(eval_weights), OrderCheck::Skip);
            const EvaluationReport rep = evaluate(load_projects(common.input), cfg.weights, calibrated, model);
            if (!eval_csv.empty()) write_file(eval_csv, evaluation_csv(rep));
            emit(common.output, dump(to_json(rep)), out);
        };
    });

    // estimate
    std::string est_model, est_weights, est_breakdown, est_components;
    auto* est = app.add_subcommand("estimate", "Size and effort for one project");
    add_common(est, common, false, false);
    est->add_option("--model", est_model, "Model JSON")->required()->check(CLI::ExistingFile);
    est->add_option("--weights", est_weights, "Weight table JSON (default: config weights)")
        ->check(CLI::ExistingFile);
    auto* bd_opt = est->add_option("--breakdown", est_breakdown, "15 comma-separated counts in canonical order");
    auto* comp_opt = est->add_option("--components", est_components, "CSV with header kind,det,secondary")
                         ->check(CLI::ExistingFile);
    bd_opt->excludes(comp_opt);
    est->callback([&] {
        action = [&] {
            if (est_breakdown.empty() && est_components.empty()) {
                throw CLI::RequiredError("--breakdown or --components");
            }
            const ToolConfig cfg = load_config(common.config);
            const WeightTable table = est_weights.empty() ? cfg.weights
                                                          : weights_from_json(read_json_file(est_weights));
            const RegressionModel model = model_from_json(read_json_file(est_model));

            Json j = Json::object();
            UfpBreakdown breakdown;
            std::optional<double> fuzzy;
            std::string fuzzy_error;
            if (!est_breakdown.empty()) {
                breakdown = parse_breakdown_flag(est_breakdown);
            } else {
                const auto components = parse_components(read_file(est_components));
                breakdown = breakdown_from_components(components, cfg.matrix);
                j["components"] = components.size();
                // Calibrated tables may tie adjacent weights, which leaves no fuzzy output sets.
                std::optional<FuzzySystem> system;
                try {
                    system.emplace(cfg.matrix, table, cfg.fuzzy);
                } catch (const InvalidInput& e) {
                    fuzzy_error = e.what();
                    err << "warning: fuzzy size unavailable: " << fuzzy_error << "\n";
                }
                if (system) fuzzy = system->ufp(components);
            }
            const double crisp = compute_ufp(breakdown, table);
            if (!(crisp > 0.0)) throw InvalidInput("estimate needs at least one counted component");
            j["breakdown"] = breakdown_json(breakdown);
            j["crisp"] = Json{{"ufp", crisp}, {"effort_hours", predict_effort(model, crisp)}};
            if (fuzzy) j["fuzzy"] = Json{{"ufp", *fuzzy}, {"effort_hours", predict_effort(model, *fuzzy)}};
            if (!fuzzy_error.empty()) j["fuzzy"] = Json{{"error", fuzzy_error}};
            j["model"] = to_json(model);
            emit(common.output, dump(j), out);
        };
    });

    // experiment
    ExperimentConfig exp;
    std::string exp_csv;
    auto* ex = app.add_subcommand("experiment", "Repeated split/fit/calibrate/evaluate runs");
    add_common(ex, common, true, true);
    ex->add_option("--reps", exp.repetitions, "Number of repetitions")->capture_default_str();
    ex->add_option("--train-count", exp.train_count, "Training-set size per repetition")->capture_default_str();
    ex->add_option("--outlier-k", exp.outlier_k, "Outlier threshold in log-residual sigmas")->capture_default_str();
    ex->add_option("--csv", exp_csv, "Also write one CSV row per repetition");
    ex->callback([&] {
        action = [&] {
            const ToolConfig cfg = load_config(common.config);
            exp.seed_base = common.seed;
            exp.original = cfg.weights;
            exp.calibration = cfg.calibration;
            const ExperimentReport rep = run_experiment(load_projects(common.input), exp);
            if (!exp_csv.empty()) write_file(exp_csv, experiment_csv(rep));
            emit(common.output, dump(to_json(rep)), out);
        };
    });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kSuccess;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsage;
    }

    try {
        if (action) action();
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: missing required option " << e.what() << "\n";
        return kUsage;
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << "\n";
        return kDataError;
    } catch (const NumericError& e) {
        err << "numeric failure: " << e.what() << "\n";
        return kNumericError;
    } catch (const std::exception& e) {
        err << "numeric failure: " << e.what() << "\n";
        return kNumericError;
    }
}

} // namespace fpcal::cli
