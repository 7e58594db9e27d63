#include "cli.hpp"

#include "fpcal/dataset.hpp"
#include "fpcal/experiment.hpp"
#include "fpcal/io.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include <unistd.h>

namespace fs = std::filesystem;
using namespace fpcal;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = fs::temp_directory_path() /
                ("fpcal_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string operator/(const std::string& name) const { return (path_ / name).string(); }

private:
    fs::path path_;
};

std::string write_model(const TempDir& dir, double A, double B) {
    const std::string path = dir / "model.json";
    write_file(path, dump(to_json(RegressionModel{A, B, 0, 0.0})));
    return path;
}

} // namespace

TEST_CASE("gen is deterministic for a fixed seed") {
    TempDir dir;
    REQUIRE(run({"gen", "--output", dir / "a.csv", "--seed", "7", "--sigma", "0.2"}).code == 0);
    REQUIRE(run({"gen", "--output", dir / "b.csv", "--seed", "7", "--sigma", "0.2"}).code == 0);
    REQUIRE(run({"gen", "--output", dir / "c.csv", "--seed", "8", "--sigma", "0.2"}).code == 0);
    CHECK(read_file(dir / "a.csv") == read_file(dir / "b.csv"));
    CHECK(read_file(dir / "a.csv") != read_file(dir / "c.csv"));

    const auto rows = parse_projects(read_file(dir / "a.csv"));
    CHECK(rows.size() == 200);
    CHECK(write_projects(rows) == read_file(dir / "a.csv"));
}

TEST_CASE("noise-free gen follows the effort law exactly") {
    TempDir dir;
    REQUIRE(run({"gen", "--output", dir / "p.csv", "--count", "50", "-A", "3", "-B", "1.1"}).code == 0);
    for (const ProjectRecord& r : parse_projects(read_file(dir / "p.csv"))) {
        const double ufp = compute_ufp(*r.breakdown, WeightTable{});
        CHECK(r.effort == doctest::Approx(3.0 * std::pow(ufp, 1.1)).epsilon(1e-12));
    }
}

TEST_CASE("estimate from a breakdown") {
    TempDir dir;
    const std::string model = write_model(dir, 10.0, 1.0);
    const Result r = run({"estimate", "--model", model, "--breakdown", "0,0,0,0,0,0,0,0,0,0,1,0,0,0,0"});
    REQUIRE(r.code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j["crisp"]["ufp"] == 10.0);
    CHECK(j["crisp"]["effort_hours"] == 100.0);
    CHECK(j["breakdown"]["ILF"]["average"] == 1);
    CHECK_FALSE(j.contains("fuzzy"));
}

TEST_CASE("estimate from components adds the fuzzy size") {
    TempDir dir;
    const std::string model = write_model(dir, 10.0, 1.0);

    write_file(dir / "one.csv", "kind,det,secondary\nILF,35,3\n");
    Result r = run({"estimate", "--model", model, "--components", dir / "one.csv"});
    REQUIRE(r.code == 0);
    Json j = Json::parse(r.out);
    CHECK(j["crisp"]["ufp"] == 10.0);
    CHECK(std::fabs(j["fuzzy"]["ufp"].get<double>() - 10.0) < 1e-6);

    write_file(dir / "trio.csv", "kind,det,secondary\nILF,50,3\nILF,20,3\nILF,19,3\n");
    r = run({"estimate", "--model", model, "--components", dir / "trio.csv"});
    REQUIRE(r.code == 0);
    j = Json::parse(r.out);
    CHECK(j["components"] == 3);
    CHECK(j["crisp"]["ufp"] == 27.0);
    CHECK(j["fuzzy"]["ufp"].get<double>() != 27.0);
    CHECK(j["fuzzy"]["effort_hours"].get<double>() ==
          doctest::Approx(10.0 * j["fuzzy"]["ufp"].get<double>()).epsilon(1e-12));
}

TEST_CASE("estimate keeps the crisp size when tied weights rule out fuzzy sets") {
    TempDir dir;
    const std::string model = write_model(dir, 10.0, 1.0);
    write_file(dir / "tied.json", dump(to_json(WeightTable({{{3, 4, 6}, {5, 5, 7}, {3, 4, 6}, {7, 10, 15}, {5, 7, 10}}}))));
    write_file(dir / "parts.csv", "kind,det,secondary\nILF,35,3\nEO,3,0\n");
    const Result r = run({"estimate", "--model", model, "--weights", dir / "tied.json", "--components",
                          dir / "parts.csv"});
    REQUIRE(r.code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j["crisp"]["ufp"] == 15.0);
    CHECK(j["fuzzy"].contains("error"));
    CHECK(r.err.find("warning") != std::string::npos);
}

TEST_CASE("filter keeps only qualifying rows") {
    TempDir dir;
    REQUIRE(run({"gen", "--output", dir / "p.csv", "--count", "20", "--seed", "3"}).code == 0);
    auto rows = parse_projects(read_file(dir / "p.csv"));
    rows[0].quality = Quality::C;
    rows[1].count_method = "COSMIC";
    rows[2].breakdown.reset();
    write_file(dir / "p.csv", write_projects(rows));

    Result r = run({"filter", "--input", dir / "p.csv"});
    REQUIRE(r.code == 0);
    CHECK(parse_projects(r.out).size() == 17);

    r = run({"filter", "--input", dir / "p.csv", "--allow-incomplete", "--qualities", "A,B,C"});
    REQUIRE(r.code == 0);
    CHECK(parse_projects(r.out).size() == 19);
}

TEST_CASE("split writes complementary files") {
    TempDir dir;
    REQUIRE(run({"gen", "--output", dir / "p.csv", "--count", "30", "--seed", "4"}).code == 0);
    REQUIRE(run({"split", "--input", dir / "p.csv", "--seed", "1", "--train-count", "20", "--output",
                 dir / "s"}).code == 0);
    const auto train = parse_projects(read_file(dir / "s.train.csv"));
    const auto test = parse_projects(read_file(dir / "s.test.csv"));
    CHECK(train.size() == 20);
    CHECK(test.size() == 10);
    CHECK(run({"split", "--input", dir / "p.csv"}).code == cli::kUsage);
}

TEST_CASE("stepwise commands reproduce an experiment repetition") {
    TempDir dir;
    REQUIRE(run({"gen", "--output", dir / "p.csv", "--count", "150", "--seed", "11", "--sigma", "0.3"}).code == 0);
    REQUIRE(run({"filter", "--input", dir / "p.csv", "--output", dir / "f.csv"}).code == 0);

    const Result exp = run({"experiment", "--input", dir / "f.csv", "--seed", "40", "--reps", "3"});
    REQUIRE(exp.code == 0);
    const Json report = Json::parse(exp.out);
    REQUIRE(report["repetitions"].size() == 3);
    const Json& row = report["repetitions"][2];
    CHECK(row["seed"] == 42);

    REQUIRE(run({"split", "--input", dir / "f.csv", "--seed", "42", "--train", dir / "tr.csv", "--test",
                 dir / "te.csv"}).code == 0);
    REQUIRE(run({"fit", "--input", dir / "tr.csv", "--outlier-k", "2.5", "--cleaned", dir / "clean.csv",
                 "--output", dir / "m.json"}).code == 0);
    REQUIRE(run({"calibrate", "--input", dir / "clean.csv", "--model", dir / "m.json", "--loss-csv",
                 dir / "loss.csv", "--output", dir / "w.json"}).code == 0);
    const Result ev = run({"evaluate", "--input", dir / "te.csv", "--model", dir / "m.json", "--weights",
                           dir / "w.json", "--csv", dir / "eval.csv"});
    REQUIRE(ev.code == 0);

    CHECK(read_json_file(dir / "m.json") == row["model"]);
    CHECK(read_json_file(dir / "w.json") == row["calibration"]);
    CHECK(Json::parse(ev.out) == row["evaluation"]);
    CHECK(read_file(dir / "loss.csv").rfind("epoch,loss\n0,", 0) == 0);
    CHECK(read_file(dir / "eval.csv").rfind("variant,n_test,mmre,pred_25,pred_50,pred_75,pred_100\n", 0) == 0);
}

TEST_CASE("experiment output is reproducible") {
    TempDir dir;
    REQUIRE(run({"gen", "--output", dir / "p.csv", "--count", "130", "--seed", "5", "--sigma", "0.2"}).code == 0);
    const Result a = run({"experiment", "--input", dir / "p.csv", "--csv", dir / "a.csv"});
    const Result b = run({"experiment", "--input", dir / "p.csv", "--csv", dir / "b.csv"});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(read_file(dir / "a.csv") == read_file(dir / "b.csv"));
    CHECK(Json::parse(a.out)["repetitions"].size() == 5);
}

TEST_CASE("config file overrides the weight table") {
    TempDir dir;
    WeightTable doubled;
    {
        auto flat = doubled.flat();
        for (double& v : flat) v *= 2.0;
        doubled = WeightTable::from_flat(flat);
    }
    write_file(dir / "cfg.json", dump(Json{{"weights", to_json(doubled)}}));
    const std::string model = write_model(dir, 1.0, 1.0);
    const Result r = run({"estimate", "--model", model, "--config", dir / "cfg.json", "--breakdown",
                          "1,0,0,0,0,0,0,0,0,0,0,0,0,0,0"});
    REQUIRE(r.code == 0);
    CHECK(Json::parse(r.out)["crisp"]["ufp"] == 6.0);
}

TEST_CASE("exit codes") {
    TempDir dir;
    CHECK(run({}).code == cli::kUsage);
    CHECK(run({"nonsense"}).code == cli::kUsage);
    CHECK(run({"fit"}).code == cli::kUsage);
    CHECK(run({"fit", "--input", dir / "missing.csv"}).code == cli::kUsage);
    CHECK(run({"gen"}).code == cli::kUsage);
    CHECK(run({"--help"}).code == cli::kSuccess);

    write_file(dir / "bad.csv", "id,quality\nx,A\n");
    Result r = run({"fit", "--input", dir / "bad.csv"});
    CHECK(r.code == cli::kDataError);
    CHECK(r.err.find("error:") != std::string::npos);

    const std::string model = write_model(dir, 10.0, 1.0);
    CHECK(run({"estimate", "--model", model, "--breakdown", "1,2,3"}).code == cli::kDataError);
    CHECK(run({"estimate", "--model", model, "--breakdown", "0,0,0,0,0,0,0,0,0,0,0,0,0,0,0"}).code ==
          cli::kDataError);
    write_file(dir / "comp.csv", "kind,det,secondary\nILF,0,3\n");
    r = run({"estimate", "--model", model, "--components", dir / "comp.csv"});
    CHECK(r.code == cli::kDataError);
    CHECK(r.err.find("line 2") != std::string::npos);

    REQUIRE(run({"gen", "--output", dir / "p.csv", "--count", "5"}).code == 0);
    auto rows = parse_projects(read_file(dir / "p.csv"));
    for (auto& row : rows) row.breakdown = rows[0].breakdown;
    write_file(dir / "same.csv", write_projects(rows));
    CHECK(run({"fit", "--input", dir / "same.csv"}).code == cli::kDataError);

    // A perfect original model leaves the relative improvement undefined.
    write_file(dir / "w.json", dump(to_json(WeightTable{})));
    r = run({"evaluate", "--input", dir / "p.csv", "--model", model, "--weights", dir / "w.json"});
    CHECK(r.code == cli::kNumericError);
}
