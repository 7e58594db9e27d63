#include "fpcal/calibration.hpp"
#include "fpcal/error.hpp"
#include "oracles/loss_oracle.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>

using namespace fpcal;
using K = ComponentKind;
using L = ComplexityLevel;

namespace {

std::vector<TrainingProject> exact_projects(std::mt19937_64& rng, const WeightTable& w, const RegressionModel& m,
                                            std::size_t n) {
    std::vector<TrainingProject> ps;
    for (std::size_t i = 0; i < n; ++i) {
        const UfpBreakdown b = testing_support::random_breakdown(rng);
        ps.push_back({b, predict_effort(m, compute_ufp(b, w))});
    }
    return ps;
}

std::vector<oracle::Project> to_oracle(const std::vector<TrainingProject>& ps) {
    std::vector<oracle::Project> out;
    for (const auto& p : ps) out.push_back({testing_support::as_doubles(p.breakdown), p.effort});
    return out;
}

} // namespace

TEST_CASE("loss examples") {
    std::mt19937_64 rng(1);
    const RegressionModel m{10, 1, 2, 1};
    const auto exact = exact_projects(rng, WeightTable{}, m, 10);
    CHECK(loss(WeightTable{}, exact, m) == 0.0);

    UfpBreakdown one;
    one.set(K::EI, L::Low, 1); // UFP 3 under defaults
    const RegressionModel m110{110.0 / 3.0, 1, 2, 1};
    const std::vector<TrainingProject> single{{one, 100.0}};
    CHECK(loss(WeightTable{}, single, m110) == doctest::Approx(0.01).epsilon(1e-12));
}

TEST_CASE("loss matches a direct recomputation") {
    std::mt19937_64 rng(20);
    std::uniform_real_distribution<double> eff(50, 5000);
    std::vector<TrainingProject> ps;
    for (int i = 0; i < 20; ++i) ps.push_back({testing_support::random_breakdown(rng), eff(rng)});
    const WeightTable w = testing_support::perturbed_table(rng, WeightTable{}, 0.4);
    const RegressionModel m{7.3, 0.97, 20, 0.5};
    const double expected = static_cast<double>(oracle::loss(w.flat(), to_oracle(ps), m.A, m.B));
    CHECK(std::fabs(loss(w, ps, m) - expected) <= 1e-12 * std::max(1.0, expected));
}

TEST_CASE("loss and gradient errors") {
    const RegressionModel m{10, 1, 2, 1};
    CHECK_THROWS_AS(loss(WeightTable{}, std::vector<TrainingProject>{}, m), InvalidInput);
    UfpBreakdown one;
    one.set(K::EO, L::High, 2);
    CHECK_THROWS_AS(loss(WeightTable{}, std::vector<TrainingProject>{{one, -1.0}}, m), InvalidInput);
    CHECK_THROWS_AS(loss(WeightTable{}, std::vector<TrainingProject>{{UfpBreakdown{}, 10.0}}, m), InvalidInput);
    CHECK_THROWS_AS(gradient(WeightTable{}, std::vector<TrainingProject>{{UfpBreakdown{}, 10.0}}, m), InvalidInput);
}

TEST_CASE("gradient examples") {
    std::mt19937_64 rng(2);
    const RegressionModel m{10, 1, 2, 1};
    const auto exact = exact_projects(rng, WeightTable{}, m, 10);
    for (double g : gradient(WeightTable{}, exact, m)) CHECK(g == 0.0);

    std::vector<TrainingProject> ps;
    for (int i = 0; i < 10; ++i) {
        UfpBreakdown b = testing_support::random_breakdown(rng);
        b.set(K::EQ, L::High, 0);
        ps.push_back({b, 500.0 + 10 * i});
    }
    CHECK(gradient(WeightTable{}, ps, m)[cell_index(K::EQ, L::High)] == 0.0);
}

TEST_CASE("gradient agrees with central finite differences") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> eff(100, 10000), coef(2, 30), expo(0.6, 1.3);
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<TrainingProject> ps;
        for (int i = 0; i < 15; ++i) ps.push_back({testing_support::random_breakdown(rng), eff(rng)});
        const WeightTable w = testing_support::perturbed_table(rng, WeightTable{}, 0.4);
        const RegressionModel m{coef(rng), expo(rng), 15, 0.5};
        const auto g = gradient(w, ps, m);
        const auto fd = oracle::fd_gradient(w.flat(), to_oracle(ps), m.A, m.B);
        for (std::size_t j = 0; j < kCellCount; ++j) {
            const double scale = std::max({std::fabs(g[j]), std::fabs(fd[j]), 1e-300});
            CHECK(std::fabs(g[j] - fd[j]) / scale < 1e-6);
        }
    }
}

TEST_CASE("projection clamps then pools adjacent violators") {
    WeightVector w{};
    for (std::size_t j = 0; j < kCellCount; ++j) w[j] = 1.0 + static_cast<double>(j);
    w[0] = -3; // EI low below the floor
    w[3] = 9;  // EO row 9, 5, 6 pools into one block
    w[4] = 5;
    w[5] = 6;
    w[9] = 4; // ILF row 4, 2, 8: first pair pools to 3
    w[10] = 2;
    w[11] = 8;
    const auto p = project_weights(w, 0.1, true);
    CHECK(p[0] == 0.1);
    CHECK(p[1] == 2.0);
    CHECK(p[3] == doctest::Approx(20.0 / 3.0));
    CHECK(p[4] == doctest::Approx(20.0 / 3.0));
    CHECK(p[5] == doctest::Approx(20.0 / 3.0));
    CHECK(p[9] == doctest::Approx(3.0));
    CHECK(p[10] == doctest::Approx(3.0));
    CHECK(p[11] == 8.0);

    const auto loose = project_weights(w, 0.1, false);
    CHECK(loose[3] == 9.0);
    CHECK(loose[4] == 5.0);
}

TEST_CASE("projection output is always feasible") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-5, 20);
    for (int t = 0; t < 500; ++t) {
        WeightVector w{};
        for (double& v : w) v = u(rng);
        const auto p = project_weights(w, 0.25, true);
        for (std::size_t k = 0; k < kKindCount; ++k) {
            CHECK(p[3 * k] >= 0.25);
            CHECK(p[3 * k] <= p[3 * k + 1]);
            CHECK(p[3 * k + 1] <= p[3 * k + 2]);
        }
        CHECK(project_weights(p, 0.25, true) == p);
    }
}

TEST_CASE("train leaves an exact table unchanged") {
    std::mt19937_64 rng(3);
    const RegressionModel m{12, 0.95, 2, 1};
    const auto ps = exact_projects(rng, WeightTable{}, m, 40);
    const CalibrationResult r = train(WeightTable{}, ps, m);
    CHECK(r.calibrated == WeightTable{});
    CHECK(r.final_loss == 0.0);
    CHECK(r.initial_loss == 0.0);
    CHECK(r.epochs_run == 0);
}

TEST_CASE("train recovers a hidden table from noise-free data") {
    std::mt19937_64 rng(8);
    const WeightTable hidden = testing_support::perturbed_table(rng, WeightTable{}, 0.4);
    const RegressionModel m{15, 0.9, 2, 1};
    const auto ps = exact_projects(rng, hidden, m, 100);
    const CalibrationResult r = train(WeightTable{}, ps, m);
    CHECK(r.final_loss < 1e-6);
    const auto got = r.calibrated.flat(), want = hidden.flat();
    for (std::size_t j = 0; j < kCellCount; ++j) CHECK(std::fabs(got[j] / want[j] - 1.0) < 0.02);
}

TEST_CASE("train invariants on noisy data") {
    std::mt19937_64 rng(12);
    std::normal_distribution<double> noise(0, 0.5);
    const WeightTable hidden = testing_support::perturbed_table(rng, WeightTable{}, 0.4);
    const RegressionModel m{11, 1.02, 2, 1};
    std::vector<TrainingProject> ps;
    for (int i = 0; i < 60; ++i) {
        const UfpBreakdown b = testing_support::random_breakdown(rng);
        ps.push_back({b, predict_effort(m, compute_ufp(b, hidden)) * std::exp(noise(rng))});
    }
    CalibrationConfig cfg;
    cfg.max_epochs = 400;
    cfg.weight_floor = 0.5;
    const CalibrationResult r = train(WeightTable{}, ps, m, cfg);
    CHECK(r.final_loss <= r.initial_loss);
    CHECK(r.loss_history.front().loss == r.initial_loss);
    CHECK(r.loss_history.back().loss == r.final_loss);
    for (std::size_t i = 1; i < r.loss_history.size(); ++i) {
        CHECK(r.loss_history[i].loss <= r.loss_history[i - 1].loss);
        CHECK(r.loss_history[i].epoch > r.loss_history[i - 1].epoch);
    }
    CHECK(r.epochs_run <= cfg.max_epochs);
    CHECK(r.calibrated.is_ordered());
    for (double w : r.calibrated.flat()) CHECK(w >= cfg.weight_floor);

    // determinism
    const CalibrationResult again = train(WeightTable{}, ps, m, cfg);
    const auto a = r.calibrated.flat(), b = again.calibrated.flat();
    CHECK(std::memcmp(a.data(), b.data(), sizeof a) == 0);
    CHECK(again.epochs_run == r.epochs_run);
    CHECK(again.loss_history.size() == r.loss_history.size());
    CHECK(std::memcmp(&again.final_loss, &r.final_loss, sizeof(double)) == 0);
}

TEST_CASE("train hits max_epochs without error") {
    std::mt19937_64 rng(4);
    const WeightTable hidden = testing_support::perturbed_table(rng, WeightTable{}, 0.4);
    const RegressionModel m{9, 1.0, 2, 1};
    const auto ps = exact_projects(rng, hidden, m, 50);
    CalibrationConfig cfg;
    cfg.max_epochs = 3;
    const CalibrationResult r = train(WeightTable{}, ps, m, cfg);
    CHECK(r.epochs_run == 3);
    CHECK(r.final_loss <= r.initial_loss);
}

TEST_CASE("train without ordering may return an unordered table") {
    std::mt19937_64 rng(6);
    // hidden EI row deliberately inverted
    const WeightTable hidden({{{6, 4, 3}, {4, 5, 7}, {3, 4, 6}, {7, 10, 15}, {5, 7, 10}}}, OrderCheck::Skip);
    const RegressionModel m{10, 1.0, 2, 1};
    const auto ps = exact_projects(rng, hidden, m, 80);
    CalibrationConfig cfg;
    cfg.enforce_ordering = false;
    const CalibrationResult r = train(WeightTable{}, ps, m, cfg);
    CHECK(r.final_loss < 1e-6);
    CHECK_FALSE(r.calibrated.is_ordered());

    cfg.enforce_ordering = true;
    const CalibrationResult ordered = train(WeightTable{}, ps, m, cfg);
    CHECK(ordered.calibrated.is_ordered());
    CHECK(ordered.final_loss > r.final_loss);
}

TEST_CASE("config validation") {
    CalibrationConfig cfg;
    cfg.learning_rate = 0;
    CHECK_THROWS_AS(cfg.validate(), InvalidInput);
    cfg = {};
    cfg.weight_floor = -1;
    CHECK_THROWS_AS(cfg.validate(), InvalidInput);
}

TEST_CASE("pairwise_sum is order-fixed and accurate") {
    std::vector<double> v(1001);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 / static_cast<double>(i + 1);
    long double exact = 0;
    for (double x : v) exact += x;
    CHECK(detail::pairwise_sum(v) == doctest::Approx(static_cast<double>(exact)).epsilon(1e-15));
    CHECK(detail::pairwise_sum(std::vector<double>{}) == 0.0);
}
