#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include <oksvm/error.hpp>
#include <oksvm/optimizer.hpp>

#include "oracles.hpp"
#include "trace_check.hpp"

using namespace oksvm;

namespace {

struct Problem {
    std::shared_ptr<const DistanceMatrix> d2;
    oracle::Instance inst;
};

Problem problem(const oracle::Instance& inst) {
    return {std::make_shared<const DistanceMatrix>(squared_distance_matrix(oracle::to_matrix(inst.x))), inst};
}

Dataset as_dataset(const oracle::Instance& inst) { return Dataset(oracle::to_matrix(inst.x), inst.y); }

}  // namespace

TEST_CASE("gradient closed forms") {
    const oracle::Instance pair{{{0.0, 0.0}, {1.0, 2.0}}, {1, -1}};
    const auto p = problem(pair);
    const auto k = rbf_kernel_matrix(p.d2, 0.3);
    CHECK(dual_gamma_gradient(std::vector<double>{0.0, 0.0}, pair.y, *p.d2, k) == 0.0);
    for (double a : {0.1, 0.9, 3.0}) {
        const double expected = -a * a * 5.0 * std::exp(-0.3 * 5.0);
        const double got = dual_gamma_gradient(std::vector<double>{a, a}, pair.y, *p.d2, k);
        CHECK(std::abs(got - expected) <= 1e-15 * std::abs(expected));
        CHECK(got <= 0.0);
    }
}

TEST_CASE("gradient matches central finite differences") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> gamma_dist(0.05, 5.0);
    for (int trial = 0; trial < 100; ++trial) {
        const auto inst = oracle::random_instance(rng, 6, 3, 0.7);
        const auto a = oracle::random_feasible_alphas(rng, inst.y, 2.0);
        const double gamma = gamma_dist(rng);
        const auto p = problem(inst);
        const double got = dual_gamma_gradient(a, inst.y, *p.d2, rbf_kernel_matrix(p.d2, gamma));
        const double fd = oracle::dual_gamma_fd(a, inst.y, inst.x, gamma, 1e-6);
        CHECK(std::abs(got - fd) <= 1e-5 * std::abs(fd) + 1e-8);
    }
}

TEST_CASE("gamma_step arithmetic") {
    CHECK(gamma_step(1.3, 0.01, 0.0) == 1.3);
    CHECK(std::abs(gamma_step(1.0, 0.01, 10.0) - 0.9) < 1e-15);
    CHECK(std::abs(gamma_step(0.05, 0.01, 10.0) - -0.05) < 1e-15);
}

TEST_CASE("config validation") {
    OksvmConfig config;
    CHECK_NOTHROW(config.validate());
    auto bad = config;
    bad.zeta_plus = 1.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = config;
    bad.zeta_minus = 1.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = config;
    bad.gamma0 = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = config;
    bad.gamma0 = 2000.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("trace bookkeeping holds on random runs") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> gamma0(0.05, 3.0);
    std::uniform_real_distribution<double> log_eta(-3.0, 1.0);
    int runs_with_rejection = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const auto data = generate_synthetic({40, 1 + static_cast<std::size_t>(trial % 5), 0.8,
                                              static_cast<std::uint64_t>(trial)});
        OksvmConfig config;
        config.gamma0 = gamma0(rng);
        config.eta0 = std::pow(10.0, log_eta(rng));
        const auto result = train_oksvm(data, 1.0, config, SolverConfig{});
        const auto violations = oracle::trace_violations(result.state, config);
        for (const auto& v : violations) FAIL_CHECK(v);
        CHECK(result.model.gamma == result.state.gamma_t);
        for (const auto& r : result.state.trace)
            if (r.event == StepEvent::overshoot || r.event == StepEvent::nonpositive) {
                ++runs_with_rejection;
                break;
            }
    }
    CHECK(runs_with_rejection > 0);
}

TEST_CASE("returned model is the solve at the retained gamma") {
    const auto data = generate_synthetic({60, 2, 1.0, 3});
    OksvmConfig config;
    config.gamma0 = 2.1;
    const auto result = train_oksvm(data, 1.0, config, SolverConfig{});
    CHECK(result.state.trace.back().dual_value == result.model.dual_value);
    const auto d2 = std::make_shared<const DistanceMatrix>(squared_distance_matrix(data.features()));
    const auto k = rbf_kernel_matrix(d2, result.model.gamma);
    CHECK(std::abs(dual_objective(result.model.alphas, data.labels(), k) - result.model.dual_value) < 1e-12);
}

TEST_CASE("gamma above gamma_max stops before solving and keeps the last model") {
    // Two opposite points: the gradient is negative, so gamma always grows.
    const oracle::Instance pair{{{0.0}, {1.0}}, {1, -1}};
    const auto data = as_dataset(pair);
    OksvmConfig config;
    config.gamma0 = 1.0;
    config.gamma_max = 1.0 + 1e-9;
    const auto result = train_oksvm(data, 10.0, config, SolverConfig{});
    REQUIRE(result.state.terminated_by);
    CHECK(*result.state.terminated_by == Termination::gamma_exceeded);
    CHECK(result.model.gamma == 1.0);
    CHECK(result.state.trace.back().event == StepEvent::gamma_exceeded);
    CHECK(result.state.trace.back().proposed_gamma > config.gamma_max);
    CHECK(result.state.trace.size() == 2);
}

TEST_CASE("two-point problem drifts up to gamma_max") {
    // The gradient -a^2 d^2 exp(-gamma d^2) is always negative, so every step
    // is accepted and gamma grows until the cap.
    const oracle::Instance pair{{{0.0}, {1.0}}, {1, -1}};
    OksvmConfig config;
    config.eta0 = 1.0;
    config.gamma_max = 5.0;
    const auto result = train_oksvm(as_dataset(pair), 10.0, config, SolverConfig{});
    REQUIRE(result.state.terminated_by);
    CHECK(*result.state.terminated_by == Termination::gamma_exceeded);
    CHECK(result.model.gamma <= 5.0);
    CHECK(result.model.gamma > 4.0);
    CHECK(oracle::trace_violations(result.state, config).empty());
}

TEST_CASE("zero outer steps equals the baseline solve") {
    const auto data = generate_synthetic({50, 3, 1.0, 4});
    OksvmConfig config;
    config.gamma0 = 0.9;
    config.max_outer_steps = 0;
    const auto result = train_oksvm(data, 1.5, config, SolverConfig{});
    const auto baseline = train_svm_baseline(data, 1.5, 0.9, SolverConfig{});
    CHECK(*result.state.terminated_by == Termination::step_cap);
    CHECK(result.model.alphas == baseline.alphas);
    CHECK(result.model.bias == baseline.bias);
}

TEST_CASE("baseline reproduces the analytic two-point model") {
    const oracle::Instance pair{{{0.0}, {1.0}}, {1, -1}};
    SolverConfig solver;
    solver.kkt_tolerance = 1e-12;
    const auto model = train_svm_baseline(as_dataset(pair), 10.0, 1.0, solver);
    const double expected = 1.0 / (1.0 - std::exp(-1.0));
    CHECK(std::abs(model.alphas[0] - expected) < 1e-6);
    CHECK(std::abs(model.alphas[1] - expected) < 1e-6);
}

TEST_CASE("training is deterministic and cold starts keep the bookkeeping") {
    const auto data = generate_synthetic({80, 4, 0.8, 5});
    OksvmConfig config;
    config.gamma0 = 1.7;
    const auto a = train_oksvm(data, 1.0, config, SolverConfig{});
    const auto b = train_oksvm(data, 1.0, config, SolverConfig{});
    CHECK(a.model.alphas == b.model.alphas);
    CHECK(a.state.trace.size() == b.state.trace.size());

    config.warm_start = false;
    const auto cold = train_oksvm(data, 1.0, config, SolverConfig{});
    CHECK(oracle::trace_violations(cold.state, config).empty());
}

TEST_CASE("single-class training data is rejected") {
    Matrix x(3, 1);
    x << 0, 1, 2;
    const Dataset data(x, {1, 1, 1});
    CHECK_THROWS_AS(train_oksvm(data, 1.0, OksvmConfig{}, SolverConfig{}), DataError);
}

TEST_CASE("trace CSV layout") {
    const auto data = generate_synthetic({30, 2, 1.0, 6});
    const auto result = train_oksvm(data, 1.0, OksvmConfig{}, SolverConfig{});
    std::ostringstream out;
    write_trace_csv(result.state, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,gamma,dual_value,eta,ws,event");
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == result.state.trace.size());
}
