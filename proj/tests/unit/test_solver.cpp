#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include <oksvm/error.hpp>
#include <oksvm/model_io.hpp>
#include <oksvm/solver.hpp>

#include "oracles.hpp"

using namespace oksvm;

namespace {

KernelCache kernel_for(const oracle::Rows& x, double gamma) {
    auto d2 = std::make_shared<const DistanceMatrix>(squared_distance_matrix(oracle::to_matrix(x)));
    return rbf_kernel_matrix(std::move(d2), gamma);
}

// Two points at squared distance d2 with labels (+1, -1).
KernelCache two_points(double d2, double gamma) {
    return kernel_for({{0.0}, {std::sqrt(d2)}}, gamma);
}

double balance(const std::vector<double>& a, const std::vector<int>& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += y[i] * a[i];
    return s;
}

SolverConfig tight(SmoVariant variant = SmoVariant::second_order) {
    SolverConfig config;
    config.kkt_tolerance = 1e-12;
    config.variant = variant;
    return config;
}

const std::vector<int> kPair{1, -1};

}  // namespace

TEST_CASE("dual objective closed forms") {
    const auto k = two_points(1.0, 1.0);
    CHECK(dual_objective(std::vector<double>{0.0, 0.0}, kPair, k) == 0.0);
    for (double a : {0.3, 1.0, 2.5}) {
        const double k12 = k(0, 1);
        CHECK(std::abs(dual_objective(std::vector<double>{a, a}, kPair, k) - (2 * a - a * a * (1 - k12))) < 1e-14);
    }
}

TEST_CASE("dual objective matches the naive double loop") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 50; ++trial) {
        const auto inst = oracle::random_instance(rng, 5, 3);
        const auto a = oracle::random_feasible_alphas(rng, inst.y, 2.0);
        const double gamma = 0.7;
        const double got = dual_objective(a, inst.y, kernel_for(inst.x, gamma));
        CHECK(std::abs(got - oracle::dual(a, inst.y, inst.x, gamma)) <= 1e-10);
    }
}

TEST_CASE("two-point problem has the analytic solution") {
    const double expected = 1.0 / (1.0 - std::exp(-1.0));
    for (auto variant : {SmoVariant::second_order, SmoVariant::simplified}) {
        CAPTURE(static_cast<int>(variant));
        const auto sol = solve_dual(two_points(1.0, 1.0), kPair, 10.0, tight(variant));
        CHECK(std::abs(sol.alphas[0] - expected) < 1e-6);
        CHECK(std::abs(sol.alphas[1] - expected) < 1e-6);
        CHECK(std::abs(sol.dual_value - expected) < 1e-6);
        CHECK(std::abs(sol.bias) < 1e-12);

        const auto boxed = solve_dual(two_points(1.0, 1.0), kPair, 1.0, tight(variant));
        CHECK(boxed.alphas[0] == 1.0);
        CHECK(boxed.alphas[1] == 1.0);
        CHECK(boxed.bias_fallback);
        CHECK(std::abs(boxed.bias) < 1e-12);
    }
    const auto oracle_alphas = solve_dual_bruteforce(two_points(1.0, 1.0), kPair, 10.0, 20000);
    CHECK(std::abs(oracle_alphas[0] - expected) < 1e-6);
    CHECK(std::abs(oracle_alphas[1] - expected) < 1e-6);
    const auto oracle_boxed = solve_dual_bruteforce(two_points(1.0, 1.0), kPair, 1.0, 20000);
    CHECK(std::abs(oracle_boxed[0] - 1.0) < 1e-6);
}

TEST_CASE("single-class input is rejected") {
    const auto k = two_points(1.0, 1.0);
    CHECK_THROWS_WITH_AS(solve_dual(k, std::vector<int>{1, 1}, 1.0, SolverConfig{}),
                         doctest::Contains("single-class input"), DataError);
}

TEST_CASE("invalid solver inputs") {
    const auto k = two_points(1.0, 1.0);
    CHECK_THROWS_AS(solve_dual(k, kPair, 0.0, SolverConfig{}), ConfigError);
    SolverConfig bad;
    bad.kkt_tolerance = 0.0;
    CHECK_THROWS_AS(solve_dual(k, kPair, 1.0, bad), ConfigError);
    const std::vector<double> infeasible{0.5, 0.2};
    CHECK_THROWS_AS(solve_dual(k, kPair, 1.0, SolverConfig{}, std::span<const double>(infeasible)), ConfigError);
}

TEST_CASE("projection lands in the feasible set") {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> normal(0.0, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
        const auto inst = oracle::random_instance(rng, 9, 1);
        std::vector<double> p(9);
        for (auto& v : p) v = normal(rng);
        const auto a = project_feasible(p, inst.y, 1.5);
        for (double v : a) CHECK((v >= 0.0 && v <= 1.5));
        CHECK(std::abs(balance(a, inst.y)) <= 1e-12);
        // Projection of a feasible point is itself.
        const auto again = project_feasible(a, inst.y, 1.5);
        for (std::size_t i = 0; i < 9; ++i) CHECK(std::abs(again[i] - a[i]) < 1e-9);
    }
}

TEST_CASE("SMO agrees with the projected-gradient oracle") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> gamma_dist(0.1, 3.0);
    std::uniform_real_distribution<double> c_dist(0.1, 10.0);
    for (auto variant : {SmoVariant::second_order, SmoVariant::simplified}) {
        for (int trial = 0; trial < 50; ++trial) {
            const auto inst = oracle::random_instance(rng, 8, 3);
            const double gamma = gamma_dist(rng);
            const double c = c_dist(rng);
            const auto k = kernel_for(inst.x, gamma);
            SolverConfig config;
            config.variant = variant;
            if (variant == SmoVariant::simplified) config.kkt_tolerance = 1e-6;
            const auto sol = solve_dual(k, inst.y, c, config);
            const auto reference = solve_dual_bruteforce(k, inst.y, c, 20000);
            CHECK(std::abs(sol.dual_value - oracle::dual(reference, inst.y, inst.x, gamma)) <= 1e-4);
            for (double a : sol.alphas) CHECK((a >= 0.0 && a <= c));
            CHECK(std::abs(balance(sol.alphas, inst.y)) <= 1e-10);
            CHECK(sol.converged);
        }
    }
}

TEST_CASE("second-order SMO stops within the KKT tolerance") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 30; ++trial) {
        const auto inst = oracle::random_instance(rng, 30, 4);
        const auto k = kernel_for(inst.x, 0.5);
        const auto sol = solve_dual(k, inst.y, 2.0, SolverConfig{});
        CHECK(sol.converged);
        CHECK(oracle::kkt_gap(sol.alphas, inst.y, oracle::kernel_matrix(inst.x, 0.5), 2.0) < 1e-3 + 1e-9);
    }
}

TEST_CASE("SMO ascent is monotone and every pair update stays feasible") {
    std::mt19937_64 rng(5);
    for (auto variant : {SmoVariant::second_order, SmoVariant::simplified}) {
        const auto inst = oracle::random_instance(rng, 40, 2);
        const auto k = kernel_for(inst.x, 1.0);
        SolverConfig config;
        config.variant = variant;
        config.record_trace = true;
        const auto sol = solve_dual(k, inst.y, 1.0, config);
        REQUIRE(!sol.trace.empty());
        for (std::size_t t = 1; t < sol.trace.size(); ++t) CHECK(sol.trace[t] >= sol.trace[t - 1] - 1e-12);
        CHECK(std::abs(balance(sol.alphas, inst.y)) <= 1e-12);
    }
}

TEST_CASE("warm start never lowers the dual value") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 30; ++trial) {
        const auto inst = oracle::random_instance(rng, 12, 3);
        const auto k = kernel_for(inst.x, 0.8);
        const auto start = oracle::random_feasible_alphas(rng, inst.y, 1.0);
        const auto sol = solve_dual(k, inst.y, 1.0, SolverConfig{}, std::span<const double>(start));
        CHECK(sol.dual_value >= dual_objective(start, inst.y, k) - 1e-12);
    }
}

TEST_CASE("simplified SMO is deterministic per seed") {
    std::mt19937_64 rng(7);
    const auto inst = oracle::random_instance(rng, 25, 2);
    const auto k = kernel_for(inst.x, 1.0);
    SolverConfig config;
    config.variant = SmoVariant::simplified;
    config.seed = 42;
    const auto a = solve_dual(k, inst.y, 1.0, config);
    const auto b = solve_dual(k, inst.y, 1.0, config);
    CHECK(a.alphas == b.alphas);
    CHECK(a.bias == b.bias);
}

TEST_CASE("iteration cap returns a flagged feasible solution") {
    std::mt19937_64 rng(8);
    const auto inst = oracle::random_instance(rng, 30, 2);
    SolverConfig config;
    config.max_iterations = 2;
    const auto sol = solve_dual(kernel_for(inst.x, 1.0), inst.y, 1.0, config);
    CHECK_FALSE(sol.converged);
    CHECK(sol.iterations == 2);
    CHECK(std::abs(balance(sol.alphas, inst.y)) <= 1e-12);
}

TEST_CASE("bias of a three-point instance matches the KKT oracle") {
    const oracle::Rows x{{0.0}, {1.0}, {3.0}};
    const std::vector<int> y{1, -1, -1};
    const double gamma = 0.5;
    const double c = 10.0;
    const auto k = kernel_for(x, gamma);
    const auto sol = solve_dual(k, y, c, tight());
    const auto reference = solve_dual_bruteforce(k, y, c, 200000);

    // Oracle bias: for each free multiplier y_i f(x_i) = 1 holds exactly.
    const auto km = oracle::kernel_matrix(x, gamma);
    double b = 0.0;
    int free = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        if (reference[i] <= 1e-6 || reference[i] >= c - 1e-6) continue;
        double s = 0.0;
        for (std::size_t j = 0; j < 3; ++j) s += reference[j] * y[j] * km[j][i];
        b += y[i] - s;
        ++free;
    }
    REQUIRE(free > 0);
    CHECK(std::abs(sol.bias - b / free) < 1e-8);
    CHECK_FALSE(sol.bias_fallback);
}

TEST_CASE("bias needs at least one support vector") {
    const auto k = two_points(1.0, 1.0);
    CHECK_THROWS_AS(compute_bias(std::vector<double>{0.0, 0.0}, kPair, k, 1.0, 1e-8), DegenerateModelError);
}

TEST_CASE("decision values and predictions") {
    // Mirrored pair: a point on the perpendicular bisector scores exactly b.
    Matrix xs(2, 2);
    xs << -1, 0, 1, 0;
    const Dataset train(xs, {1, -1});
    auto d2 = std::make_shared<const DistanceMatrix>(squared_distance_matrix(xs));
    const auto model = make_model(train, solve_dual(rbf_kernel_matrix(d2, 0.7), train.labels(), 1.0, tight()), 0.7, 1.0);
    Matrix probe(1, 2);
    probe << 0, 3.7;
    CHECK(std::abs(decision_values(model, probe)[0] - model.bias) < 1e-15);

    CHECK(sign_label(3.2) == 1);
    CHECK(sign_label(-0.1) == -1);
    CHECK(sign_label(0.0) == 1);
    CHECK(sign_label(-0.0) == 1);

    Matrix wrong(1, 3);
    wrong.setZero();
    CHECK_THROWS_AS(decision_values(model, wrong), DataError);
}

namespace {

SvmModel fit(const Dataset& train, double c, double gamma) {
    auto d2 = std::make_shared<const DistanceMatrix>(squared_distance_matrix(train.features()));
    return make_model(train, solve_dual(rbf_kernel_matrix(d2, gamma), train.labels(), c, SolverConfig{}), gamma, c);
}

}  // namespace

TEST_CASE("scores sum over support vectors only") {
    const auto train = generate_synthetic({60, 3, 0.8, 3});
    const auto model = fit(train, 1.0, 0.9);
    const auto test = generate_synthetic({20, 3, 0.8, 4});
    const auto scores = decision_values(model, test.features());

    // Naive sum over every training point, zero multipliers included.
    const auto x = oracle::to_rows(train.features());
    const auto t = oracle::to_rows(test.features());
    for (std::size_t q = 0; q < t.size(); ++q) {
        double s = model.bias;
        for (std::size_t i = 0; i < x.size(); ++i)
            s += train.labels()[i] * model.alphas[i] * std::exp(-model.gamma * oracle::sq_dist(t[q], x[i]));
        CHECK(std::abs(scores[q] - s) < 1e-10);
    }
    const auto labels = predict(model, test.features());
    for (std::size_t q = 0; q < t.size(); ++q) CHECK(labels[q] == sign_label(scores[q]));
    CHECK(model.support_indices.size() < train.size());
}

TEST_CASE("well-separated training data is fitted") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto train = generate_synthetic({200, 2, 1.4, seed});
        const auto model = fit(train, 1000.0, 10.0);
        const auto labels = predict(model, train.features());
        std::size_t correct = 0;
        for (std::size_t i = 0; i < train.size(); ++i) correct += labels[i] == train.labels()[i];
        CHECK(correct >= 198);
    }
}

TEST_CASE("rescaling features and gamma together changes nothing") {
    const auto train = generate_synthetic({40, 2, 1.0, 8});
    const double s = 2.0;
    const Dataset scaled(train.features() * s, train.labels());
    const auto a = fit(train, 1.0, 0.8);
    const auto b = fit(scaled, 1.0, 0.8 / (s * s));
    CHECK(a.alphas == b.alphas);
    const auto probe = generate_synthetic({10, 2, 1.0, 9});
    CHECK(predict(a, probe.features()) == predict(b, Matrix(probe.features() * s)));
}

TEST_CASE("model text format round-trips exactly") {
    const auto train = generate_synthetic({50, 3, 0.9, 10});
    const auto model = fit(train, 1.3, 0.45);
    std::stringstream buffer;
    save_model(model, buffer);
    const auto loaded = load_model(buffer);
    CHECK(loaded.alphas == model.alphas);
    CHECK(loaded.bias == model.bias);
    CHECK(loaded.gamma == model.gamma);
    CHECK(loaded.c == model.c);
    CHECK(loaded.support_indices == model.support_indices);
    CHECK(loaded.support_labels == model.support_labels);
    CHECK(loaded.support_vectors == model.support_vectors);
    CHECK(loaded.dual_value == model.dual_value);
    const auto probe = generate_synthetic({30, 3, 0.9, 11});
    CHECK(decision_values(loaded, probe.features()) == decision_values(model, probe.features()));

    std::istringstream garbage("not a model\n");
    CHECK_THROWS_AS(load_model(garbage), DataError);
    std::string text = buffer.str();
    std::istringstream truncated(text.substr(0, text.size() / 2));
    CHECK_THROWS_AS(load_model(truncated), DataError);
}
