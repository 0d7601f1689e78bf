#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "oksvm/dataset.hpp"
#include "oksvm/kernel.hpp"

namespace oksvm {

enum class SmoVariant {
    /// Maximal-violating pair with second-order choice of the partner index
    /// (Fan, Chen & Lin 2005). Deterministic, stops on the KKT gap.
    second_order,
    /// Textbook simplified SMO: sweep for KKT violators, random partner drawn
    /// from a seeded engine, stop after max_passes sweeps without change.
    simplified,
};

struct SolverConfig {
    double kkt_tolerance = 1e-3;
    std::size_t max_passes = 5;
    /// 0 selects 10 * N^2.
    std::size_t max_iterations = 0;
    double support_threshold = 1e-8;
    double equality_tolerance = 1e-10;
    SmoVariant variant = SmoVariant::second_order;
    std::uint64_t seed = 0;
    /// Keep the dual value after every pair update in DualSolution::trace.
    bool record_trace = false;

    void validate() const;
};

/// Result of one dual solve at a fixed kernel.
struct DualSolution {
    std::vector<double> alphas;
    double bias = 0.0;
    /// True when no margin support vector existed and the bias was averaged
    /// over all support vectors instead.
    bool bias_fallback = false;
    std::vector<std::size_t> support_indices;
    double dual_value = 0.0;
    bool converged = false;
    std::size_t iterations = 0;
    std::vector<double> trace;
};

/// A trained classifier: the dual solution plus the support-vector rows
/// needed to evaluate sum_{i in S} y_i alpha_i k(x, x_i) + b.
struct SvmModel {
    std::vector<double> alphas;  // one per training sample
    double bias = 0.0;
    bool bias_fallback = false;
    std::vector<std::size_t> support_indices;
    double gamma = 0.0;
    double c = 0.0;
    bool converged = false;
    std::size_t iterations = 0;
    double dual_value = 0.0;

    Matrix support_vectors;           // rows of the training set at support_indices
    std::vector<int> support_labels;  // matching labels

    std::size_t dim() const noexcept { return static_cast<std::size_t>(support_vectors.cols()); }
};

/// sum_i a_i - 1/2 sum_ij a_i a_j y_i y_j K_ij
double dual_objective(std::span<const double> alphas, std::span<const int> labels, const KernelCache& kernel);

/// Maximises the soft-margin dual at the kernel's gamma. A warm start must be
/// feasible (0 <= a_i <= c, sum y_i a_i = 0). Throws DataError when only one
/// class is present. An unconverged solve is returned with converged = false.
DualSolution solve_dual(const KernelCache& kernel, std::span<const int> labels, double c,
                        const SolverConfig& config,
                        std::optional<std::span<const double>> warm_start = std::nullopt);

/// Projected-gradient ascent on the dual with an exact Euclidean projection
/// onto {0 <= a <= c, y.a = 0}. Slow and only meant as a test oracle.
std::vector<double> solve_dual_bruteforce(const KernelCache& kernel, std::span<const int> labels, double c,
                                          std::size_t steps);

/// Euclidean projection onto {0 <= a <= c, y.a = 0} by bisection on the
/// multiplier of the equality constraint.
std::vector<double> project_feasible(std::span<const double> point, std::span<const int> labels, double c);

struct BiasEstimate {
    double value = 0.0;
    bool fallback = false;
};

/// b = mean over margin support vectors (threshold < a_i < c - threshold) of
/// y_i - sum_j a_j y_j K_ji; falls back to all support vectors when no margin
/// vector exists. Throws DegenerateModelError when there is no support vector.
BiasEstimate compute_bias(std::span<const double> alphas, std::span<const int> labels, const KernelCache& kernel,
                          double c, double support_threshold);

/// Packages a solution with the support-vector rows of `train`.
SvmModel make_model(const Dataset& train, const DualSolution& solution, double gamma, double c);

/// Scores sum_{i in S} y_i a_i exp(-gamma ||x - x_i||^2) + b for each row.
std::vector<double> decision_values(const SvmModel& model, const Matrix& features);

/// Sign of the decision value, with a score of exactly 0 mapped to +1.
std::vector<int> predict(const SvmModel& model, const Matrix& features);
int sign_label(double score) noexcept;

}  // namespace oksvm
