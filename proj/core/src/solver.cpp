#include "oksvm/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/random/uniform_int_distribution.hpp>

#include "oksvm/error.hpp"
#include "oksvm/rng.hpp"

namespace oksvm {

namespace {

constexpr double kTau = 1e-12;  // curvature floor for non-PSD round-off

void check_problem(const KernelCache& kernel, std::span<const int> labels, double c) {
    if (kernel.size() != labels.size()) throw ConfigError("kernel size does not match label count");
    if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("C must be positive and finite");
    bool pos = false;
    bool neg = false;
    for (int y : labels) {
        if (y == 1) pos = true;
        else if (y == -1) neg = true;
        else throw DataError("labels must be -1 or +1");
    }
    if (!pos || !neg) throw DataError("single-class input: the equality constraint forces alpha = 0");
}

void check_feasible(std::span<const double> alphas, std::span<const int> labels, double c, double tolerance) {
    if (alphas.size() != labels.size()) throw ConfigError("warm start has the wrong length");
    double balance = 0.0;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        if (!(alphas[i] >= 0.0 && alphas[i] <= c)) throw ConfigError("warm start violates 0 <= alpha <= C");
        balance += labels[i] * alphas[i];
    }
    if (std::abs(balance) > tolerance) throw ConfigError("warm start violates sum y_i alpha_i = 0");
}

// Dual value from the maintained gradient G = Q a - 1: D = (sum a - sum a G) / 2.
double dual_from_gradient(const std::vector<double>& alpha, const std::vector<double>& grad) {
    double s = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) s += alpha[i] * (1.0 - grad[i]);
    return 0.5 * s;
}

struct SmoOutcome {
    bool converged = false;
    std::size_t iterations = 0;
};

SmoOutcome smo_second_order(const Matrix& k, std::span<const int> y, double c, const SolverConfig& config,
                            std::size_t max_iterations, std::vector<double>& alpha, std::vector<double>& trace) {
    const std::size_t n = alpha.size();
    auto kij = [&](std::size_t i, std::size_t j) {
        return k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    };

    std::vector<double> grad(n, -1.0);
    for (std::size_t j = 0; j < n; ++j) {
        if (alpha[j] == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i) grad[i] += y[i] * y[j] * kij(i, j) * alpha[j];
    }

    auto in_up = [&](std::size_t t) { return y[t] == 1 ? alpha[t] < c : alpha[t] > 0.0; };
    auto in_low = [&](std::size_t t) { return y[t] == 1 ? alpha[t] > 0.0 : alpha[t] < c; };

    SmoOutcome out;
    while (true) {
        // i: maximal violator in I_up by -y_t G_t
        double gmax = -std::numeric_limits<double>::infinity();
        std::size_t i = n;
        for (std::size_t t = 0; t < n; ++t) {
            if (!in_up(t)) continue;
            const double v = -y[t] * grad[t];
            if (v > gmax) {
                gmax = v;
                i = t;
            }
        }
        // j: second-order choice over I_low; gmax2 tracks max of y_t G_t
        double gmax2 = -std::numeric_limits<double>::infinity();
        double best_gain = std::numeric_limits<double>::infinity();
        std::size_t j = n;
        for (std::size_t t = 0; t < n && i < n; ++t) {
            if (!in_low(t)) continue;
            const double v = y[t] * grad[t];
            gmax2 = std::max(gmax2, v);
            const double grad_diff = gmax + v;
            if (grad_diff <= 0.0) continue;
            double quad = kij(i, i) + kij(t, t) - 2.0 * kij(i, t);
            if (quad <= 0.0) quad = kTau;
            const double gain = -(grad_diff * grad_diff) / quad;
            if (gain < best_gain) {
                best_gain = gain;
                j = t;
            }
        }
        if (i == n || j == n || gmax + gmax2 < config.kkt_tolerance) {
            out.converged = true;
            break;
        }
        if (out.iterations >= max_iterations) break;
        ++out.iterations;

        const double old_i = alpha[i];
        const double old_j = alpha[j];
        double quad = kij(i, i) + kij(j, j) - 2.0 * kij(i, j);
        if (quad <= 0.0) quad = kTau;

        if (y[i] != y[j]) {
            const double delta = (-grad[i] - grad[j]) / quad;
            const double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0.0) {
                if (alpha[j] < 0.0) {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if (alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if (diff > 0.0) {
                if (alpha[i] > c) {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if (alpha[j] > c) {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            const double delta = (grad[i] - grad[j]) / quad;
            const double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > c) {
                if (alpha[i] > c) {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if (alpha[j] < 0.0) {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if (sum > c) {
                if (alpha[j] > c) {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if (alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }
        alpha[i] = std::clamp(alpha[i], 0.0, c);
        alpha[j] = std::clamp(alpha[j], 0.0, c);

        const double di = alpha[i] - old_i;
        const double dj = alpha[j] - old_j;
        for (std::size_t t = 0; t < n; ++t)
            grad[t] += y[t] * (y[i] * kij(i, t) * di + y[j] * kij(j, t) * dj);

        if (config.record_trace) trace.push_back(dual_from_gradient(alpha, grad));
    }
    return out;
}

SmoOutcome smo_simplified(const Matrix& k, std::span<const int> y, double c, const SolverConfig& config,
                          std::size_t max_iterations, std::vector<double>& alpha, std::vector<double>& trace) {
    const std::size_t n = alpha.size();
    auto kij = [&](std::size_t i, std::size_t j) {
        return k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    };
    auto engine = make_engine(config.seed);
    boost::random::uniform_int_distribution<std::size_t> pick(0, n - 2);

    // f_t = sum_j a_j y_j K_tj, kept up to date after every pair update.
    std::vector<double> f(n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
        if (alpha[j] != 0.0)
            for (std::size_t t = 0; t < n; ++t) f[t] += alpha[j] * y[j] * kij(t, j);
    double b = 0.0;

    auto current_dual = [&] {
        double s = 0.0;
        for (std::size_t t = 0; t < n; ++t) s += alpha[t] - 0.5 * alpha[t] * y[t] * f[t];
        return s;
    };

    SmoOutcome out;
    std::size_t passes = 0;
    const double tol = config.kkt_tolerance;
    while (passes < config.max_passes) {
        std::size_t changed = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e_i = f[i] + b - y[i];
            const bool violates = (y[i] * e_i < -tol && alpha[i] < c) || (y[i] * e_i > tol && alpha[i] > 0.0);
            if (!violates) continue;
            if (out.iterations >= max_iterations) return out;

            std::size_t j = pick(engine);
            if (j >= i) ++j;
            const double e_j = f[j] + b - y[j];
            const double ai_old = alpha[i];
            const double aj_old = alpha[j];
            double lo = 0.0;
            double hi = 0.0;
            if (y[i] != y[j]) {
                lo = std::max(0.0, aj_old - ai_old);
                hi = std::min(c, c + aj_old - ai_old);
            } else {
                lo = std::max(0.0, ai_old + aj_old - c);
                hi = std::min(c, ai_old + aj_old);
            }
            if (lo >= hi) continue;
            const double eta = 2.0 * kij(i, j) - kij(i, i) - kij(j, j);
            if (eta >= 0.0) continue;

            double aj = std::clamp(aj_old - y[j] * (e_i - e_j) / eta, lo, hi);
            if (std::abs(aj - aj_old) < 1e-12 * (aj + aj_old + 1e-12)) continue;
            double ai = std::clamp(ai_old + y[i] * y[j] * (aj_old - aj), 0.0, c);
            alpha[i] = ai;
            alpha[j] = aj;
            ++out.iterations;

            const double di = ai - ai_old;
            const double dj = aj - aj_old;
            const double b1 = b - e_i - y[i] * di * kij(i, i) - y[j] * dj * kij(i, j);
            const double b2 = b - e_j - y[i] * di * kij(i, j) - y[j] * dj * kij(j, j);
            if (ai > 0.0 && ai < c) b = b1;
            else if (aj > 0.0 && aj < c) b = b2;
            else b = 0.5 * (b1 + b2);

            for (std::size_t t = 0; t < n; ++t) f[t] += y[i] * di * kij(t, i) + y[j] * dj * kij(t, j);
            if (config.record_trace) trace.push_back(current_dual());
            ++changed;
        }
        passes = changed == 0 ? passes + 1 : 0;
    }
    out.converged = true;
    return out;
}

}  // namespace

void SolverConfig::validate() const {
    if (!(kkt_tolerance > 0.0)) throw ConfigError("kkt_tolerance must be positive");
    if (max_passes == 0) throw ConfigError("max_passes must be positive");
    if (!(support_threshold > 0.0)) throw ConfigError("support_threshold must be positive");
    if (!(equality_tolerance > 0.0)) throw ConfigError("equality_tolerance must be positive");
}

double dual_objective(std::span<const double> alphas, std::span<const int> labels, const KernelCache& kernel) {
    const std::size_t n = alphas.size();
    if (labels.size() != n || kernel.size() != n) throw ConfigError("dual_objective size mismatch");
    double linear = 0.0;
    double quad = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        linear += alphas[i];
        if (alphas[i] == 0.0) continue;
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += alphas[j] * labels[j] * kernel(i, j);
        quad += alphas[i] * labels[i] * row;
    }
    return linear - 0.5 * quad;
}

DualSolution solve_dual(const KernelCache& kernel, std::span<const int> labels, double c,
                        const SolverConfig& config, std::optional<std::span<const double>> warm_start) {
    config.validate();
    check_problem(kernel, labels, c);
    const std::size_t n = labels.size();

    DualSolution sol;
    if (warm_start) {
        check_feasible(*warm_start, labels, c, 1e-8);
        sol.alphas.assign(warm_start->begin(), warm_start->end());
    } else {
        sol.alphas.assign(n, 0.0);
    }

    const std::size_t max_iterations = config.max_iterations ? config.max_iterations : 10 * n * n;
    const auto outcome = config.variant == SmoVariant::simplified
                             ? smo_simplified(kernel.values(), labels, c, config, max_iterations, sol.alphas, sol.trace)
                             : smo_second_order(kernel.values(), labels, c, config, max_iterations, sol.alphas,
                                                sol.trace);
    sol.converged = outcome.converged;
    sol.iterations = outcome.iterations;
    sol.dual_value = dual_objective(sol.alphas, labels, kernel);

    for (std::size_t i = 0; i < n; ++i)
        if (sol.alphas[i] > config.support_threshold) sol.support_indices.push_back(i);
    const auto bias = compute_bias(sol.alphas, labels, kernel, c, config.support_threshold);
    sol.bias = bias.value;
    sol.bias_fallback = bias.fallback;
    return sol;
}

std::vector<double> project_feasible(std::span<const double> point, std::span<const int> labels, double c) {
    const std::size_t n = point.size();
    auto at = [&](double mu) {
        std::vector<double> a(n);
        for (std::size_t i = 0; i < n; ++i) a[i] = std::clamp(point[i] - mu * labels[i], 0.0, c);
        return a;
    };
    auto balance = [&](double mu) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += labels[i] * std::clamp(point[i] - mu * labels[i], 0.0, c);
        return s;
    };
    // balance(mu) is nonincreasing in mu; bracket its root.
    double span = 1.0;
    for (std::size_t i = 0; i < n; ++i) span = std::max(span, std::abs(point[i]) + c);
    double lo = -span;
    double hi = span;
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (balance(mid) > 0.0) lo = mid;
        else hi = mid;
    }
    // Pick whichever bracket end balances better, then remove the residual
    // imbalance from free coordinates.
    auto a = std::abs(balance(lo)) < std::abs(balance(hi)) ? at(lo) : at(hi);
    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) residual += labels[i] * a[i];
    for (std::size_t i = 0; i < n && residual != 0.0; ++i) {
        const double moved = std::clamp(a[i] - labels[i] * residual, 0.0, c);
        residual -= labels[i] * (a[i] - moved);
        a[i] = moved;
    }
    return a;
}

std::vector<double> solve_dual_bruteforce(const KernelCache& kernel, std::span<const int> labels, double c,
                                          std::size_t steps) {
    check_problem(kernel, labels, c);
    const std::size_t n = labels.size();
    const auto& k = kernel.values();

    // Lipschitz bound of the dual gradient: max absolute row sum of Y K Y.
    double lipschitz = 0.0;
    for (Eigen::Index i = 0; i < k.rows(); ++i) lipschitz = std::max(lipschitz, k.row(i).cwiseAbs().sum());
    const double step = 1.0 / std::max(lipschitz, 1e-12);

    auto gradient = [&](const std::vector<double>& a) {
        std::vector<double> g(n, 1.0);
        for (std::size_t i = 0; i < n; ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < n; ++j) row += a[j] * labels[j] * kernel(i, j);
            g[i] -= labels[i] * row;
        }
        return g;
    };

    // Accelerated projected gradient (FISTA), keeping the best iterate.
    std::vector<double> x(n, 0.0);
    std::vector<double> z = x;
    std::vector<double> best = x;
    double best_value = dual_objective(best, labels, kernel);
    double momentum = 1.0;
    for (std::size_t it = 0; it < steps; ++it) {
        const auto g = gradient(z);
        std::vector<double> moved(n);
        for (std::size_t i = 0; i < n; ++i) moved[i] = z[i] + step * g[i];
        auto next = project_feasible(moved, labels, c);

        const double next_momentum = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
        const double value = dual_objective(next, labels, kernel);
        if (value > best_value) {
            best_value = value;
            best = next;
        }
        if (value < dual_objective(x, labels, kernel)) {
            // restart momentum on non-monotone steps
            z = x;
            momentum = 1.0;
            continue;
        }
        for (std::size_t i = 0; i < n; ++i) z[i] = next[i] + (momentum - 1.0) / next_momentum * (next[i] - x[i]);
        x = std::move(next);
        momentum = next_momentum;
    }
    return best;
}

BiasEstimate compute_bias(std::span<const double> alphas, std::span<const int> labels, const KernelCache& kernel,
                          double c, double support_threshold) {
    const std::size_t n = alphas.size();
    auto margin_term = [&](std::size_t i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            if (alphas[j] != 0.0) s += alphas[j] * labels[j] * kernel(j, i);
        return labels[i] - s;
    };

    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (alphas[i] > support_threshold && alphas[i] < c - support_threshold) {
            sum += margin_term(i);
            ++count;
        }
    }
    if (count > 0) return {sum / static_cast<double>(count), false};

    for (std::size_t i = 0; i < n; ++i) {
        if (alphas[i] > support_threshold) {
            sum += margin_term(i);
            ++count;
        }
    }
    if (count == 0) throw DegenerateModelError("degenerate model: no support vectors");
    return {sum / static_cast<double>(count), true};
}

SvmModel make_model(const Dataset& train, const DualSolution& solution, double gamma, double c) {
    if (solution.alphas.size() != train.size()) throw ConfigError("solution does not match training set");
    SvmModel model;
    model.alphas = solution.alphas;
    model.bias = solution.bias;
    model.bias_fallback = solution.bias_fallback;
    model.support_indices = solution.support_indices;
    model.gamma = gamma;
    model.c = c;
    model.converged = solution.converged;
    model.iterations = solution.iterations;
    model.dual_value = solution.dual_value;
    if (solution.support_indices.empty()) throw DegenerateModelError("degenerate model: no support vectors");
    const auto& x = train.features();
    model.support_vectors.resize(static_cast<Eigen::Index>(solution.support_indices.size()), x.cols());
    for (std::size_t m = 0; m < solution.support_indices.size(); ++m) {
        const auto i = solution.support_indices[m];
        model.support_vectors.row(static_cast<Eigen::Index>(m)) = x.row(static_cast<Eigen::Index>(i));
        model.support_labels.push_back(train.labels()[i]);
    }
    return model;
}

int sign_label(double score) noexcept { return score >= 0.0 ? 1 : -1; }

std::vector<double> decision_values(const SvmModel& model, const Matrix& features) {
    if (static_cast<std::size_t>(features.cols()) != model.dim())
        throw DataError("test feature dimension " + std::to_string(features.cols()) +
                        " does not match training dimension " + std::to_string(model.dim()));
    const Matrix d2 = cross_squared_distances(features, model.support_vectors);
    std::vector<double> scores(static_cast<std::size_t>(features.rows()));
    for (Eigen::Index r = 0; r < d2.rows(); ++r) {
        const auto row = rbf_kernel_row(std::span(d2.row(r).data(), static_cast<std::size_t>(d2.cols())), model.gamma);
        double s = model.bias;
        for (std::size_t m = 0; m < row.size(); ++m)
            s += model.support_labels[m] * model.alphas[model.support_indices[m]] * row[m];
        scores[static_cast<std::size_t>(r)] = s;
    }
    return scores;
}

std::vector<int> predict(const SvmModel& model, const Matrix& features) {
    const auto scores = decision_values(model, features);
    std::vector<int> labels(scores.size());
    std::transform(scores.begin(), scores.end(), labels.begin(), sign_label);
    return labels;
}

}  // namespace oksvm
