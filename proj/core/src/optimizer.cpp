#include "oksvm/optimizer.hpp"

#include <cmath>
#include <memory>
#include <ostream>

#include "oksvm/error.hpp"
#include "text_format.hpp"

namespace oksvm {

void OksvmConfig::validate() const {
    auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
    if (!positive(gamma0)) throw ConfigError("gamma0 must be positive");
    if (!positive(eta0)) throw ConfigError("eta0 must be positive");
    if (!(zeta_plus > 1.0) || !std::isfinite(zeta_plus)) throw ConfigError("zeta_plus must exceed 1");
    if (!(zeta_minus > 0.0 && zeta_minus < 1.0)) throw ConfigError("zeta_minus must lie in (0, 1)");
    if (!positive(gamma_max)) throw ConfigError("gamma_max must be positive");
    if (gamma0 > gamma_max) throw ConfigError("gamma0 exceeds gamma_max");
    if (!positive(epsilon)) throw ConfigError("epsilon must be positive");
    if (ws_limit == 0) throw ConfigError("ws_limit must be positive");
    if (!(stagnation_tolerance >= 0.0)) throw ConfigError("stagnation_tolerance must be nonnegative");
}

std::string_view to_string(StepEvent event) noexcept {
    switch (event) {
        case StepEvent::initial: return "initial";
        case StepEvent::accepted: return "accepted";
        case StepEvent::overshoot: return "overshoot";
        case StepEvent::converged: return "converged";
        case StepEvent::stagnant: return "stagnant";
        case StepEvent::nonpositive: return "nonpositive";
        case StepEvent::gamma_exceeded: return "gamma_exceeded";
    }
    return "unknown";
}

std::string_view to_string(Termination reason) noexcept {
    switch (reason) {
        case Termination::converged: return "converged";
        case Termination::gamma_exceeded: return "gamma_exceeded";
        case Termination::stagnated: return "stagnated";
        case Termination::step_cap: return "step_cap";
    }
    return "unknown";
}

double dual_gamma_gradient(std::span<const double> alphas, std::span<const int> labels, const DistanceMatrix& d2,
                           const KernelCache& kernel) {
    const std::size_t n = alphas.size();
    if (labels.size() != n || d2.size() != n || kernel.size() != n)
        throw ConfigError("dual_gamma_gradient size mismatch");
    // Symmetric sum: 1/2 sum_{i != j} == sum_{i < j}; the diagonal has d2 = 0.
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (alphas[i] == 0.0) continue;
        double row = 0.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            if (alphas[j] == 0.0) continue;
            row += alphas[j] * labels[j] * d2(i, j) * kernel(i, j);
        }
        total += alphas[i] * labels[i] * row;
    }
    return total;
}

double gamma_step(double gamma, double eta, double gradient) noexcept { return gamma - eta * gradient; }

OksvmResult train_oksvm(const Dataset& train, double c, const OksvmConfig& config, const SolverConfig& solver) {
    config.validate();
    solver.validate();
    const auto& labels = train.labels();
    auto d2 = std::make_shared<const DistanceMatrix>(squared_distance_matrix(train.features()));

    KernelCache kernel = rbf_kernel_matrix(d2, config.gamma0);
    DualSolution current = solve_dual(kernel, labels, c, solver);

    OptimizerState state;
    state.gamma_t = config.gamma0;
    state.gamma_f = config.gamma0;
    state.eta = config.eta0;
    state.all_solves_converged = current.converged;
    auto record = [&](StepEvent event, double proposed) {
        state.trace.push_back({state.t, state.gamma_t, current.dual_value, state.eta, state.ws, event, proposed});
    };
    record(StepEvent::initial, config.gamma0);

    while (!state.terminated_by) {
        if (state.t >= config.max_outer_steps) {
            state.terminated_by = Termination::step_cap;
            break;
        }
        const double gradient = dual_gamma_gradient(current.alphas, labels, *d2, kernel);
        const double proposed = gamma_step(state.gamma_t, state.eta, gradient);
        ++state.t;

        if (proposed > config.gamma_max) {
            state.terminated_by = Termination::gamma_exceeded;
            record(StepEvent::gamma_exceeded, proposed);
            break;
        }
        if (!(proposed > 0.0)) {
            state.gamma_f = state.gamma_t;
            state.eta *= config.zeta_minus;
            record(StepEvent::nonpositive, proposed);
            continue;
        }

        KernelCache candidate_kernel = kernel.with_gamma(proposed);
        DualSolution candidate =
            config.warm_start
                ? solve_dual(candidate_kernel, labels, c, solver, std::span<const double>(current.alphas))
                : solve_dual(candidate_kernel, labels, c, solver);
        state.all_solves_converged = state.all_solves_converged && candidate.converged;

        const double before = current.dual_value;
        const double after = candidate.dual_value;
        if (after > before) {
            // Minimum passed: keep gamma_t and the multipliers solved there.
            if (std::abs(state.gamma_t - state.gamma_f) < config.epsilon) {
                state.terminated_by = Termination::converged;
                record(StepEvent::converged, proposed);
            } else {
                state.gamma_f = state.gamma_t;
                state.eta *= config.zeta_minus;
                record(StepEvent::overshoot, proposed);
            }
        } else if (before - after <= config.stagnation_tolerance * std::abs(before)) {
            state.gamma_t = proposed;
            kernel = std::move(candidate_kernel);
            current = std::move(candidate);
            ++state.ws;
            record(StepEvent::stagnant, proposed);
            if (state.ws >= config.ws_limit) state.terminated_by = Termination::stagnated;
        } else {
            state.gamma_t = proposed;
            kernel = std::move(candidate_kernel);
            current = std::move(candidate);
            state.eta *= config.zeta_plus;
            state.ws = 0;
            record(StepEvent::accepted, proposed);
        }
    }

    return {make_model(train, current, state.gamma_t, c), std::move(state)};
}

SvmModel train_svm_baseline(const Dataset& train, double c, double gamma, const SolverConfig& solver) {
    auto d2 = std::make_shared<const DistanceMatrix>(squared_distance_matrix(train.features()));
    const auto kernel = rbf_kernel_matrix(std::move(d2), gamma);
    return make_model(train, solve_dual(kernel, train.labels(), c, solver), gamma, c);
}

void write_trace_csv(const OptimizerState& state, std::ostream& out) {
    out << "t,gamma,dual_value,eta,ws,event\n";
    for (const auto& r : state.trace) {
        out << r.t << ',' << detail::format_double(r.gamma) << ',' << detail::format_double(r.dual_value) << ','
            << detail::format_double(r.eta) << ',' << r.ws << ',' << to_string(r.event) << '\n';
    }
}

}  // namespace oksvm
