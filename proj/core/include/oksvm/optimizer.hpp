#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "oksvm/dataset.hpp"
#include "oksvm/kernel.hpp"
#include "oksvm/solver.hpp"

namespace oksvm {

/// Control parameters of the kernel-learning loop.
///
/// Defaults: eta0 = 0.01, bold-driver factors 1.01 / 0.1, gamma_max = 1000,
/// epsilon = 0.01 and a plateau limit of five unchanged steps.
struct OksvmConfig {
    double gamma0 = 1.0;
    double eta0 = 0.01;
    double zeta_plus = 1.01;
    double zeta_minus = 0.1;
    double gamma_max = 1000.0;
    double epsilon = 0.01;
    std::size_t ws_limit = 5;
    std::size_t max_outer_steps = 500;
    /// |D_new - D_old| <= tolerance * |D_old| counts as "unchanged".
    double stagnation_tolerance = 1e-12;
    /// Start every re-solve from the previous multipliers.
    bool warm_start = true;

    void validate() const;
};

enum class StepEvent {
    initial,         // solve at gamma0
    accepted,        // dual decreased: gamma kept, eta *= zeta_plus, ws reset
    overshoot,       // dual increased: gamma reverted, gamma_f moved, eta *= zeta_minus
    converged,       // dual increased within epsilon of gamma_f: stop
    stagnant,        // dual unchanged: gamma kept, ws += 1
    nonpositive,     // proposed gamma <= 0: rejected, gamma_f moved, eta *= zeta_minus
    gamma_exceeded,  // proposed gamma > gamma_max: stop without solving
};

enum class Termination { converged, gamma_exceeded, stagnated, step_cap };

std::string_view to_string(StepEvent event) noexcept;
std::string_view to_string(Termination reason) noexcept;

/// One trace line. gamma / dual_value describe the state retained after the
/// step, so every recorded gamma lies in (0, gamma_max].
struct TraceRecord {
    std::size_t t = 0;
    double gamma = 0.0;
    double dual_value = 0.0;
    double eta = 0.0;
    std::size_t ws = 0;
    StepEvent event = StepEvent::initial;
    /// Proposed gamma for this step (equal to gamma for the initial record).
    double proposed_gamma = 0.0;
};

struct OptimizerState {
    std::size_t t = 0;
    double gamma_t = 0.0;
    double gamma_f = 0.0;
    double eta = 0.0;
    std::size_t ws = 0;
    std::vector<TraceRecord> trace;
    std::optional<Termination> terminated_by;
    /// False if any dual solve along the way hit its iteration cap.
    bool all_solves_converged = true;
};

/// dD/dgamma = 1/2 sum_ij a_i a_j y_i y_j d2_ij K_ij at fixed multipliers.
double dual_gamma_gradient(std::span<const double> alphas, std::span<const int> labels, const DistanceMatrix& d2,
                           const KernelCache& kernel);

/// gamma - eta * gradient; the caller rejects nonpositive results.
double gamma_step(double gamma, double eta, double gradient) noexcept;

struct OksvmResult {
    SvmModel model;
    OptimizerState state;
};

/// Learns gamma by gradient descent on the maximised dual, interleaved with
/// dual re-solves, under bold-driver step control. The model returned is the
/// solve at the last retained gamma.
OksvmResult train_oksvm(const Dataset& train, double c, const OksvmConfig& config, const SolverConfig& solver);

/// Single dual solve at fixed (c, gamma).
SvmModel train_svm_baseline(const Dataset& train, double c, double gamma, const SolverConfig& solver);

/// CSV with header t,gamma,dual_value,eta,ws,event.
void write_trace_csv(const OptimizerState& state, std::ostream& out);

}  // namespace oksvm
