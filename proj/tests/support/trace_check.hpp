#pragma once

#include <string>
#include <vector>

#include <oksvm/optimizer.hpp>

namespace oracle {

// Replays the bold-driver bookkeeping against a recorded trace and returns a
// description of every rule that does not hold (empty when the trace is
// consistent).
inline std::vector<std::string> trace_violations(const oksvm::OptimizerState& state,
                                                 const oksvm::OksvmConfig& config) {
    using oksvm::StepEvent;
    std::vector<std::string> out;
    const auto& trace = state.trace;
    auto fail = [&](std::size_t i, const std::string& what) { out.push_back("step " + std::to_string(i) + ": " + what); };

    if (trace.empty() || trace.front().event != StepEvent::initial) {
        out.emplace_back("trace must start with the initial solve");
        return out;
    }
    if (trace.front().eta != config.eta0 || trace.front().gamma != config.gamma0) fail(0, "initial state");
    if (!state.terminated_by) out.emplace_back("no termination reason");

    double last_accepted = trace.front().dual_value;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const auto& r = trace[i];
        if (!(r.gamma > 0.0 && r.gamma <= config.gamma_max)) fail(i, "gamma outside (0, gamma_max]");
        if (r.ws > config.ws_limit) fail(i, "ws above limit");
        if (i == 0) continue;
        const auto& p = trace[i - 1];
        if (r.t != p.t + 1) fail(i, "step index");
        const bool terminal = r.event == StepEvent::converged || r.event == StepEvent::gamma_exceeded ||
                              (r.event == StepEvent::stagnant && r.ws == config.ws_limit);
        if (terminal && i + 1 != trace.size()) fail(i, "terminal event is not last");
        switch (r.event) {
            case StepEvent::initial:
                fail(i, "second initial record");
                break;
            case StepEvent::accepted:
                if (r.eta != p.eta * config.zeta_plus) fail(i, "accepted step must multiply eta by zeta_plus");
                if (r.ws != 0) fail(i, "accepted step must reset ws");
                if (r.gamma != r.proposed_gamma) fail(i, "accepted gamma");
                if (!(r.dual_value < p.dual_value)) fail(i, "accepted step must decrease D");
                if (r.dual_value > last_accepted) fail(i, "accepted D increased");
                last_accepted = r.dual_value;
                break;
            case StepEvent::overshoot:
            case StepEvent::nonpositive:
                if (r.eta != p.eta * config.zeta_minus) fail(i, "rejection must multiply eta by zeta_minus");
                if (r.gamma != p.gamma || r.dual_value != p.dual_value) fail(i, "rejection must keep state");
                if (r.ws != p.ws) fail(i, "rejection changed ws");
                if (r.event == StepEvent::nonpositive && r.proposed_gamma > 0.0) fail(i, "nonpositive label");
                break;
            case StepEvent::converged:
            case StepEvent::gamma_exceeded:
                if (r.eta != p.eta || r.gamma != p.gamma || r.dual_value != p.dual_value) fail(i, "stop changed state");
                if (r.event == StepEvent::gamma_exceeded && !(r.proposed_gamma > config.gamma_max))
                    fail(i, "gamma_exceeded without exceeding");
                break;
            case StepEvent::stagnant:
                if (r.eta != p.eta) fail(i, "stagnant step changed eta");
                if (r.ws != p.ws + 1) fail(i, "stagnant step must increment ws");
                if (r.gamma != r.proposed_gamma) fail(i, "stagnant gamma");
                break;
        }
    }
    const auto& last = trace.back();
    if (state.gamma_t != last.gamma || state.eta != last.eta || state.ws != last.ws) out.emplace_back("final state");
    return out;
}

}  // namespace oracle
