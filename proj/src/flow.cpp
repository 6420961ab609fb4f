#include "snls/flow.hpp"

#include <cmath>

namespace snls {

const char* to_string(FlowTermination t) {
    switch (t) {
        case FlowTermination::converged: return "converged";
        case FlowTermination::max_iters: return "max-iters";
        case FlowTermination::left_zset: return "left-Z-set";
        case FlowTermination::degenerate: return "degenerate";
        case FlowTermination::backtrack_exhausted: return "backtrack-exhausted";
    }
    return "?";
}

FlowStepper::FlowStepper(Field u0, const Problem& problem) : problem_(problem) {
    state_.u = std::move(u0);
    state_.u.zero_boundary();
    refresh();
}

void FlowStepper::refresh() {
    PenaltyParts parts = penalty_parts(state_.u, problem_);
    state_.degenerate = parts.bary.degenerate;
    state_.upsilon = parts.bary.upsilon;
    state_.phi = parts.value;
    state_.gamma = energy_J(state_.u, problem_) + parts.value;
    const Field r = residual(state_.u, problem_);
    const DualSolve ds = dual_solve(r, problem_);
    direction_ = ds.direction;
    state_.dual = ds.dual;
    descent_rate_ = ds.dual * ds.dual;
}

FlowStepper::Outcome FlowStepper::step() {
    if (state_.degenerate) return Outcome::degenerate;
    const SolverOptions& so = problem_.params.solver;
    double tau = tau_trial_;
    while (tau >= so.backtrack_floor * tau_trial_) {
        Field candidate = state_.u;
        for (std::size_t k = 0; k < candidate.size(); ++k)
            candidate.v[k] -= tau * direction_.v[k];
        candidate.zero_boundary();
        double gamma_cand;
        bool usable = true;
        try {
            gamma_cand = gamma_energy(candidate, problem_);
        } catch (const SolverError&) {
            usable = false;
            gamma_cand = 0.0;
        }
        if (usable && gamma_cand <= state_.gamma - so.armijo * tau * descent_rate_) {
            last_step_norm_ = tau * energy_norm(problem_, direction_);
            const std::array<double, 2> prev = state_.upsilon;
            const bool was_degenerate = state_.degenerate;
            state_.u = std::move(candidate);
            state_.tau = tau;
            ++state_.iter;
            if (tau == tau_trial_) {
                if (++consecutive_full_ >= 2) {
                    tau_trial_ = std::min(2.0 * tau_trial_, 256.0);
                    consecutive_full_ = 0;
                }
            } else {
                consecutive_full_ = 0;
            }
            refresh();
            last_drift_ = (was_degenerate || state_.degenerate)
                              ? 0.0
                              : std::hypot(state_.upsilon[0] - prev[0],
                                           state_.upsilon[1] - prev[1]);
            return Outcome::accepted;
        }
        tau *= so.backtrack;
    }
    return Outcome::backtrack_exhausted;
}

FlowTrace descend(const Field& u0, const Problem& problem, const GroundStateSet& s0,
                  const FlowOptions& opts) {
    FlowTrace trace;
    const Params& pp = problem.params;
    trace.start_in_working_set = zset_membership(u0, pp.rho1, 3.0 * pp.delta0, s0, problem);

    FlowStepper stepper(u0, problem);
    auto record = [&](const FlowState& st) {
        trace.rows.push_back({st.iter, st.gamma, st.dual, st.upsilon, st.phi, st.tau});
    };
    record(stepper.state());

    while (true) {
        const FlowState& st = stepper.state();
        if (st.degenerate) {
            trace.reason = FlowTermination::degenerate;
            break;
        }
        // the stop check applies after at least one step, so every trace
        // carries a flow response even when u0 is already below tolerance
        if (st.iter > 0 && st.dual < opts.stop_tol) {
            trace.reason = FlowTermination::converged;
            break;
        }
        if (st.iter >= opts.max_steps) {
            trace.reason = FlowTermination::max_iters;
            break;
        }
        const FlowStepper::Outcome out = stepper.step();
        if (out == FlowStepper::Outcome::backtrack_exhausted) {
            trace.reason = FlowTermination::backtrack_exhausted;
            break;
        }
        if (out == FlowStepper::Outcome::degenerate) {
            trace.reason = FlowTermination::degenerate;
            break;
        }
        const FlowState& now = stepper.state();
        if (pp.d1_bound > 0.0 && stepper.last_step_norm() > 0.0) {
            const double ratio =
                stepper.last_drift() / (pp.d1_bound * stepper.last_step_norm());
            trace.max_drift_ratio = std::max(trace.max_drift_ratio, ratio);
            if (ratio > 1.0) trace.drift_bound_ok = false;
        }
        if (now.iter % opts.stride == 0) record(now);
        if (opts.check_working_set &&
            !zset_membership(now.u, pp.rho1, 3.0 * pp.delta0, s0, problem)) {
            trace.reason = FlowTermination::left_zset;
            break;
        }
    }

    const FlowState& last = stepper.state();
    if (trace.rows.empty() || trace.rows.back().iter != last.iter) record(last);
    trace.final = last.u;
    trace.final_dual = last.dual;
    trace.iters = last.iter;
    trace.end_in_confined_set =
        zset_membership(trace.final, pp.rho0, 3.0 * pp.delta0, s0, problem);
    return trace;
}

}  // namespace snls
