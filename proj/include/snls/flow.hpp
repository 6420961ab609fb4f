#pragma once

#include "snls/functionals.hpp"
#include "snls/manifold.hpp"

namespace snls {

enum class FlowTermination { converged, max_iters, left_zset, degenerate, backtrack_exhausted };

const char* to_string(FlowTermination t);

struct FlowState {
    Field u;
    int iter = 0;
    double gamma = 0.0;
    double dual = 0.0;
    std::array<double, 2> upsilon{0.0, 0.0};
    double phi = 0.0;
    double tau = 0.0;  // last accepted step size
    bool degenerate = false;
};

/// One H_eps-preconditioned descent step: the direction solves
/// (-Lap_h + V_eps) g = residual(u) (the same solve as the dual norm), the
/// step size backtracks from an adaptive trial until the Armijo decrease
/// gamma(u - tau g) <= gamma(u) - 1e-4 tau <r, g> holds. The trial doubles
/// after two consecutive full-step acceptances.
class FlowStepper {
public:
    enum class Outcome { accepted, backtrack_exhausted, degenerate };

    FlowStepper(Field u0, const Problem& problem);

    const FlowState& state() const { return state_; }
    Outcome step();

    double last_step_norm() const { return last_step_norm_; }  // ||u_next - u||_eps
    double last_drift() const { return last_drift_; }          // |Upsilon_next - Upsilon|

private:
    void refresh();

    const Problem& problem_;
    FlowState state_;
    Field direction_;
    double descent_rate_ = 0.0;  // <residual, direction> = dual^2
    double tau_trial_ = 1.0;
    int consecutive_full_ = 0;
    double last_step_norm_ = 0.0;
    double last_drift_ = 0.0;
};

struct TraceRow {
    int iter = 0;
    double gamma = 0.0;
    double dual = 0.0;
    std::array<double, 2> upsilon{0.0, 0.0};
    double phi = 0.0;
    double tau = 0.0;
};

struct FlowOptions {
    double stop_tol = 1e-3;
    int max_steps = 400;
    int stride = 1;
    bool check_working_set = true;  // terminate if the state leaves Z(rho1, 3 delta0)

    static FlowOptions from(const Params& params) {
        FlowOptions o;
        o.stop_tol = params.stop_tol();
        o.max_steps = params.solver.max_steps;
        o.stride = params.solver.trace_stride;
        return o;
    }
};

struct FlowTrace {
    std::vector<TraceRow> rows;
    FlowTermination reason = FlowTermination::max_iters;
    Field final;
    double final_dual = 0.0;
    int iters = 0;
    bool start_in_working_set = true;   // u0 in Z(rho1, 3 delta0)
    bool end_in_confined_set = false;   // final in Z(rho0, 3 delta0)
    double max_drift_ratio = 0.0;       // max |dUpsilon| / (D1 ||du||_eps)
    bool drift_bound_ok = true;
};

/// Descend until the dual residual drops below opts.stop_tol or the budget
/// runs out; the trace records energy, dual residual, barycenter, penalty and
/// step size every stride. Energies are non-increasing across rows by the
/// Armijo contract.
FlowTrace descend(const Field& u0, const Problem& problem, const GroundStateSet& s0,
                  const FlowOptions& opts);

}  // namespace snls
