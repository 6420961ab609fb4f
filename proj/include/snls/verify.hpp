#pragma once

#include <functional>
#include <string>

#include "snls/flow.hpp"
#include "snls/limit.hpp"
#include "snls/manifold.hpp"

namespace snls {

/// Tail energy Q(R) = int_{|x - Upsilon| > R} (|grad u|^2 + u^2) with a
/// log-linear fit over the configured window.
struct DecayReport {
    std::vector<double> radii;
    std::vector<double> q;
    double rate = 0.0;       // fitted decay rate c (log Q ~ log C - c R)
    double log_c = 0.0;
    double r2 = 0.0;         // coefficient of determination over the window
    double window_lo = 0.0;
    double window_hi = 0.0;
};

DecayReport tail_profile(const Field& u, const Problem& problem, double fit_lo, double fit_hi,
                         double r_step = 0.5);

/// Scalar recursion check: given samples q[i] = Q(r1 + i), theta > 1, b >= 0,
/// verify the hypothesis Q(r) <= Q(r-1)/theta + b at every integer step and
/// the implied bound Q(R) <= theta^{r1+1} Q(r1) e^{-R ln theta} + theta b/(theta-1).
struct RecursionCheck {
    bool conclusion_ok = false;
    int hypothesis_violation_step = -1;  // -1: hypothesis held everywhere
    double limit_bound = 0.0;            // theta b / (theta - 1)
};

RecursionCheck decay_recursion_check(const std::vector<double>& q, double theta, double b,
                                     double r1);

/// Measured vs predicted first-order energy response to translating a ground
/// state at m = V(z) centered at z/eps along the V-gradient direction.
struct DirectionalReport {
    std::array<double, 2> z{0.0, 0.0};
    double eps = 0.0;
    double m = 0.0;
    double grad_v1 = 0.0;     // (d/dx1 V)(z)
    double measured = 0.0;    // <residual(u), d1 u>
    double predicted = 0.0;   // -(eps/2) (d1 V)(z) ||u||_2^2
    double ratio = 0.0;
    double upper_bound = 0.0;  // dual norm * ||d1 u||_eps
    bool bound_ok = false;
    double aux_gap = 0.0;  // ||u - w||_eps for the auxiliary solve (-Lap + V_eps) w = f(u)
};

DirectionalReport directional_derivative_test(std::array<double, 2> z, const Problem& problem,
                                              const GroundState* reuse = nullptr);

struct FloorOptions {
    int z_count = 8;
    std::vector<double> rho_fracs{0.4, 0.65, 0.9};
    int directions_per_rho = 2;
    std::uint64_t seed = 1;
};

struct FloorPoint {
    double eps = 0.0;
    std::string regime;
    double min_dual = 0.0;
    std::string witness;
    double witness_manifold_dist = 0.0;
    bool witness_in_zset = false;
};

/// Regime (a): barycenter displaced into dist(eps Upsilon, O) in (delta0, 3 delta0);
/// translated ground states with the mass coefficient optimized to the local
/// potential value (floor expected proportional to eps).
FloorPoint floor_displaced(const Problem& problem, const GroundStateSet& s0,
                           const FloorOptions& opts);

/// Regime (b): perturbations of centered members with ||w||_eps in
/// [rho0/3, rho0] (floor expected eps-independent).
FloorPoint floor_annulus(const Problem& problem, const GroundStateSet& s0,
                         const FloorOptions& opts);

/// Complement: optimally matched members centered in O; near-critical, their
/// dual norms trace an O(eps) upper envelope.
FloorPoint floor_optimal(const Problem& problem, const GroundStateSet& s0,
                         const FloorOptions& opts);

using ProblemFactory = std::function<Problem(double)>;
using S0Factory = std::function<GroundStateSet(const Problem&)>;

std::vector<FloorPoint> gradient_floor_experiment(const std::vector<double>& eps_list,
                                                  const ProblemFactory& make_problem,
                                                  const S0Factory& make_s0,
                                                  const FloorOptions& opts);

/// Best-fit member diagnostics of a (near-)converged state.
struct ConvergenceReport {
    double dist = 0.0;
    double matched_m = 0.0;
    std::array<double, 2> shift{0.0, 0.0};
    double shift_vs_upsilon = 0.0;  // |shift - Upsilon(u)|
    bool within_2r0 = false;
};

ConvergenceReport convergence_diagnostics(const Field& u, const Problem& problem,
                                          const GroundStateSet& s0);

/// Least-squares slope of log(y) against log(x); used by the sweep checks.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace snls
