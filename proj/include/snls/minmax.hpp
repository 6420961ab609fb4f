#pragma once

#include <string>

#include "snls/flow.hpp"
#include "snls/limit.hpp"
#include "snls/manifold.hpp"

namespace snls {

/// Piecewise-affine amplitude profile: theta1 at s=-1, 1 on [-1/2,1/2],
/// 1+theta1 at s=1.
double theta_profile(double s, double theta1);

struct PathPoint {
    std::array<double, 2> p{0.0, 0.0};
    double s = 0.0;
    Field field;
    double gamma = 0.0;
    double poho_v0 = 0.0;
    std::array<double, 2> eps_ups{0.0, 0.0};  // falls back to p when the gate is degenerate
    bool bary_degenerate = false;
};

/// Initial-family member at (p, s). d=1: theta(s) * (phi_eps U0)(x - p/eps)
/// with p snapped to the eps*h lattice so the translate is node-aligned;
/// d=2: theta(s) * (phi_eps U0)(e^{-2 theta1 s} (x - p/eps)).
PathPoint initial_path(std::array<double, 2> p, double s, const Problem& problem,
                       const GroundStateSet& s0);

struct PathTableRow {
    std::array<double, 2> p{0.0, 0.0};
    double s = 0.0;
    double gamma = 0.0;
    double poho_v0 = 0.0;
    std::array<double, 2> eps_ups{0.0, 0.0};
    bool boundary = false;
    bool bary_degenerate = false;
};

struct PathLevel {
    double c_eps = 0.0;
    PathPoint argmax;
    double boundary_max = 0.0;
    double margin = 0.0;  // c_eps - boundary_max
    double used_theta1 = 0.0;
    bool endpoint_signs_ok = true;
    double max_center_offset = 0.0;  // max |p - eps Upsilon| over the samples
    std::vector<PathTableRow> table;
};

/// Max of the penalized energy over the sampled family on O^{delta0} x [-1,1];
/// deterministic argmax with lexicographic tie-break on the sample indices.
/// theta1 is halved once if the endpoint Pohozaev signs fail.
PathLevel path_level(const Problem& problem, const GroundStateSet& s0, int p_count, int s_count,
                     int jobs = 1);

/// (eps Upsilon - x_max(V), P_{V0}) evaluated on the family member at (p,s),
/// optionally after flow_budget descent steps. Small-amplitude endpoints sit
/// outside every Z set (degenerate gate); there the first component falls
/// back to p - x_max, the uniform limit of eps Upsilon on the family.
std::vector<double> degree_map(std::array<double, 2> p, double s, const Problem& problem,
                               const GroundStateSet& s0, int flow_budget);

/// Winding number of a sampled closed plane loop about the origin via summed
/// signed angle increments. Throws if a sample hits the origin or consecutive
/// increments exceed pi/2 (undersampling guard).
int winding_degree(const std::vector<std::array<double, 2>>& loop);

/// Samples of the degree map along the positively traversed boundary of
/// O^{delta0} x [-1,1] (d=1 only).
std::vector<std::array<double, 2>> degree_boundary_loop(const Problem& problem,
                                                        const GroundStateSet& s0, int samples,
                                                        int flow_budget, int jobs = 1);

struct MinmaxOptions {
    int p_count = 9;
    int s_count = 33;
    double decay_fit_lo = 5.0;
    double decay_fit_hi = 15.0;
    double decay_r_step = 0.5;
    int jobs = 1;
};

struct SolveRecord {
    double eps = 0.0;
    int dimension = 1;
    double gamma = 0.0;
    double dual = 0.0;
    std::array<double, 2> x_eps{0.0, 0.0};  // eps * Upsilon, original coordinates
    double dist_vmax = 0.0;                 // distance of x_eps to the maximum set of V
    double decay_rate = 0.0;                // fitted tail rate (rescaled coordinates)
    double decay_log_c = 0.0;
    double decay_fit_r2 = 0.0;
    double poho_rel = 0.0;  // |P_m| / kinetic at m = V(x_eps)
    double manifold_dist = 0.0;
    int manifold_member = -1;
    double phi = 0.0;
    double chi_mass_scaled = 0.0;  // eps^{-1/2} int chi_{eps,u} u^2
    double c_eps = 0.0;
    double boundary_margin = 0.0;
    std::array<double, 2> argmax_p{0.0, 0.0};
    double argmax_s = 0.0;
    int iters = 0;
    std::string termination;
    bool in_confined_zset = false;
    bool start_in_working_set = true;
    double stop_tol = 0.0;
};

/// End-to-end pipeline: path level, descent from the argmax, validation
/// (convergence, penalty extinction, residual tolerance are fatal; Z-set
/// membership and manifold distance are recorded), concentration and decay
/// diagnostics. On success the trace is returned alongside the record.
struct SolveResult {
    SolveRecord record;
    FlowTrace trace;
    PathLevel path;
};

SolveResult solve(const Problem& problem, const GroundStateSet& s0, const MinmaxOptions& opts);

/// Largest adequate eps for the configured box geometry (path translates plus
/// member support must fit the grid).
bool box_adequate(const Problem& problem, const GroundStateSet& s0, std::string* why = nullptr);

}  // namespace snls
