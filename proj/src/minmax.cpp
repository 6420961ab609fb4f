#include "snls/minmax.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "snls/common.hpp"
#include "snls/verify.hpp"

namespace snls {

double theta_profile(double s, double theta1) {
    if (!(s >= -1.0 && s <= 1.0)) throw ConfigError("theta_profile: s outside [-1, 1]");
    if (!(theta1 > 0.0 && theta1 < 0.5)) throw ConfigError("theta_profile: theta1 outside (0, 1/2)");
    if (s <= -0.5) return 2.0 * (1.0 - theta1) * s + 2.0 - theta1;
    if (s < 0.5) return 1.0;
    return 2.0 * theta1 * s + 1.0 - theta1;
}

namespace {

PathPoint path_point_impl(std::array<double, 2> p, double s, const Problem& problem,
                          const GroundStateSet& s0, double theta1) {
    const Params& pp = problem.params;
    const double eps = pp.eps;
    const BoxRegion odelta = pp.o_region.expanded(pp.delta0);
    if (odelta.distance(p, problem.dim()) > 1e-6 + eps * problem.grid->spacing())
        throw ConfigError("initial_path: p outside O^{delta0}");

    const S0Member& ref = s0.reference_member();
    const double amp = theta_profile(s, theta1);

    PathPoint pt;
    pt.s = s;
    const Grid& g = *problem.grid;

    if (problem.dim() == 1) {
        // node-aligned translate of the polished reference profile
        const int K = static_cast<int>(std::llround((p[0] / eps - g.offset()[0]) / g.spacing()));
        const double center = g.offset()[0] + g.spacing() * K;
        pt.p = {eps * center, 0.0};
        const double support = ref.gs.radial.support_radius(1e-14);
        if (std::abs(center - g.offset()[0]) + std::min(support, pp.delta0 / eps) >
            g.halfwidth())
            throw SolverError("initial_path: p/eps outside the computational box");
        pt.field = Field(problem.grid);
        const int n = g.n();
        const int ic = (n - 1) / 2;
        const CutoffSpec cut = pp.cutoffs();
        for (int i = 0; i < n; ++i) {
            const int j = i - K;
            if (j < 0 || j >= n) continue;
            const double radial = std::abs(static_cast<double>(i - ic - K)) * g.spacing();
            pt.field.v[static_cast<std::size_t>(i)] =
                amp * cut.phi(eps * radial) * ref.gs.field.v[static_cast<std::size_t>(j)];
        }
        pt.field.zero_boundary();
    } else {
        const double scale = std::exp(-2.0 * theta1 * s);
        const std::array<double, 2> center{p[0] / eps, p[1] / eps};
        pt.p = p;
        const double support = ref.gs.radial.support_radius(1e-14) / scale;
        for (int a = 0; a < 2; ++a) {
            if (std::abs(center[a] - g.offset()[a]) +
                    std::min(support, pp.delta0 / (eps * scale)) >
                g.halfwidth())
                throw SolverError("initial_path: p/eps outside the computational box");
        }
        pt.field = sampled_translate(ref.gs.radial, center, amp, scale, problem, true);
    }

    pt.gamma = gamma_energy(pt.field, problem);
    pt.poho_v0 = pohozaev_P(pt.field, s0.v0, problem.dim(), problem);
    const BarycenterReport bary = barycenter(pt.field, pp);
    pt.bary_degenerate = bary.degenerate;
    pt.eps_ups = bary.degenerate
                     ? pt.p
                     : std::array<double, 2>{eps * bary.upsilon[0], eps * bary.upsilon[1]};
    return pt;
}

}  // namespace

PathPoint initial_path(std::array<double, 2> p, double s, const Problem& problem,
                       const GroundStateSet& s0) {
    return path_point_impl(p, s, problem, s0, problem.params.theta1);
}

namespace {

PathLevel path_level_once(const Problem& problem, const GroundStateSet& s0, int p_count,
                          int s_count, double theta1, int jobs) {
    const Params& pp = problem.params;
    const BoxRegion odelta = pp.o_region.expanded(pp.delta0);
    const int pj = problem.dim() == 2 ? p_count : 1;
    const std::size_t total = static_cast<std::size_t>(p_count) * static_cast<std::size_t>(pj) *
                              static_cast<std::size_t>(s_count);

    struct Cell {
        PathTableRow row;
        bool ok = false;
    };
    std::vector<Cell> cells(total);

    auto coords = [&](std::size_t flat, int& pi, int& pjj, int& si) {
        si = static_cast<int>(flat % static_cast<std::size_t>(s_count));
        const std::size_t rest = flat / static_cast<std::size_t>(s_count);
        pjj = static_cast<int>(rest % static_cast<std::size_t>(pj));
        pi = static_cast<int>(rest / static_cast<std::size_t>(pj));
    };

    parallel_for(total, jobs, [&](std::size_t flat) {
        int pi, pjj, si;
        coords(flat, pi, pjj, si);
        std::array<double, 2> p{
            odelta.lo[0] + (odelta.hi[0] - odelta.lo[0]) * pi / std::max(1, p_count - 1), 0.0};
        if (problem.dim() == 2)
            p[1] = odelta.lo[1] + (odelta.hi[1] - odelta.lo[1]) * pjj / std::max(1, p_count - 1);
        const double s = s_count == 1 ? 0.0 : -1.0 + 2.0 * si / (s_count - 1);
        PathPoint pt = path_point_impl(p, s, problem, s0, theta1);
        Cell& c = cells[flat];
        c.row.p = pt.p;
        c.row.s = s;
        c.row.gamma = pt.gamma;
        c.row.poho_v0 = pt.poho_v0;
        c.row.eps_ups = pt.eps_ups;
        c.row.bary_degenerate = pt.bary_degenerate;
        c.row.boundary = pi == 0 || pi == p_count - 1 || si == 0 || si == s_count - 1 ||
                         (problem.dim() == 2 && (pjj == 0 || pjj == p_count - 1));
        c.ok = true;
    });

    PathLevel out;
    out.used_theta1 = theta1;
    out.c_eps = -std::numeric_limits<double>::infinity();
    out.boundary_max = -std::numeric_limits<double>::infinity();
    std::size_t best = 0;
    for (std::size_t i = 0; i < total; ++i) {
        const Cell& c = cells[i];
        out.table.push_back(c.row);
        if (c.row.gamma > out.c_eps) {
            out.c_eps = c.row.gamma;
            best = i;
        }
        if (c.row.boundary) out.boundary_max = std::max(out.boundary_max, c.row.gamma);
        if (!c.row.bary_degenerate) {
            const double off =
                std::hypot(c.row.p[0] - c.row.eps_ups[0],
                           problem.dim() == 2 ? c.row.p[1] - c.row.eps_ups[1] : 0.0);
            out.max_center_offset = std::max(out.max_center_offset, off);
        }
        int pi, pjj, si;
        coords(i, pi, pjj, si);
        if (si == 0 && !(c.row.poho_v0 > 0.0)) out.endpoint_signs_ok = false;
        if (si == s_count - 1 && !(c.row.poho_v0 < 0.0)) out.endpoint_signs_ok = false;
    }
    out.margin = out.c_eps - out.boundary_max;

    int pi, pjj, si;
    coords(best, pi, pjj, si);
    std::array<double, 2> p{
        odelta.lo[0] + (odelta.hi[0] - odelta.lo[0]) * pi / std::max(1, p_count - 1), 0.0};
    if (problem.dim() == 2)
        p[1] = odelta.lo[1] + (odelta.hi[1] - odelta.lo[1]) * pjj / std::max(1, p_count - 1);
    const double s = s_count == 1 ? 0.0 : -1.0 + 2.0 * si / (s_count - 1);
    out.argmax = path_point_impl(p, s, problem, s0, theta1);
    return out;
}

}  // namespace

PathLevel path_level(const Problem& problem, const GroundStateSet& s0, int p_count, int s_count,
                     int jobs) {
    if (p_count < 1 || s_count < 1) throw ConfigError("path_level: sample counts must be positive");
    PathLevel pl = path_level_once(problem, s0, p_count, s_count, problem.params.theta1, jobs);
    if (!pl.endpoint_signs_ok && s_count > 1) {
        // halve the amplitude rate once if the endpoint orientation failed
        pl = path_level_once(problem, s0, p_count, s_count, 0.5 * problem.params.theta1, jobs);
    }
    return pl;
}

std::vector<double> degree_map(std::array<double, 2> p, double s, const Problem& problem,
                               const GroundStateSet& s0, int flow_budget) {
    PathPoint pt = initial_path(p, s, problem, s0);
    Field u = std::move(pt.field);
    if (flow_budget > 0) {
        FlowStepper stepper(std::move(u), problem);
        for (int i = 0; i < flow_budget; ++i) {
            if (stepper.step() != FlowStepper::Outcome::accepted) break;
        }
        u = stepper.state().u;
    }
    const BarycenterReport bary = barycenter(u, problem.params);
    const auto x0 = problem.potential.x_max();
    std::vector<double> out;
    for (int a = 0; a < problem.dim(); ++a) {
        const double first = bary.degenerate ? p[a] : problem.params.eps * bary.upsilon[a];
        out.push_back(first - x0[a]);
    }
    out.push_back(pohozaev_P(u, s0.v0, problem.dim(), problem));
    return out;
}

int winding_degree(const std::vector<std::array<double, 2>>& loop) {
    if (loop.size() < 3) throw ConfigError("winding_degree: need at least 3 loop samples");
    double total = 0.0;
    for (std::size_t i = 0; i < loop.size(); ++i) {
        const auto& a = loop[i];
        const auto& b = loop[(i + 1) % loop.size()];
        const double na = std::hypot(a[0], a[1]);
        const double nb = std::hypot(b[0], b[1]);
        if (na < 1e-14 || nb < 1e-14)
            throw SolverError("winding_degree: loop sample at the origin");
        const double cross = a[0] * b[1] - a[1] * b[0];
        const double dot = a[0] * b[0] + a[1] * b[1];
        const double dphi = std::atan2(cross, dot);
        if (std::abs(dphi) > M_PI / 2.0)
            throw SolverError("winding_degree: angle jump exceeds pi/2; refine the loop sampling");
        total += dphi;
    }
    const double turns = total / (2.0 * M_PI);
    const long long k = std::llround(turns);
    if (std::abs(turns - static_cast<double>(k)) > 1e-6)
        throw SolverError("winding_degree: accumulated angle is not a whole number of turns");
    return static_cast<int>(k);
}

std::vector<std::array<double, 2>> degree_boundary_loop(const Problem& problem,
                                                        const GroundStateSet& s0, int samples,
                                                        int flow_budget, int jobs) {
    if (problem.dim() != 1)
        throw ConfigError("degree_boundary_loop: the winding map is defined for d=1 runs");
    const Params& pp = problem.params;
    const double a = pp.o_region.lo[0] - pp.delta0;
    const double b = pp.o_region.hi[0] + pp.delta0;
    const double plen = b - a;
    const double perimeter = 2.0 * plen + 4.0;
    const int np = std::max(8, static_cast<int>(std::lround(samples * plen / perimeter)));
    const int ns = std::max(8, (samples - 2 * np) / 2);

    std::vector<std::pair<double, double>> ps;  // (p, s) along the positively traversed boundary
    for (int i = 0; i < np; ++i) ps.push_back({a + plen * i / np, -1.0});
    for (int i = 0; i < ns; ++i) ps.push_back({b, -1.0 + 2.0 * i / ns});
    for (int i = 0; i < np; ++i) ps.push_back({b - plen * i / np, 1.0});
    for (int i = 0; i < ns; ++i) ps.push_back({a, 1.0 - 2.0 * i / ns});

    std::vector<std::array<double, 2>> loop(ps.size());
    parallel_for(ps.size(), jobs, [&](std::size_t i) {
        const auto v = degree_map({ps[i].first, 0.0}, ps[i].second, problem, s0, flow_budget);
        loop[i] = {v[0], v[1]};
    });
    return loop;
}

bool box_adequate(const Problem& problem, const GroundStateSet& s0, std::string* why) {
    const Params& pp = problem.params;
    const BoxRegion odelta = pp.o_region.expanded(pp.delta0);
    double pmax = 0.0;
    for (int a = 0; a < problem.dim(); ++a) {
        pmax = std::max(pmax, std::abs(odelta.lo[a] / pp.eps - problem.grid->offset()[a]));
        pmax = std::max(pmax, std::abs(odelta.hi[a] / pp.eps - problem.grid->offset()[a]));
    }
    const double need =
        pmax + std::min(s0.support_max, pp.delta0 / pp.eps) + 2.0 * pp.r0;
    const bool ok = problem.grid->halfwidth() >= need;
    if (!ok && why) {
        std::ostringstream ss;
        ss << "rescaled box halfwidth " << problem.grid->halfwidth() << " < required " << need
           << " (path translates plus member support)";
        *why = ss.str();
    }
    return ok;
}

SolveResult solve(const Problem& problem, const GroundStateSet& s0, const MinmaxOptions& opts) {
    std::string why;
    if (!box_adequate(problem, s0, &why)) throw SolverError("solve: box inadequate: " + why);

    SolveResult res;
    res.path = path_level(problem, s0, opts.p_count, opts.s_count, opts.jobs);

    FlowOptions fopts = FlowOptions::from(problem.params);
    res.trace = descend(res.path.argmax.field, problem, s0, fopts);

    SolveRecord& rec = res.record;
    rec.eps = problem.params.eps;
    rec.dimension = problem.dim();
    rec.stop_tol = fopts.stop_tol;
    rec.c_eps = res.path.c_eps;
    rec.boundary_margin = res.path.margin;
    rec.argmax_p = res.path.argmax.p;
    rec.argmax_s = res.path.argmax.s;
    rec.iters = res.trace.iters;
    rec.termination = to_string(res.trace.reason);
    rec.start_in_working_set = res.trace.start_in_working_set;
    rec.in_confined_zset = res.trace.end_in_confined_set;

    if (res.trace.reason != FlowTermination::converged)
        throw SolverError("solve: descent did not converge (" + rec.termination + ") at eps = " +
                          std::to_string(rec.eps));

    const Field& u = res.trace.final;
    const PenaltyParts parts = penalty_parts(u, problem);
    rec.phi = parts.value;
    rec.chi_mass_scaled = parts.chi_mass / std::sqrt(problem.params.eps);
    if (rec.phi != 0.0)
        throw SolverError("solve: tail penalty positive at the converged state");
    rec.dual = res.trace.final_dual;
    if (!(rec.dual < fopts.stop_tol))
        throw SolverError("solve: converged state misses the residual tolerance");

    rec.gamma = energy_J(u, problem) + rec.phi;
    rec.x_eps = {problem.params.eps * parts.bary.upsilon[0],
                 problem.params.eps * parts.bary.upsilon[1]};
    const auto x0 = problem.potential.x_max();
    rec.dist_vmax = std::hypot(rec.x_eps[0] - x0[0],
                               problem.dim() == 2 ? rec.x_eps[1] - x0[1] : 0.0);

    const ManifoldFit fit = manifold_distance(u, s0, problem);
    rec.manifold_dist = fit.dist;
    rec.manifold_member = fit.member;

    const double m_here = problem.potential.value(rec.x_eps);
    const double kin = 0.5 * grad_energy_sq(u);
    rec.poho_rel =
        std::abs(pohozaev_P(u, m_here, problem.dim(), problem)) / std::max(kin, 1e-12);

    const DecayReport decay =
        tail_profile(u, problem, opts.decay_fit_lo, opts.decay_fit_hi, opts.decay_r_step);
    rec.decay_rate = decay.rate;
    rec.decay_log_c = decay.log_c;
    rec.decay_fit_r2 = decay.r2;
    return res;
}

}  // namespace snls
