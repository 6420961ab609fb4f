#include "snls/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

namespace snls {

DecayReport tail_profile(const Field& u, const Problem& problem, double fit_lo, double fit_hi,
                         double r_step) {
    const BarycenterReport bary = barycenter(u, problem.params);
    if (bary.degenerate) throw SolverError("tail_profile: degenerate barycenter");
    const Grid& g = *u.grid;

    // central-difference energy density per node
    std::vector<double> density(u.size(), 0.0);
    const double inv2h = 1.0 / (2.0 * g.spacing());
    const int n = g.n();
    if (g.dim() == 1) {
        for (int i = 1; i < n - 1; ++i) {
            const std::size_t k = static_cast<std::size_t>(i);
            const double d = (u.v[k + 1] - u.v[k - 1]) * inv2h;
            density[k] = d * d + u.v[k] * u.v[k];
        }
    } else {
        for (int i = 1; i < n - 1; ++i) {
            for (int j = 1; j < n - 1; ++j) {
                const std::size_t k = g.index(i, j);
                const double dx = (u.v[g.index(i + 1, j)] - u.v[g.index(i - 1, j)]) * inv2h;
                const double dy = (u.v[k + 1] - u.v[k - 1]) * inv2h;
                density[k] = dx * dx + dy * dy + u.v[k] * u.v[k];
            }
        }
    }

    double max_r = std::numeric_limits<double>::infinity();
    for (int a = 0; a < g.dim(); ++a) {
        max_r = std::min(max_r, g.halfwidth() - std::abs(bary.upsilon[a] - g.offset()[a]));
    }
    max_r *= 0.95;

    DecayReport rep;
    rep.window_lo = fit_lo;
    rep.window_hi = fit_hi;
    for (double r = r_step; r <= max_r; r += r_step) rep.radii.push_back(r);
    if (rep.radii.empty() || fit_hi > max_r)
        throw VerifyError("tail_profile: fit window extends beyond the box");

    rep.q.assign(rep.radii.size(), 0.0);
    const double hd = g.cell_volume();
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (density[k] == 0.0) continue;
        const auto x = g.point(k);
        const double dx = x[0] - bary.upsilon[0];
        const double dy = g.dim() == 2 ? x[1] - bary.upsilon[1] : 0.0;
        const double dist = std::sqrt(dx * dx + dy * dy);
        // contributes to every Q(R) with R < dist
        const auto hi = static_cast<std::size_t>(
            std::min<double>(static_cast<double>(rep.radii.size()),
                             std::max(0.0, std::ceil(dist / r_step) - 1.0)));
        for (std::size_t ri = 0; ri < hi; ++ri) rep.q[ri] += density[k] * hd;
    }

    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    int count = 0;
    for (std::size_t i = 0; i < rep.radii.size(); ++i) {
        const double r = rep.radii[i];
        if (r < fit_lo || r > fit_hi || rep.q[i] <= 0.0) continue;
        const double y = std::log(rep.q[i]);
        sx += r;
        sy += y;
        sxx += r * r;
        sxy += r * y;
        syy += y * y;
        ++count;
    }
    if (count < 3) throw VerifyError("tail_profile: fit window holds fewer than 3 usable points");
    const double det = count * sxx - sx * sx;
    const double slope = (count * sxy - sx * sy) / det;
    rep.log_c = (sy - slope * sx) / count;
    rep.rate = -slope;
    const double ss_tot = syy - sy * sy / count;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < rep.radii.size(); ++i) {
        const double r = rep.radii[i];
        if (r < fit_lo || r > fit_hi || rep.q[i] <= 0.0) continue;
        const double e = std::log(rep.q[i]) - (rep.log_c + slope * r);
        ss_res += e * e;
    }
    rep.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return rep;
}

RecursionCheck decay_recursion_check(const std::vector<double>& q, double theta, double b,
                                     double r1) {
    if (!(theta > 1.0)) throw ConfigError("decay_recursion_check: theta must exceed 1");
    if (!(b >= 0.0)) throw ConfigError("decay_recursion_check: b must be non-negative");
    if (q.size() < 2) throw ConfigError("decay_recursion_check: need at least two samples");
    RecursionCheck out;
    out.limit_bound = theta * b / (theta - 1.0);
    for (std::size_t i = 1; i < q.size(); ++i) {
        const bool monotone = q[i] <= q[i - 1] * (1.0 + 1e-12);
        const bool recursion = q[i] <= q[i - 1] / theta + b + 1e-12 * std::abs(q[i - 1]);
        if (!monotone || !recursion) {
            out.hypothesis_violation_step = static_cast<int>(i);
            return out;
        }
    }
    out.conclusion_ok = true;
    for (std::size_t i = 1; i < q.size(); ++i) {
        // theta^{r1+1} Q(r1) e^{-R ln theta} with R = r1 + i collapses to theta^{1-i} Q(r1)
        const double bound = std::pow(theta, 1.0 - static_cast<double>(i)) * q[0] + out.limit_bound;
        (void)r1;
        if (q[i] > bound * (1.0 + 1e-12) + 1e-300) {
            out.conclusion_ok = false;
            break;
        }
    }
    return out;
}

DirectionalReport directional_derivative_test(std::array<double, 2> z, const Problem& problem,
                                              const GroundState* reuse) {
    DirectionalReport rep;
    rep.z = z;
    rep.eps = problem.params.eps;
    const auto grad = problem.potential.gradient(z);
    const double grad_norm = std::hypot(grad[0], problem.dim() == 2 ? grad[1] : 0.0);
    if (grad_norm < 1e-8)
        throw ConfigError("directional_derivative_test: |grad V(z)| below floor");
    rep.grad_v1 = grad[0];
    rep.m = problem.potential.value(z);

    GroundState local;
    const GroundState* gs = reuse;
    if (!gs || std::abs(gs->m - rep.m) > 1e-10) {
        local = ground_state(rep.m, problem);
        gs = &local;
    }
    const std::array<double, 2> center{z[0] / rep.eps, problem.dim() == 2 ? z[1] / rep.eps : 0.0};
    const Field u = sampled_translate(gs->radial, center, 1.0, 1.0, problem, false);

    // d1 u by central differences
    Field d1(u.grid);
    const Grid& g = *u.grid;
    const double inv2h = 1.0 / (2.0 * g.spacing());
    const int n = g.n();
    if (g.dim() == 1) {
        for (int i = 1; i < n - 1; ++i)
            d1.v[static_cast<std::size_t>(i)] =
                (u.v[static_cast<std::size_t>(i + 1)] - u.v[static_cast<std::size_t>(i - 1)]) *
                inv2h;
    } else {
        for (int i = 1; i < n - 1; ++i)
            for (int j = 1; j < n - 1; ++j)
                d1.v[g.index(i, j)] = (u.v[g.index(i + 1, j)] - u.v[g.index(i - 1, j)]) * inv2h;
    }

    const Field r = residual(u, problem);
    rep.measured = inner_l2(r, d1);
    rep.predicted = -0.5 * rep.eps * rep.grad_v1 * l2_norm_sq(u);
    rep.ratio = rep.measured / rep.predicted;
    rep.upper_bound = dual_norm(r, problem) * energy_norm(problem, d1);
    rep.bound_ok = std::abs(rep.measured) <= rep.upper_bound * (1.0 + 1e-6) + 1e-12;

    // auxiliary regularized state: (-Lap + V_eps) w = f(u); the gap to u is
    // reported, not asserted
    Field rhs(u.grid);
    for (std::size_t k = 0; k < u.size(); ++k)
        if (!u.grid->is_boundary(k)) rhs.v[k] = problem.f.f(u.v[k]);
    Field w(u.grid);
    pcg_solve(problem, rhs.v, w.v, problem.params.solver.linear_tol,
              problem.params.solver.linear_max_iters);
    rep.aux_gap = energy_dist(problem, u, w);
    return rep;
}

namespace {

struct Candidate {
    Field u;
    std::string label;
};

/// |<r, d1 u>| / ||d1 u||_eps, the translation-direction lower bound that
/// every dual norm must dominate.
double directional_lower_bound(const Field& u, const Field& r, const Problem& problem) {
    const Grid& g = *u.grid;
    Field d1(u.grid);
    const double inv2h = 1.0 / (2.0 * g.spacing());
    const int n = g.n();
    if (g.dim() == 1) {
        for (int i = 1; i < n - 1; ++i)
            d1.v[static_cast<std::size_t>(i)] =
                (u.v[static_cast<std::size_t>(i + 1)] - u.v[static_cast<std::size_t>(i - 1)]) *
                inv2h;
    } else {
        for (int i = 1; i < n - 1; ++i)
            for (int j = 1; j < n - 1; ++j)
                d1.v[g.index(i, j)] = (u.v[g.index(i + 1, j)] - u.v[g.index(i - 1, j)]) * inv2h;
    }
    const double dn = energy_norm(problem, d1);
    return dn > 0.0 ? std::abs(inner_l2(r, d1)) / dn : 0.0;
}

FloorPoint measure_min(const Problem& problem, const GroundStateSet& s0,
                       std::vector<Candidate> candidates, const std::string& regime) {
    if (candidates.empty()) throw ConfigError("gradient floor: empty ensemble");
    FloorPoint out;
    out.eps = problem.params.eps;
    out.regime = regime;
    out.min_dual = std::numeric_limits<double>::infinity();
    std::size_t best = 0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const Field r = residual(candidates[i].u, problem);
        const double d = dual_norm(r, problem);
        const double lower = directional_lower_bound(candidates[i].u, r, problem);
        if (!(d >= lower * (1.0 - 1e-6) - 1e-12))
            throw VerifyError("gradient floor: dual norm " + std::to_string(d) +
                              " undercuts the duality bound " + std::to_string(lower));
        if (d < out.min_dual) {
            out.min_dual = d;
            best = i;
        }
    }
    out.witness = candidates[best].label;
    out.witness_manifold_dist = manifold_distance(candidates[best].u, s0, problem).dist;
    out.witness_in_zset =
        zset_membership(candidates[best].u, problem.params.rho0, 3.0 * problem.params.delta0, s0,
                        problem);
    return out;
}

std::string fmt(double x) {
    std::ostringstream ss;
    ss.precision(6);
    ss << x;
    return ss.str();
}

GroundState& cached_ground_state(double m, const Problem& problem,
                                 std::map<long long, GroundState>& cache) {
    const long long key = std::llround(m * 1e9);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, ground_state(m, problem)).first;
    return it->second;
}

}  // namespace

FloorPoint floor_displaced(const Problem& problem, const GroundStateSet& s0,
                           const FloorOptions& opts) {
    const Params& pp = problem.params;
    const double eps = pp.eps;
    const double v0 = s0.v0;
    std::map<long long, GroundState> cache;
    std::vector<Candidate> cands;
    for (int side = 0; side < 2; ++side) {
        const double edge = side == 0 ? pp.o_region.hi[0] : pp.o_region.lo[0];
        const double sign = side == 0 ? 1.0 : -1.0;
        for (int j = 0; j < opts.z_count; ++j) {
            const double dist =
                pp.delta0 * (1.05 + 1.8 * static_cast<double>(j) / std::max(1, opts.z_count - 1));
            const std::array<double, 2> z{edge + sign * dist, 0.0};
            const double m =
                std::clamp(problem.potential.value(z), v0 - s0.delta0, v0);
            const GroundState& gs = cached_ground_state(m, problem, cache);
            const std::array<double, 2> center{z[0] / eps, 0.0};
            cands.push_back({sampled_translate(gs.radial, center, 1.0, 1.0, problem, false),
                             "z=" + fmt(z[0]) + ",m=" + fmt(m)});
        }
    }
    return measure_min(problem, s0, std::move(cands), "displaced");
}

FloorPoint floor_annulus(const Problem& problem, const GroundStateSet& s0,
                         const FloorOptions& opts) {
    const Params& pp = problem.params;
    const double eps = pp.eps;
    const auto x0 = problem.potential.x_max();
    const std::array<double, 2> center{x0[0] / eps, problem.dim() == 2 ? x0[1] / eps : 0.0};
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);

    const S0Member& ref = s0.reference_member();
    Field base_plain = sampled_translate(ref.gs.radial, center, 1.0, 1.0, problem, false);
    if (problem.dim() == 1 && std::abs(center[0] - problem.grid->offset()[0]) < 1e-9) {
        // polish to the discrete critical point of the full eps-problem so the
        // measured floor isolates the distance-rho response
        newton_refine_full(base_plain, problem);
    }
    const Field base_cut = member_field(ref, center, problem);

    // translation and amplitude tangents, removed from the perturbations
    Field t_translate(problem.grid);
    {
        const Grid& g = *problem.grid;
        const double inv2h = 1.0 / (2.0 * g.spacing());
        const int n = g.n();
        if (g.dim() == 1) {
            for (int i = 1; i < n - 1; ++i)
                t_translate.v[static_cast<std::size_t>(i)] =
                    (base_plain.v[static_cast<std::size_t>(i + 1)] -
                     base_plain.v[static_cast<std::size_t>(i - 1)]) *
                    inv2h;
        } else {
            for (int i = 1; i < n - 1; ++i)
                for (int j = 1; j < n - 1; ++j)
                    t_translate.v[g.index(i, j)] =
                        (base_plain.v[g.index(i + 1, j)] - base_plain.v[g.index(i - 1, j)]) * inv2h;
        }
    }

    std::vector<Candidate> cands;
    for (double frac : opts.rho_fracs) {
        for (int rep = 0; rep < opts.directions_per_rho; ++rep) {
            const double b1 = 2.5 * unif(rng);
            const double q = 1.2 + 0.8 * unif(rng);
            const double ph = 3.1 * unif(rng);
            Field w = Field::sample(problem.grid, [&](std::array<double, 2> x) {
                const double dx = x[0] - center[0];
                const double dy = problem.dim() == 2 ? x[1] - center[1] : 0.0;
                const double r2 = dx * dx + dy * dy;
                if (r2 > 36.0) return 0.0;
                return std::sin(q * dx + ph) * std::exp(-(dx - b1) * (dx - b1) / 5.0 - dy * dy / 5.0);
            });
            // project out the near-tangent directions in the energy product
            const Field* tangents[] = {&t_translate, &base_plain};
            for (const Field* t : tangents) {
                const double tt = energy_inner(problem, *t, *t);
                if (tt <= 0.0) continue;
                const double wt = energy_inner(problem, w, *t) / tt;
                for (std::size_t k = 0; k < w.size(); ++k) w.v[k] -= wt * t->v[k];
            }
            const double wn = energy_norm(problem, w);
            if (wn == 0.0) continue;
            const double rho = frac * pp.rho0;
            const Field* bases[] = {&base_plain, &base_cut};
            for (const Field* base : bases) {
                Field u = *base;
                for (std::size_t k = 0; k < u.size(); ++k) u.v[k] += rho / wn * w.v[k];
                cands.push_back({std::move(u), std::string(base == &base_plain ? "plain" : "cut") +
                                                   ",rho=" + fmt(rho) + ",dir=" +
                                                   std::to_string(rep)});
            }
        }
    }
    return measure_min(problem, s0, std::move(cands), "annulus");
}

FloorPoint floor_optimal(const Problem& problem, const GroundStateSet& s0,
                         const FloorOptions& opts) {
    (void)opts;
    const Params& pp = problem.params;
    const double eps = pp.eps;
    std::map<long long, GroundState> cache;
    std::vector<Candidate> cands;
    for (int j = 0; j < 5; ++j) {
        const double t = -0.8 + 1.6 * j / 4.0;
        const double z1 = 0.5 * (pp.o_region.lo[0] + pp.o_region.hi[0]) +
                          0.5 * t * (pp.o_region.hi[0] - pp.o_region.lo[0]);
        const std::array<double, 2> z{z1, 0.0};
        const double m = std::clamp(problem.potential.value(z), s0.v0 - s0.delta0, s0.v0);
        const GroundState& gs = cached_ground_state(m, problem, cache);
        cands.push_back({sampled_translate(gs.radial, {z1 / eps, 0.0}, 1.0, 1.0, problem, false),
                         "z=" + fmt(z1) + ",m=" + fmt(m)});
    }
    return measure_min(problem, s0, std::move(cands), "optimal");
}

std::vector<FloorPoint> gradient_floor_experiment(const std::vector<double>& eps_list,
                                                  const ProblemFactory& make_problem,
                                                  const S0Factory& make_s0,
                                                  const FloorOptions& opts) {
    if (eps_list.empty()) throw ConfigError("gradient floor: empty eps list");
    std::vector<FloorPoint> rows;
    for (double eps : eps_list) {
        Problem problem = make_problem(eps);
        const GroundStateSet s0 = make_s0(problem);
        s0.apply_constants(problem.params);
        rows.push_back(floor_displaced(problem, s0, opts));
        rows.push_back(floor_annulus(problem, s0, opts));
        rows.push_back(floor_optimal(problem, s0, opts));
    }
    return rows;
}

ConvergenceReport convergence_diagnostics(const Field& u, const Problem& problem,
                                          const GroundStateSet& s0) {
    ConvergenceReport rep;
    const ManifoldFit fit = manifold_distance(u, s0, problem);
    rep.dist = fit.dist;
    rep.matched_m = fit.member >= 0 ? s0.members[static_cast<std::size_t>(fit.member)].gs.m : 0.0;
    rep.shift = fit.shift;
    const BarycenterReport bary = barycenter(u, problem.params);
    if (!bary.degenerate) {
        rep.shift_vs_upsilon = std::hypot(fit.shift[0] - bary.upsilon[0],
                                          problem.dim() == 2 ? fit.shift[1] - bary.upsilon[1] : 0.0);
        rep.within_2r0 = rep.shift_vs_upsilon <= 2.0 * problem.params.r0;
    }
    return rep;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const auto n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace snls
