#include "snls/limit.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "json.hpp"
#include "snls/barycenter.hpp"

namespace snls {

namespace {

struct OdeState {
    double r, u, w;
};

/// Radial limit ODE: u'' + (d-1)/r u' = m u - f(u).
struct RadialRhs {
    double m;
    const Nonlinearity* f;
    int dim;

    void operator()(double r, double u, double w, double& du, double& dw) const {
        du = w;
        dw = m * u - f->f(u);
        if (dim == 2 && r > 0.0) dw -= w / r;
    }
};

/// One Cash-Karp RK45 step; returns the embedded error estimate.
void ck_step(const RadialRhs& rhs, const OdeState& y, double h, OdeState& out, double err[2]) {
    static constexpr double a2 = 0.2, a3 = 0.3, a4 = 0.6, a5 = 1.0, a6 = 0.875;
    static constexpr double b21 = 0.2;
    static constexpr double b31 = 3.0 / 40.0, b32 = 9.0 / 40.0;
    static constexpr double b41 = 0.3, b42 = -0.9, b43 = 1.2;
    static constexpr double b51 = -11.0 / 54.0, b52 = 2.5, b53 = -70.0 / 27.0, b54 = 35.0 / 27.0;
    static constexpr double b61 = 1631.0 / 55296.0, b62 = 175.0 / 512.0, b63 = 575.0 / 13824.0,
                            b64 = 44275.0 / 110592.0, b65 = 253.0 / 4096.0;
    static constexpr double c1 = 37.0 / 378.0, c3 = 250.0 / 621.0, c4 = 125.0 / 594.0,
                            c6 = 512.0 / 1771.0;
    static constexpr double d1 = 2825.0 / 27648.0, d3 = 18575.0 / 48384.0, d4 = 13525.0 / 55296.0,
                            d5 = 277.0 / 14336.0, d6 = 0.25;

    double k1u, k1w, k2u, k2w, k3u, k3w, k4u, k4w, k5u, k5w, k6u, k6w;
    rhs(y.r, y.u, y.w, k1u, k1w);
    rhs(y.r + a2 * h, y.u + h * b21 * k1u, y.w + h * b21 * k1w, k2u, k2w);
    rhs(y.r + a3 * h, y.u + h * (b31 * k1u + b32 * k2u), y.w + h * (b31 * k1w + b32 * k2w), k3u, k3w);
    rhs(y.r + a4 * h, y.u + h * (b41 * k1u + b42 * k2u + b43 * k3u),
        y.w + h * (b41 * k1w + b42 * k2w + b43 * k3w), k4u, k4w);
    rhs(y.r + a5 * h, y.u + h * (b51 * k1u + b52 * k2u + b53 * k3u + b54 * k4u),
        y.w + h * (b51 * k1w + b52 * k2w + b53 * k3w + b54 * k4w), k5u, k5w);
    rhs(y.r + a6 * h, y.u + h * (b61 * k1u + b62 * k2u + b63 * k3u + b64 * k4u + b65 * k5u),
        y.w + h * (b61 * k1w + b62 * k2w + b63 * k3w + b64 * k4w + b65 * k5w), k6u, k6w);

    out.r = y.r + h;
    out.u = y.u + h * (c1 * k1u + c3 * k3u + c4 * k4u + c6 * k6u);
    out.w = y.w + h * (c1 * k1w + c3 * k3w + c4 * k4w + c6 * k6w);
    const double u4 = y.u + h * (d1 * k1u + d3 * k3u + d4 * k4u + d5 * k5u + d6 * k6u);
    const double w4 = y.w + h * (d1 * k1w + d3 * k3w + d4 * k4w + d5 * k5w + d6 * k6w);
    err[0] = out.u - u4;
    err[1] = out.w - w4;
}

OdeState series_start(const RadialRhs& rhs, double a, double r0) {
    // u(r) = a + (m a - f(a)) r^2 / (2 d) + O(r^4)
    const double c = (rhs.m * a - rhs.f->f(a)) / (2.0 * rhs.dim);
    return {r0, a + c * r0 * r0, 2.0 * c * r0};
}

enum class Shot { Overshoot, Undershoot };

Shot classify_shot(const RadialRhs& rhs, double a, double r_end) {
    OdeState y = rhs.dim == 2 ? series_start(rhs, a, 1e-4) : OdeState{0.0, a, 0.0};
    const double atol = 1e-13 * a, rtol = 1e-11;
    double h = 1e-3;
    bool armed = false;
    while (y.r < r_end) {
        h = std::min(h, r_end - y.r);
        OdeState ynew;
        double err[2];
        ck_step(rhs, y, h, ynew, err);
        const double e = std::max(std::abs(err[0]) / (atol + rtol * std::abs(ynew.u)),
                                  std::abs(err[1]) / (atol + rtol * std::abs(ynew.w)));
        if (e > 1.0) {
            h *= std::max(0.2, 0.9 * std::pow(e, -0.25));
            continue;
        }
        y = ynew;
        if (e > 1e-30) h *= std::min(5.0, 0.9 * std::pow(e, -0.2));
        if (y.u < 0.0) return Shot::Overshoot;
        if (y.u > 2.0 * a) return Shot::Undershoot;
        if (y.u < 0.995 * a) armed = true;
        if (armed && y.w > 0.0) return Shot::Undershoot;
    }
    return y.u > 0.0 ? Shot::Undershoot : Shot::Overshoot;
}

RadialProfile integrate_profile(const RadialRhs& rhs, double a, double r_end, double dr) {
    RadialProfile prof;
    prof.dr = dr;
    prof.dim = rhs.dim;
    prof.tail_rate = std::sqrt(rhs.m);
    prof.u.push_back(a);

    OdeState y = rhs.dim == 2 ? series_start(rhs, a, dr) : OdeState{0.0, a, 0.0};
    if (rhs.dim == 2) prof.u.push_back(y.u);
    const double floor = 1e-9 * a;
    while (y.r < r_end) {
        // fixed-step classic RK4 at the table resolution
        double k1u, k1w, k2u, k2w, k3u, k3w, k4u, k4w;
        rhs(y.r, y.u, y.w, k1u, k1w);
        rhs(y.r + dr / 2, y.u + dr / 2 * k1u, y.w + dr / 2 * k1w, k2u, k2w);
        rhs(y.r + dr / 2, y.u + dr / 2 * k2u, y.w + dr / 2 * k2w, k3u, k3w);
        rhs(y.r + dr, y.u + dr * k3u, y.w + dr * k3w, k4u, k4w);
        y.u += dr / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        y.w += dr / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
        y.r += dr;
        const bool armed = y.u < 0.9 * a;
        if (y.u <= floor || (armed && y.w >= 0.0)) break;
        prof.u.push_back(y.u);
    }
    return prof;
}

double fit_log_slope(const RadialProfile& prof, double r_lo, double r_hi) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (std::size_t i = 0; i < prof.u.size(); ++i) {
        const double r = prof.dr * static_cast<double>(i);
        if (r < r_lo || r > r_hi || prof.u[i] <= 0.0) continue;
        const double y = std::log(prof.u[i]);
        sx += r;
        sy += y;
        sxx += r * r;
        sxy += r * y;
        ++count;
    }
    if (count < 4) return 0.0;
    return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

}  // namespace

double RadialProfile::support_radius(double floor) const {
    const double cutoff = floor * amplitude();
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] < cutoff) return dr * static_cast<double>(i);
    }
    return rmax() + std::log(std::max(u.back() / cutoff, 1.0)) / tail_rate;
}

double RadialProfile::tail_mass(double R) const {
    // radial measure: 2 dr (d=1), 2 pi r dr (d=2); analytic tail past the table
    double s = 0.0;
    const std::size_t i0 = std::min(u.size() - 1, static_cast<std::size_t>(std::max(0.0, R / dr)));
    for (std::size_t i = i0; i + 1 < u.size(); ++i) {
        const double r = dr * static_cast<double>(i);
        const double f0 = u[i] * u[i] * (dim == 2 ? 2.0 * M_PI * r : 2.0);
        const double f1 = u[i + 1] * u[i + 1] * (dim == 2 ? 2.0 * M_PI * (r + dr) : 2.0);
        s += 0.5 * (f0 + f1) * dr;
    }
    const double ue = u.back(), re = rmax(), c2 = 2.0 * tail_rate;
    s += dim == 2 ? 2.0 * M_PI * ue * ue * (re / c2 + 1.0 / (c2 * c2))
                  : 2.0 * ue * ue / c2;
    return s;
}

double RadialProfile::ball_mass(double R) const {
    double s = 0.0;
    const std::size_t i1 = std::min(u.size() - 1, static_cast<std::size_t>(R / dr));
    for (std::size_t i = 0; i + 1 <= i1; ++i) {
        const double r = dr * static_cast<double>(i);
        const double f0 = u[i] * u[i] * (dim == 2 ? 2.0 * M_PI * r : 2.0);
        const double f1 = u[i + 1] * u[i + 1] * (dim == 2 ? 2.0 * M_PI * (r + dr) : 2.0);
        s += 0.5 * (f0 + f1) * dr;
    }
    return s;
}

namespace {

/// Half-line even-symmetric Newton for -Lap u + w(x) u = f(u) with the node
/// weights supplied per node (either the constant m or V(eps x)).
double newton_refine_weighted(Field& u, const std::vector<double>& weight,
                              const Problem& problem, int max_iters);

}  // namespace

double newton_refine(Field& u, double m, const Problem& problem, int max_iters) {
    if (problem.dim() != 1) throw SolverError("newton_refine: implemented for d=1 grids");
    std::vector<double> weight(u.size(), m);
    return newton_refine_weighted(u, weight, problem, max_iters);
}

double newton_refine_full(Field& u, const Problem& problem, int max_iters) {
    if (problem.dim() != 1) throw SolverError("newton_refine_full: implemented for d=1 grids");
    return newton_refine_weighted(u, problem.veps, problem, max_iters);
}

namespace {

double newton_refine_weighted(Field& u, const std::vector<double>& weight,
                              const Problem& problem, int max_iters) {
    // The discrete soliton family is translation-degenerate to near machine
    // precision, so a full-line Newton solve wanders along it. The input is
    // even about the center node; solve the half-line reduction (reflection
    // row at the center) and mirror, which pins the translation mode.
    const Grid& g = *u.grid;
    const int n = g.n();
    const int ic = (n - 1) / 2;
    const int H = ic;  // unknowns j = 0..H-1 at nodes ic..n-2; node n-1 is 0
    const double invh2 = 1.0 / (g.spacing() * g.spacing());
    std::vector<double> diag(static_cast<std::size_t>(H)), rhs(static_cast<std::size_t>(H)),
        cp(static_cast<std::size_t>(H)), dp(static_cast<std::size_t>(H));
    auto at = [&](int j) -> double& { return u.v[static_cast<std::size_t>(ic + j)]; };
    auto wt = [&](int j) { return weight[static_cast<std::size_t>(ic + j)]; };
    double res = 0.0;
    for (int it = 0; it < max_iters; ++it) {
        res = 0.0;
        for (int j = 0; j < H; ++j) {
            const double left = j == 0 ? at(1) : at(j - 1);  // even reflection at the center
            const double right = j + 1 <= H ? (j + 1 == H ? 0.0 : at(j + 1)) : 0.0;
            rhs[static_cast<std::size_t>(j)] =
                (2.0 * at(j) - left - right) * invh2 + wt(j) * at(j) - problem.f.f(at(j));
            diag[static_cast<std::size_t>(j)] = 2.0 * invh2 + wt(j) - problem.f.df(at(j));
            res = std::max(res, std::abs(rhs[static_cast<std::size_t>(j)]));
        }
        if (res < 1e-13 * std::max(1.0, at(0))) break;
        // Thomas solve; the center row has superdiagonal -2/h^2
        const double off = -invh2;
        cp[0] = 2.0 * off / diag[0];
        dp[0] = rhs[0] / diag[0];
        for (int j = 1; j < H; ++j) {
            const std::size_t k = static_cast<std::size_t>(j);
            const double denom = diag[k] - off * cp[k - 1];
            cp[k] = off / denom;
            dp[k] = (rhs[k] - off * dp[k - 1]) / denom;
        }
        double delta_next = 0.0;
        for (int j = H - 1; j >= 0; --j) {
            const std::size_t k = static_cast<std::size_t>(j);
            const double delta = dp[k] - cp[k] * delta_next;
            at(j) -= delta;
            delta_next = delta;
        }
        for (int j = 1; j <= ic; ++j) u.v[static_cast<std::size_t>(ic - j)] = at(j);
    }
    for (int j = 1; j <= ic; ++j) u.v[static_cast<std::size_t>(ic - j)] = at(j);
    u.zero_boundary();
    return res;
}

}  // namespace

GroundState ground_state(double m, const Problem& problem) {
    const double v0 = problem.potential.v0();
    if (!(m > 0.0) || m > v0 + 1e-9)
        throw ConfigError("ground_state: mass coefficient must lie in (0, V0]");
    const double t0 = problem.params.t0;
    if (!(problem.f.F(t0) > 0.5 * m * t0 * t0))
        throw SolverError("ground_state: (F3) fails at m = " + std::to_string(m) +
                          " for the stored t0");

    RadialRhs rhs{m, &problem.f, problem.dim()};
    const double r_end = 20.0 / std::sqrt(m) + 20.0;

    // bracket: tiny amplitudes undershoot, hunt upward from t0 for an overshoot
    double lo = 1e-6;
    if (classify_shot(rhs, lo, r_end) == Shot::Overshoot)
        throw SolverError("ground_state: no undershoot at tiny amplitude, m = " + std::to_string(m));
    double hi = 0.0;
    for (double a = t0; a < 1e4 * t0; a *= 1.25) {
        const Shot s = classify_shot(rhs, a, r_end);
        if (s == Shot::Overshoot) {
            hi = a;
            break;
        }
        lo = a;
    }
    if (hi == 0.0)
        throw SolverError("ground_state: shooting bracket not found ((F3) failure or bad bounds)");

    while (hi - lo > 1e-13 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (classify_shot(rhs, mid, r_end) == Shot::Overshoot)
            hi = mid;
        else
            lo = mid;
    }

    GroundState gs;
    gs.m = m;
    gs.radial = integrate_profile(rhs, lo, r_end, 0.005);
    gs.amplitude = lo;

    const auto center = problem.grid->offset();
    gs.field = sampled_translate(gs.radial, center, 1.0, 1.0, problem, false);
    if (problem.dim() == 1) newton_refine(gs.field, m, problem);

    gs.level = limit_energy_L(gs.field, m, problem);
    gs.mass = l2_norm_sq(gs.field);
    const double kin = 0.5 * grad_energy_sq(gs.field);
    gs.poho_rel = std::abs(pohozaev_P(gs.field, m, problem.dim(), problem)) / std::max(kin, 1e-12);
    const double table_end = gs.radial.rmax();
    gs.decay_rate = -fit_log_slope(gs.radial, 0.45 * table_end, 0.85 * table_end);
    return gs;
}

std::vector<std::pair<double, double>> energy_curve(const std::vector<double>& ms,
                                                    const Problem& problem) {
    if (ms.empty()) throw ConfigError("energy_curve: empty m list");
    for (std::size_t i = 1; i < ms.size(); ++i) {
        if (!(ms[i] > ms[i - 1]))
            throw ConfigError("energy_curve: ms must be strictly increasing, offending pair (" +
                              std::to_string(ms[i - 1]) + ", " + std::to_string(ms[i]) + ")");
    }
    std::vector<std::pair<double, double>> out(ms.size());
    for (std::size_t i = 0; i < ms.size(); ++i) out[i] = {ms[i], ground_state(ms[i], problem).level};
    if (ms.size() > 1) {
        for (std::size_t i = 1; i < out.size(); ++i) {
            if (!(out[i].second > out[i - 1].second))
                throw VerifyError("energy_curve: E_m not increasing between m = " +
                                  std::to_string(ms[i - 1]) + " and m = " + std::to_string(ms[i]));
        }
    }
    return out;
}

DilationResult dilation_path(const GroundState& U0, double theta, double s,
                             const Problem& problem) {
    if (s < 0.0) throw ConfigError("dilation_path: amplitude must be non-negative");
    DilationResult out;
    const double support = std::exp(theta) * U0.radial.support_radius();
    out.support_clipped = support > problem.grid->halfwidth();
    out.field = sampled_translate(U0.radial, problem.grid->offset(), s, std::exp(-theta), problem,
                                  false);
    return out;
}

Field sampled_translate(const RadialProfile& profile, std::array<double, 2> center, double amp,
                        double scale, const Problem& problem, bool with_phi_cutoff) {
    const CutoffSpec cut = problem.params.cutoffs();
    const double eps = problem.params.eps;
    return Field::sample(problem.grid, [&](std::array<double, 2> x) {
        const double dx = x[0] - center[0];
        const double dy = problem.dim() == 2 ? x[1] - center[1] : 0.0;
        const double rz = scale * std::sqrt(dx * dx + dy * dy);
        double val = amp * profile.eval(rz);
        if (with_phi_cutoff) val *= cut.phi(eps * rz);
        return val;
    });
}

const S0Member& GroundStateSet::reference_member() const {
    const S0Member* best = nullptr;
    for (const auto& mem : members) {
        if (mem.is_dilation) continue;
        if (!best || mem.gs.m > best->gs.m) best = &mem;
    }
    if (!best) throw SolverError("ground-state set has no undilated member");
    return *best;
}

void GroundStateSet::apply_constants(Params& params) const {
    params.r0 = r0;
    params.rho1 = rho1;
    params.rho0 = rho0;
    params.rho2 = rho2;
    params.d1_bound = d1_bound;
}

namespace {

double estimate_d1_bound(const GroundStateSet& s0, const Problem& problem, std::uint64_t seed) {
    Problem prob = problem;
    s0.apply_constants(prob.params);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    const double L = prob.grid->halfwidth();
    double worst = 0.0;
    for (const auto& mem : s0.members) {
        for (int shift = 0; shift < 2; ++shift) {
            std::array<double, 2> c = prob.grid->offset();
            c[0] += shift * 1.7;
            const Field u = sampled_translate(mem.gs.radial, c, 1.0, 1.0, prob, true);
            for (int dir = 0; dir < 3; ++dir) {
                const double b1 = 2.0 * unif(rng), b2 = 2.0 * unif(rng), q = 1.0 + unif(rng);
                const Field v = Field::sample(prob.grid, [&](std::array<double, 2> x) {
                    const double dx = x[0] - c[0];
                    const double dy = prob.dim() == 2 ? x[1] - c[1] : 0.0;
                    if (std::abs(dx) > 0.45 * L) return 0.0;
                    return std::sin(q * dx + b2) * std::exp(-(dx - b1) * (dx - b1) / 6.0) *
                           std::exp(-dy * dy / 6.0);
                });
                const auto d = barycenter_directional(u, v, prob);
                worst = std::max(worst, std::hypot(d[0], d[1]) / energy_norm(prob, v));
            }
        }
    }
    return 1.5 * std::max(worst, 1e-6);
}

}  // namespace

GroundStateSet build_s0(const Problem& problem, int m_count, std::uint64_t seed) {
    GroundStateSet s0;
    s0.dim = problem.dim();
    s0.v0 = problem.potential.v0();
    s0.delta0 = problem.params.delta0;

    if (m_count < 1) throw ConfigError("build_s0: m_count must be >= 1");
    if (m_count == 1 || s0.delta0 <= 0.0) {
        s0.m_samples = {s0.v0};
    } else {
        for (int i = 0; i < m_count; ++i)
            s0.m_samples.push_back(s0.v0 - s0.delta0 +
                                   s0.delta0 * static_cast<double>(i) / (m_count - 1));
    }

    for (double m : s0.m_samples) s0.members.push_back({ground_state(m, problem), 0.0, false});

    s0.e_v0 = s0.members.back().gs.level;
    s0.e_v0_minus_delta = s0.members.front().gs.level;
    if (s0.m_samples.size() > 1 && !(2.0 * s0.e_v0_minus_delta > s0.e_v0))
        throw ConfigError("build_s0: 2 E_{V0-delta0} > E_{V0} fails; delta0 too large");

    // d=2: enrich with dilations at the smallest theta0 whose sampled sign
    // pattern (P, dL/ds) matches the dilation-path orientation
    if (problem.dim() == 2) {
        const GroundState& u0 = s0.members.back().gs;
        auto level_at = [&](double theta, double s) {
            return limit_energy_L(dilation_path(u0, theta, s, problem).field, s0.v0, problem);
        };
        auto poho_at = [&](double theta, double s) {
            return pohozaev_P(dilation_path(u0, theta, s, problem).field, s0.v0, 2, problem);
        };
        for (double theta = 0.05; theta <= 0.5001; theta += 0.05) {
            bool ok = true;
            for (double s : {0.2, 0.5, 0.8}) {
                const double dl = (level_at(theta, s + 0.01) - level_at(theta, s - 0.01)) / 0.02;
                if (!(poho_at(theta, s) > 0.0 && dl > 0.0)) ok = false;
            }
            for (double s : {1.1, 1.3, 1.5}) {
                const double dl = (level_at(theta, s + 0.01) - level_at(theta, s - 0.01)) / 0.02;
                if (!(poho_at(theta, s) < 0.0 && dl < 0.0)) ok = false;
            }
            if (ok) {
                s0.theta0 = theta;
                break;
            }
        }
        if (s0.theta0 > 0.0) {
            const std::size_t base_count = s0.members.size();
            for (std::size_t i = 0; i < base_count; ++i) {
                for (double th : {-s0.theta0, s0.theta0}) {
                    S0Member mem;
                    mem.theta = th;
                    mem.is_dilation = true;
                    mem.gs.m = s0.members[i].gs.m;
                    mem.gs.radial = s0.members[i].gs.radial.dilated(th);
                    mem.gs.amplitude = mem.gs.radial.amplitude();
                    mem.gs.field =
                        sampled_translate(mem.gs.radial, problem.grid->offset(), 1.0, 1.0, problem, false);
                    mem.gs.level = limit_energy_L(mem.gs.field, mem.gs.m, problem);
                    mem.gs.mass = l2_norm_sq(mem.gs.field);
                    const double kin = 0.5 * grad_energy_sq(mem.gs.field);
                    mem.gs.poho_rel = std::abs(pohozaev_P(mem.gs.field, mem.gs.m, 2, problem)) /
                                      std::max(kin, 1e-12);
                    mem.gs.decay_rate = mem.gs.radial.tail_rate;
                    s0.members.push_back(std::move(mem));
                }
            }
        }
    }

    // (r0, rho1) to joint consistency: rho1 = (4/3) min ball-norm(r0/2),
    // r0 = smallest radius with every tail norm below rho1/8
    double r0 = 1.0;
    double rho1 = 0.0;
    for (int round = 0; round < 64; ++round) {
        double min_ball = std::numeric_limits<double>::infinity();
        for (const auto& mem : s0.members)
            min_ball = std::min(min_ball, mem.gs.radial.ball_mass(r0 / 2.0));
        rho1 = (4.0 / 3.0) * 0.999 * std::sqrt(min_ball);
        const double allowed = (rho1 / 8.0) * (rho1 / 8.0);
        double r_new = 1.0;
        for (;; r_new += 0.05) {
            double worst = 0.0;
            for (const auto& mem : s0.members) worst = std::max(worst, mem.gs.radial.tail_mass(r_new));
            if (worst < allowed) break;
            if (r_new > problem.grid->halfwidth() / 2.0)
                throw SolverError("build_s0: ground-state tails too wide for the grid box");
        }
        if (std::abs(r_new - r0) < 1e-12) break;
        r0 = r_new;
    }
    s0.r0 = std::max(r0, 1.0);
    s0.rho1 = rho1;

    double min_mass = std::numeric_limits<double>::infinity();
    for (const auto& mem : s0.members) min_mass = std::min(min_mass, mem.gs.mass);
    s0.rho2 = 0.5 * min_mass;
    s0.rho0 = std::min(s0.rho1 / 16.0, s0.rho2 / 2.0);

    for (const auto& mem : s0.members)
        s0.support_max = std::max(s0.support_max, mem.gs.radial.support_radius(1e-8));

    const BoxRegion o5 = problem.params.o_region.expanded(5.0 * s0.delta0);
    double inf_v = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 400; ++i) {
        std::array<double, 2> x{o5.lo[0] + (o5.hi[0] - o5.lo[0]) * i / 400.0, 0.0};
        if (problem.dim() == 2) {
            for (int j = 0; j <= 400; ++j) {
                x[1] = o5.lo[1] + (o5.hi[1] - o5.lo[1]) * j / 400.0;
                inf_v = std::min(inf_v, problem.potential.value(x));
            }
        } else {
            inf_v = std::min(inf_v, problem.potential.value(x));
        }
    }
    s0.inf_v_on_o5delta = inf_v;

    s0.d1_bound = estimate_d1_bound(s0, problem, seed);
    return s0;
}

namespace {

nlohmann::json member_to_json(const S0Member& mem) {
    nlohmann::json j;
    j["m"] = mem.gs.m;
    j["theta"] = mem.theta;
    j["is_dilation"] = mem.is_dilation;
    j["level"] = mem.gs.level;
    j["mass"] = mem.gs.mass;
    j["pohozaev_rel"] = mem.gs.poho_rel;
    j["decay_rate"] = mem.gs.decay_rate;
    j["amplitude"] = mem.gs.amplitude;
    j["radial_dr"] = mem.gs.radial.dr;
    j["radial_tail_rate"] = mem.gs.radial.tail_rate;
    j["radial_values"] = mem.gs.radial.u;
    return j;
}

}  // namespace

void save_s0(const GroundStateSet& s0, const std::string& dir, std::uint64_t config_digest) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    nlohmann::json j;
    j["dim"] = s0.dim;
    j["v0"] = s0.v0;
    j["delta0"] = s0.delta0;
    j["m_samples"] = s0.m_samples;
    j["r0"] = s0.r0;
    j["rho1"] = s0.rho1;
    j["rho0"] = s0.rho0;
    j["rho2"] = s0.rho2;
    j["d1_bound"] = s0.d1_bound;
    j["theta0"] = s0.theta0;
    j["e_v0"] = s0.e_v0;
    j["e_v0_minus_delta"] = s0.e_v0_minus_delta;
    j["inf_v_on_o5delta"] = s0.inf_v_on_o5delta;
    j["support_max"] = s0.support_max;
    j["config_digest"] = config_digest;
    j["members"] = nlohmann::json::array();
    for (std::size_t i = 0; i < s0.members.size(); ++i) {
        j["members"].push_back(member_to_json(s0.members[i]));
        save_snapshot(s0.members[i].gs.field,
                      (fs::path(dir) / ("member_" + std::to_string(i) + ".snls")).string());
    }
    std::ofstream os(fs::path(dir) / "s0_manifest.json");
    os << j.dump(2) << "\n";
}

GroundStateSet load_s0(const std::string& dir, const Problem& problem) {
    namespace fs = std::filesystem;
    const fs::path manifest = fs::path(dir) / "s0_manifest.json";
    std::ifstream is(manifest);
    if (!is)
        throw SolverError("ground-state set not found at '" + manifest.string() +
                          "'; run the limit command first");
    nlohmann::json j;
    is >> j;
    GroundStateSet s0;
    s0.dim = j.at("dim").get<int>();
    if (s0.dim != problem.dim())
        throw ConfigError("ground-state set dimension does not match the configuration");
    s0.v0 = j.at("v0").get<double>();
    s0.delta0 = j.at("delta0").get<double>();
    s0.m_samples = j.at("m_samples").get<std::vector<double>>();
    s0.r0 = j.at("r0").get<double>();
    s0.rho1 = j.at("rho1").get<double>();
    s0.rho0 = j.at("rho0").get<double>();
    s0.rho2 = j.at("rho2").get<double>();
    s0.d1_bound = j.at("d1_bound").get<double>();
    s0.theta0 = j.at("theta0").get<double>();
    s0.e_v0 = j.at("e_v0").get<double>();
    s0.e_v0_minus_delta = j.at("e_v0_minus_delta").get<double>();
    s0.inf_v_on_o5delta = j.at("inf_v_on_o5delta").get<double>();
    s0.support_max = j.at("support_max").get<double>();
    for (const auto& jm : j.at("members")) {
        S0Member mem;
        mem.theta = jm.at("theta").get<double>();
        mem.is_dilation = jm.at("is_dilation").get<bool>();
        mem.gs.m = jm.at("m").get<double>();
        mem.gs.amplitude = jm.at("amplitude").get<double>();
        mem.gs.decay_rate = jm.at("decay_rate").get<double>();
        mem.gs.radial.dr = jm.at("radial_dr").get<double>();
        mem.gs.radial.tail_rate = jm.at("radial_tail_rate").get<double>();
        mem.gs.radial.dim = s0.dim;
        mem.gs.radial.u = jm.at("radial_values").get<std::vector<double>>();
        // resample on the run grid and recompute the grid-level diagnostics
        mem.gs.field = sampled_translate(mem.gs.radial, problem.grid->offset(), 1.0, 1.0, problem, false);
        if (problem.dim() == 1 && !mem.is_dilation) newton_refine(mem.gs.field, mem.gs.m, problem);
        mem.gs.level = limit_energy_L(mem.gs.field, mem.gs.m, problem);
        mem.gs.mass = l2_norm_sq(mem.gs.field);
        const double kin = 0.5 * grad_energy_sq(mem.gs.field);
        mem.gs.poho_rel = std::abs(pohozaev_P(mem.gs.field, mem.gs.m, problem.dim(), problem)) /
                          std::max(kin, 1e-12);
        s0.members.push_back(std::move(mem));
    }
    if (s0.members.empty()) throw SolverError("ground-state set is empty");
    return s0;
}

}  // namespace snls
