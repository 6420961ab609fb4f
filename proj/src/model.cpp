#include "snls/model.hpp"

#include <algorithm>
#include <cmath>

namespace snls {

Potential Potential::gaussian_bump(double v_inf, double amplitude, std::array<double, 2> center,
                                   double width) {
    if (!(v_inf > 0.0)) throw ConfigError("potential: v_inf must be positive");
    if (!(amplitude > 0.0)) throw ConfigError("potential: amplitude must be positive");
    if (!(width > 0.0)) throw ConfigError("potential: width must be positive");
    Potential p;
    p.kind_ = Kind::GaussianBump;
    p.v_inf_ = v_inf;
    p.amplitude_ = amplitude;
    p.center_ = center;
    p.width_ = width;
    p.v0_ = v_inf + amplitude;
    p.x0_ = center;
    return p;
}

Potential Potential::tabulated(int dim, BoxRegion domain, int samples_per_axis,
                               std::vector<double> values, double v_inf) {
    if (samples_per_axis < 2) throw ConfigError("potential: tabulated needs >= 2 samples per axis");
    std::size_t expect = static_cast<std::size_t>(samples_per_axis);
    if (dim == 2) expect *= static_cast<std::size_t>(samples_per_axis);
    if (values.size() != expect) throw ConfigError("potential: tabulated value count mismatch");
    Potential p;
    p.kind_ = Kind::Tabulated;
    p.v_inf_ = v_inf;
    p.dim_ = dim;
    p.domain_ = domain;
    p.samples_ = samples_per_axis;
    p.table_ = std::move(values);
    // lattice argmax stands in for the analytic maximum
    std::size_t best = 0;
    for (std::size_t k = 1; k < p.table_.size(); ++k)
        if (p.table_[k] > p.table_[best]) best = k;
    p.v0_ = p.table_[best];
    const int n = samples_per_axis;
    const int i = dim == 1 ? static_cast<int>(best) : static_cast<int>(best) / n;
    const int j = dim == 1 ? 0 : static_cast<int>(best) % n;
    auto coord = [&](int axis, int idx) {
        return domain.lo[axis] + (domain.hi[axis] - domain.lo[axis]) * idx / (n - 1);
    };
    p.x0_ = {coord(0, i), dim == 2 ? coord(1, j) : 0.0};
    p.amplitude_ = p.v0_ - v_inf;
    return p;
}

double Potential::table_value(std::array<double, 2> x) const {
    const int n = samples_;
    auto locate = [&](int axis, double c, int& i0, double& w) {
        const double span = domain_.hi[axis] - domain_.lo[axis];
        double t = (c - domain_.lo[axis]) / span * (n - 1);
        t = std::clamp(t, 0.0, static_cast<double>(n - 1));
        i0 = std::min(static_cast<int>(t), n - 2);
        w = t - i0;
    };
    int i0;
    double wi;
    locate(0, x[0], i0, wi);
    if (dim_ == 1) return table_[i0] * (1.0 - wi) + table_[i0 + 1] * wi;
    int j0;
    double wj;
    locate(1, x[1], j0, wj);
    auto at = [&](int i, int j) { return table_[static_cast<std::size_t>(i) * n + j]; };
    return (1.0 - wi) * ((1.0 - wj) * at(i0, j0) + wj * at(i0, j0 + 1)) +
           wi * ((1.0 - wj) * at(i0 + 1, j0) + wj * at(i0 + 1, j0 + 1));
}

double Potential::value(std::array<double, 2> x) const {
    if (kind_ == Kind::GaussianBump) {
        const double dx = x[0] - center_[0];
        const double dy = x[1] - center_[1];
        return v_inf_ + amplitude_ * std::exp(-(dx * dx + dy * dy) / (width_ * width_));
    }
    return table_value(x);
}

std::array<double, 2> Potential::gradient(std::array<double, 2> x) const {
    if (kind_ == Kind::GaussianBump) {
        const double dx = x[0] - center_[0];
        const double dy = x[1] - center_[1];
        const double g = amplitude_ * std::exp(-(dx * dx + dy * dy) / (width_ * width_));
        const double s = -2.0 / (width_ * width_);
        return {s * dx * g, s * dy * g};
    }
    const double step = (domain_.hi[0] - domain_.lo[0]) / (samples_ - 1);
    std::array<double, 2> g{0.0, 0.0};
    for (int a = 0; a < dim_; ++a) {
        auto xp = x, xm = x;
        xp[a] += step;
        xm[a] -= step;
        g[a] = (table_value(xp) - table_value(xm)) / (2.0 * step);
    }
    return g;
}

PotentialCheck validate_potential(const Potential& pot, int dim, const BoxRegion& omega_hat,
                                  const BoxRegion& o_region, double delta0, int samples_per_axis) {
    const int n = dim == 1 ? samples_per_axis : std::min(samples_per_axis, 201);
    auto coord = [&](int axis, int i) {
        return omega_hat.lo[axis] + (omega_hat.hi[axis] - omega_hat.lo[axis]) * i / (n - 1);
    };

    PotentialCheck out;
    out.min_v = std::numeric_limits<double>::infinity();
    out.boundary_max = -std::numeric_limits<double>::infinity();
    out.annulus_min_grad = std::numeric_limits<double>::infinity();
    double interior_max = -std::numeric_limits<double>::infinity();

    const BoxRegion o3 = o_region.expanded(3.0 * delta0);
    const int nj = dim == 2 ? n : 1;
    bool grad_sign_change = false;
    double prev_grad[2] = {0.0, 0.0};  // per-side running V' for the 1D sign check
    bool have_prev[2] = {false, false};
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < nj; ++j) {
            const std::array<double, 2> x{coord(0, i), dim == 2 ? coord(1, j) : 0.0};
            const double v = pot.value(x);
            out.min_v = std::min(out.min_v, v);
            const bool on_boundary =
                i == 0 || i == n - 1 || (dim == 2 && (j == 0 || j == nj - 1));
            if (on_boundary)
                out.boundary_max = std::max(out.boundary_max, v);
            else
                interior_max = std::max(interior_max, v);
            if (o3.contains(x, dim) && !o_region.contains(x, dim)) {
                const auto g = pot.gradient(x);
                out.annulus_min_grad =
                    std::min(out.annulus_min_grad, std::hypot(g[0], dim == 2 ? g[1] : 0.0));
                if (dim == 1) {
                    const int side = x[0] < o_region.lo[0] ? 0 : 1;
                    if (have_prev[side] && prev_grad[side] * g[0] < 0.0)
                        grad_sign_change = true;
                    prev_grad[side] = g[0];
                    have_prev[side] = true;
                }
            }
        }
    }

    if (!(out.min_v >= pot.v_inf() - 1e-12))
        throw ConfigError("potential: sampled minimum " + std::to_string(out.min_v) +
                          " drops below v_inf (V1)");
    if (!(out.min_v > 0.0)) throw ConfigError("potential: V must be positive (V1)");
    if (!(interior_max > out.boundary_max))
        throw ConfigError("potential: maximum is not attained strictly inside Omega_hat (V2)");
    if (!(out.annulus_min_grad > 1e-4) || grad_sign_change)
        throw ConfigError("potential: |grad V| vanishes on the annulus O^{3 delta0} \\ O (V3)");
    return out;
}

Nonlinearity Nonlinearity::power(double p) {
    if (!(p > 2.0)) throw ConfigError("nonlinearity: power exponent must exceed 2");
    Nonlinearity f;
    f.p_ = p;
    return f;
}

double Nonlinearity::f(double t) const {
    if (t <= 0.0) return 0.0;
    if (t >= clamp_at_) return f_bound_;
    return std::pow(t, p_ - 1.0);
}

double Nonlinearity::F(double t) const {
    if (t <= 0.0) return 0.0;
    if (t >= clamp_at_) return F_at_clamp_ + f_bound_ * (t - clamp_at_);
    return std::pow(t, p_) / p_;
}

double Nonlinearity::df(double t) const {
    if (t <= 0.0 || t >= clamp_at_) return 0.0;
    return (p_ - 1.0) * std::pow(t, p_ - 2.0);
}

Nonlinearity truncate_nonlinearity(const Nonlinearity& f, double K) {
    if (!(K > 0.0)) throw ConfigError("nonlinearity: truncation level must be positive");
    Nonlinearity out = f;
    out.clamp_at_ = 2.0 * K;
    out.f_bound_ = std::pow(2.0 * K, f.p_ - 1.0);
    out.F_at_clamp_ = std::pow(2.0 * K, f.p_) / f.p_;
    return out;
}

void Problem::refresh_veps() {
    veps.resize(grid->size());
    const double eps = params.eps;
    for (std::size_t k = 0; k < veps.size(); ++k) {
        const auto x = grid->point(k);
        veps[k] = potential.value({eps * x[0], eps * x[1]});
    }
}

NormReport norms(const Field& u, const Problem& problem) {
    if (!u.all_finite()) throw SolverError("norms: non-finite values in field");
    const Grid& g = *u.grid;
    const double hd = g.cell_volume();
    const double inv2h = 1.0 / (2.0 * g.spacing());
    double mass = 0.0, grad = 0.0, vmass = 0.0;
    if (g.dim() == 1) {
        const int n = g.n();
        for (int i = 0; i < n; ++i) {
            const double ui = u.v[i];
            mass += ui * ui;
            vmass += problem.veps[static_cast<std::size_t>(i)] * ui * ui;
            if (i > 0 && i < n - 1) {
                const double d = (u.v[i + 1] - u.v[i - 1]) * inv2h;
                grad += d * d;
            }
        }
    } else {
        const int n = g.n();
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const std::size_t k = g.index(i, j);
                const double ui = u.v[k];
                mass += ui * ui;
                vmass += problem.veps[k] * ui * ui;
                if (i > 0 && i < n - 1) {
                    const double d = (u.v[g.index(i + 1, j)] - u.v[g.index(i - 1, j)]) * inv2h;
                    grad += d * d;
                }
                if (j > 0 && j < n - 1) {
                    const double d = (u.v[g.index(i, j + 1)] - u.v[g.index(i, j - 1)]) * inv2h;
                    grad += d * d;
                }
            }
        }
    }
    NormReport r;
    r.l2 = std::sqrt(mass * hd);
    r.h1 = std::sqrt((mass + grad) * hd);
    r.he = std::sqrt((grad + vmass) * hd);
    return r;
}

double l2_norm_sq(const Field& u) {
    double s = 0.0;
    for (double x : u.v) s += x * x;
    return s * u.grid->cell_volume();
}

double inner_l2(const Field& a, const Field& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.v.size(); ++k) s += a.v[k] * b.v[k];
    return s * a.grid->cell_volume();
}

}  // namespace snls
