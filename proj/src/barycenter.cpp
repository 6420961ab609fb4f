#include "snls/barycenter.hpp"

#include <algorithm>
#include <cmath>

namespace snls {

namespace {

constexpr double kDenominatorFloor = 1e-8;

int window_halfcount(double radius, double h) { return static_cast<int>(radius / h + 1e-9); }

/// Ball masses at every node by direct windowed summation. The per-node sums
/// always run over the same relative index window in the same order, so the
/// result is bit-stable under grid-aligned translation of u.
std::vector<double> all_ball_masses(const Field& u, double radius) {
    const Grid& g = *u.grid;
    const int n = g.n();
    const double hd = g.cell_volume();
    std::vector<double> mass(u.size(), 0.0);
    if (g.dim() == 1) {
        const int w = window_halfcount(radius, g.spacing());
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            const int lo = std::max(0, i - w), hi = std::min(n - 1, i + w);
            for (int j = lo; j <= hi; ++j) s += u.v[static_cast<std::size_t>(j)] * u.v[static_cast<std::size_t>(j)];
            mass[static_cast<std::size_t>(i)] = s * hd;
        }
        return mass;
    }
    const double h = g.spacing();
    const int w = window_halfcount(radius, h);
    std::vector<int> rowhalf(static_cast<std::size_t>(w) + 1, 0);
    for (int di = 0; di <= w; ++di) {
        const double rest = radius * radius - (di * h) * (di * h);
        rowhalf[static_cast<std::size_t>(di)] = rest >= 0.0 ? static_cast<int>(std::sqrt(rest) / h + 1e-9) : -1;
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int di = -w; di <= w; ++di) {
                const int ii = i + di;
                if (ii < 0 || ii >= n) continue;
                const int wj = rowhalf[static_cast<std::size_t>(std::abs(di))];
                if (wj < 0) continue;
                const int lo = std::max(0, j - wj), hi = std::min(n - 1, j + wj);
                const double* row = u.v.data() + g.index(ii, 0);
                for (int jj = lo; jj <= hi; ++jj) s += row[jj] * row[jj];
            }
            mass[g.index(i, j)] = s * hd;
        }
    }
    return mass;
}

}  // namespace

double ball_mass(const Field& u, std::array<double, 2> P, double radius) {
    const Grid& g = *u.grid;
    const int n = g.n();
    const double hd = g.cell_volume();
    const double r2 = radius * radius + 1e-12;
    double s = 0.0;
    if (g.dim() == 1) {
        for (int i = 0; i < n; ++i) {
            const double d = g.coord(0, i) - P[0];
            if (d * d <= r2) s += u.v[static_cast<std::size_t>(i)] * u.v[static_cast<std::size_t>(i)];
        }
        return s * hd;
    }
    for (int i = 0; i < n; ++i) {
        const double dx = g.coord(0, i) - P[0];
        if (dx * dx > r2) continue;
        for (int j = 0; j < n; ++j) {
            const double dy = g.coord(1, j) - P[1];
            if (dx * dx + dy * dy <= r2) {
                const double v = u.v[g.index(i, j)];
                s += v * v;
            }
        }
    }
    return s * hd;
}

BarycenterReport barycenter(const Field& u, const Params& params) {
    const Grid& g = *u.grid;
    const CutoffSpec cut = params.cutoffs();
    const std::vector<double> mass = all_ball_masses(u, params.r0);

    BarycenterReport out;
    const int n = g.n();
    const double hd = g.cell_volume();

    if (g.dim() == 1) {
        int anchor = -1;
        double den = 0.0;
        for (int i = 0; i < n; ++i) {
            const double d = cut.psi(mass[static_cast<std::size_t>(i)]);
            if (d > 0.0 && anchor < 0) anchor = i;
            den += d;
        }
        out.denominator = den * hd;
        if (out.denominator < kDenominatorFloor) return out;
        double s = 0.0;
        for (int i = anchor; i < n; ++i)
            s += cut.psi(mass[static_cast<std::size_t>(i)]) * static_cast<double>(i - anchor);
        out.upsilon = {g.coord(0, anchor) + g.spacing() * (s / den), 0.0};
        out.degenerate = false;
        return out;
    }

    int a0 = -1, a1 = n;
    double den = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double d = cut.psi(mass[g.index(i, j)]);
            if (d > 0.0) {
                if (a0 < 0) a0 = i;
                a1 = std::min(a1, j);
            }
            den += d;
        }
    }
    out.denominator = den * hd;
    if (out.denominator < kDenominatorFloor) return out;
    double s0 = 0.0, s1 = 0.0;
    for (int i = a0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double d = cut.psi(mass[g.index(i, j)]);
            if (d == 0.0) continue;
            s0 += d * static_cast<double>(i - a0);
            s1 += d * static_cast<double>(j - a1);
        }
    }
    out.upsilon = {g.coord(0, a0) + g.spacing() * (s0 / den),
                   g.coord(1, a1) + g.spacing() * (s1 / den)};
    out.degenerate = false;
    return out;
}

std::array<double, 2> barycenter_directional(const Field& u, const Field& v,
                                             const Problem& problem) {
    const double nv = energy_norm(problem, v);
    if (nv == 0.0) return {0.0, 0.0};
    const BarycenterReport base = barycenter(u, problem.params);
    if (base.degenerate) throw SolverError("barycenter_directional: degenerate barycenter");
    const double t = 1e-4 * energy_norm(problem, u) / nv;
    Field up = u, um = u;
    for (std::size_t k = 0; k < u.size(); ++k) {
        up.v[k] += t * v.v[k];
        um.v[k] -= t * v.v[k];
    }
    const BarycenterReport bp = barycenter(up, problem.params);
    const BarycenterReport bm = barycenter(um, problem.params);
    if (bp.degenerate || bm.degenerate)
        throw SolverError("barycenter_directional: perturbed barycenter degenerate");
    return {(bp.upsilon[0] - bm.upsilon[0]) / (2.0 * t),
            (bp.upsilon[1] - bm.upsilon[1]) / (2.0 * t)};
}

PenaltyParts penalty_parts(const Field& u, const Problem& problem) {
    PenaltyParts out;
    out.bary = barycenter(u, problem.params);
    const double eps = problem.params.eps;
    const double sqrte = std::sqrt(eps);
    if (out.bary.degenerate) {
        // no concentrated ball anywhere: evaluate with the window fully open
        // (chi = 1), the conservative extension outside every Z set
        out.chi_mass = l2_norm_sq(u);
        const double excess = out.chi_mass / sqrte - 1.0;
        out.value = excess > 0.0 ? excess * excess : 0.0;
        return out;
    }
    const Grid& g = *u.grid;
    double s = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        const auto x = g.point(k);
        const double dx = x[0] - out.bary.upsilon[0];
        const double dy = g.dim() == 2 ? x[1] - out.bary.upsilon[1] : 0.0;
        const double c = CutoffSpec::chi(sqrte * std::sqrt(dx * dx + dy * dy));
        if (c > 0.0) s += c * u.v[k] * u.v[k];
    }
    out.chi_mass = s * g.cell_volume();
    const double excess = out.chi_mass / sqrte - 1.0;
    out.value = excess > 0.0 ? excess * excess : 0.0;
    return out;
}

double penalty(const Field& u, const Problem& problem) { return penalty_parts(u, problem).value; }

Field penalty_gradient(const Field& u, const Problem& problem) {
    const PenaltyParts parts = penalty_parts(u, problem);
    Field out(u.grid);
    if (parts.value == 0.0) return out;

    const Grid& g = *u.grid;
    const double eps = problem.params.eps;
    const double sqrte = std::sqrt(eps);
    const double sqrt_phi = std::sqrt(parts.value);
    if (parts.bary.degenerate) {
        // gradient of the open-window extension
        for (std::size_t k = 0; k < u.size(); ++k)
            out.v[k] = 4.0 * sqrt_phi / sqrte * u.v[k];
        out.zero_boundary();
        return out;
    }
    const std::array<double, 2> ups = parts.bary.upsilon;

    // dominant term and the chi-window sensitivity to the barycenter
    std::array<double, 2> csens{0.0, 0.0};
    for (std::size_t k = 0; k < u.size(); ++k) {
        const auto x = g.point(k);
        const double dx = x[0] - ups[0];
        const double dy = g.dim() == 2 ? x[1] - ups[1] : 0.0;
        const double rho = std::sqrt(dx * dx + dy * dy);
        out.v[k] = 4.0 * sqrt_phi / sqrte * CutoffSpec::chi(sqrte * rho) * u.v[k];
        if (rho > 1e-12) {
            const double cp = CutoffSpec::chi_prime(sqrte * rho);
            if (cp != 0.0) {
                const double w = cp * u.v[k] * u.v[k] / rho;
                csens[0] += w * dx;
                csens[1] += w * dy;
            }
        }
    }
    const double hd = g.cell_volume();
    csens[0] *= hd;
    csens[1] *= hd;

    // representer of v -> Upsilon'(u)v, assembled from the psi' shell
    const CutoffSpec cut = problem.params.cutoffs();
    const std::vector<double> mass = all_ball_masses(u, problem.params.r0);
    std::vector<double> beta(u.size(), 0.0);
    bool any_active = false;
    for (std::size_t k = 0; k < u.size(); ++k) {
        beta[k] = cut.psi_prime(mass[k]);
        any_active = any_active || beta[k] != 0.0;
    }
    if (any_active) {
        const int n = g.n();
        const double den = parts.bary.denominator;
        const double h = g.spacing();
        const int w = window_halfcount(problem.params.r0, h);
        if (g.dim() == 1) {
            for (int i = 1; i < n - 1; ++i) {
                if (u.v[static_cast<std::size_t>(i)] == 0.0) continue;
                double t0 = 0.0;
                const int lo = std::max(0, i - w), hi = std::min(n - 1, i + w);
                for (int j = lo; j <= hi; ++j) {
                    const double b = beta[static_cast<std::size_t>(j)];
                    if (b != 0.0) t0 += b * (g.coord(0, j) - ups[0]);
                }
                out.v[static_cast<std::size_t>(i)] -=
                    2.0 * sqrt_phi * csens[0] * (2.0 * u.v[static_cast<std::size_t>(i)] / den) * t0 * hd;
            }
        } else {
            std::vector<int> rowhalf(static_cast<std::size_t>(w) + 1, -1);
            for (int di = 0; di <= w; ++di) {
                const double rest = problem.params.r0 * problem.params.r0 - (di * h) * (di * h);
                if (rest >= 0.0) rowhalf[static_cast<std::size_t>(di)] = static_cast<int>(std::sqrt(rest) / h + 1e-9);
            }
            for (int i = 1; i < n - 1; ++i) {
                for (int j = 1; j < n - 1; ++j) {
                    const std::size_t k = g.index(i, j);
                    if (u.v[k] == 0.0) continue;
                    double t0 = 0.0, t1 = 0.0;
                    for (int di = -w; di <= w; ++di) {
                        const int ii = i + di;
                        if (ii < 0 || ii >= n) continue;
                        const int wj = rowhalf[static_cast<std::size_t>(std::abs(di))];
                        if (wj < 0) continue;
                        const int lo = std::max(0, j - wj), hi2 = std::min(n - 1, j + wj);
                        for (int jj = lo; jj <= hi2; ++jj) {
                            const double b = beta[g.index(ii, jj)];
                            if (b == 0.0) continue;
                            t0 += b * (g.coord(0, ii) - ups[0]);
                            t1 += b * (g.coord(1, jj) - ups[1]);
                        }
                    }
                    out.v[k] -= 2.0 * sqrt_phi * (2.0 * u.v[k] / den) * hd *
                                (csens[0] * t0 + csens[1] * t1);
                }
            }
        }
    }
    out.zero_boundary();
    return out;
}

}  // namespace snls
