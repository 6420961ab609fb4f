#include "snls/linsolve.hpp"

#include <cmath>

namespace snls {

void apply_operator(const Problem& problem, const std::vector<double>& u, std::vector<double>& out) {
    const Grid& g = *problem.grid;
    out.assign(u.size(), 0.0);
    const double invh2 = 1.0 / (g.spacing() * g.spacing());
    const int n = g.n();
    if (g.dim() == 1) {
        for (int i = 1; i < n - 1; ++i) {
            const std::size_t k = static_cast<std::size_t>(i);
            out[k] = (2.0 * u[k] - u[k - 1] - u[k + 1]) * invh2 + problem.veps[k] * u[k];
        }
    } else {
        for (int i = 1; i < n - 1; ++i) {
            for (int j = 1; j < n - 1; ++j) {
                const std::size_t k = g.index(i, j);
                out[k] = (4.0 * u[k] - u[k - 1] - u[k + 1] - u[k - static_cast<std::size_t>(n)] -
                          u[k + static_cast<std::size_t>(n)]) *
                             invh2 +
                         problem.veps[k] * u[k];
            }
        }
    }
}

double energy_norm_sq(const Problem& problem, const Field& u) {
    const Grid& g = *u.grid;
    const int n = g.n();
    const double hd = g.cell_volume();
    const double invh2 = 1.0 / (g.spacing() * g.spacing());
    double links = 0.0, vmass = 0.0;
    if (g.dim() == 1) {
        for (int i = 0; i + 1 < n; ++i) {
            const double d = u.v[static_cast<std::size_t>(i) + 1] - u.v[static_cast<std::size_t>(i)];
            links += d * d;
        }
        for (int i = 0; i < n; ++i)
            vmass += problem.veps[static_cast<std::size_t>(i)] * u.v[static_cast<std::size_t>(i)] *
                     u.v[static_cast<std::size_t>(i)];
    } else {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const std::size_t k = g.index(i, j);
                if (i + 1 < n) {
                    const double d = u.v[g.index(i + 1, j)] - u.v[k];
                    links += d * d;
                }
                if (j + 1 < n) {
                    const double d = u.v[k + 1] - u.v[k];
                    links += d * d;
                }
                vmass += problem.veps[k] * u.v[k] * u.v[k];
            }
        }
    }
    return (links * invh2 + vmass) * hd;
}

double energy_dist(const Problem& problem, const Field& a, const Field& b) {
    const Grid& g = *a.grid;
    const int n = g.n();
    const double hd = g.cell_volume();
    const double invh2 = 1.0 / (g.spacing() * g.spacing());
    double links = 0.0, vmass = 0.0;
    auto w = [&](std::size_t k) { return a.v[k] - b.v[k]; };
    if (g.dim() == 1) {
        for (int i = 0; i + 1 < n; ++i) {
            const double d = w(static_cast<std::size_t>(i) + 1) - w(static_cast<std::size_t>(i));
            links += d * d;
        }
        for (int i = 0; i < n; ++i) {
            const double wi = w(static_cast<std::size_t>(i));
            vmass += problem.veps[static_cast<std::size_t>(i)] * wi * wi;
        }
    } else {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const std::size_t k = g.index(i, j);
                const double wk = w(k);
                if (i + 1 < n) {
                    const double d = w(g.index(i + 1, j)) - wk;
                    links += d * d;
                }
                if (j + 1 < n) {
                    const double d = w(k + 1) - wk;
                    links += d * d;
                }
                vmass += problem.veps[k] * wk * wk;
            }
        }
    }
    return std::sqrt(std::max(0.0, (links * invh2 + vmass) * hd));
}

double energy_inner(const Problem& problem, const Field& a, const Field& b) {
    std::vector<double> tmp;
    apply_operator(problem, a.v, tmp);
    double s = 0.0;
    for (std::size_t k = 0; k < tmp.size(); ++k) s += tmp[k] * b.v[k];
    return s * a.grid->cell_volume();
}

PcgResult pcg_solve(const Problem& problem, const std::vector<double>& rhs, std::vector<double>& x,
                    double rel_tol, int max_iters) {
    const Grid& g = *problem.grid;
    const std::size_t sz = rhs.size();
    const double diag_lap = 2.0 * g.dim() / (g.spacing() * g.spacing());

    std::vector<double> r(sz, 0.0), z(sz, 0.0), p(sz, 0.0), q(sz, 0.0);
    if (x.size() != sz) x.assign(sz, 0.0);

    apply_operator(problem, x, q);
    double norm_b = 0.0;
    for (std::size_t k = 0; k < sz; ++k) {
        const double rk = g.is_boundary(k) ? 0.0 : rhs[k] - q[k];
        r[k] = rk;
        const double bk = g.is_boundary(k) ? 0.0 : rhs[k];
        norm_b += bk * bk;
    }
    norm_b = std::sqrt(norm_b);

    PcgResult out;
    if (norm_b == 0.0) {
        x.assign(sz, 0.0);
        out.converged = true;
        return out;
    }

    auto precond = [&](const std::vector<double>& in, std::vector<double>& o) {
        for (std::size_t k = 0; k < sz; ++k)
            o[k] = g.is_boundary(k) ? 0.0 : in[k] / (diag_lap + problem.veps[k]);
    };

    precond(r, z);
    p = z;
    double rho = 0.0;
    for (std::size_t k = 0; k < sz; ++k) rho += r[k] * z[k];

    double res_norm = 0.0;
    for (std::size_t k = 0; k < sz; ++k) res_norm += r[k] * r[k];
    res_norm = std::sqrt(res_norm);

    const double target = rel_tol * norm_b;
    int it = 0;
    while (res_norm > target && it < max_iters) {
        ++it;
        apply_operator(problem, p, q);
        double pq = 0.0;
        for (std::size_t k = 0; k < sz; ++k) pq += p[k] * q[k];
        const double alpha = rho / pq;
        for (std::size_t k = 0; k < sz; ++k) {
            x[k] += alpha * p[k];
            r[k] -= alpha * q[k];
        }
        precond(r, z);
        double rho_next = 0.0;
        for (std::size_t k = 0; k < sz; ++k) rho_next += r[k] * z[k];
        const double beta = rho_next / rho;
        rho = rho_next;
        for (std::size_t k = 0; k < sz; ++k) p[k] = z[k] + beta * p[k];
        res_norm = 0.0;
        for (std::size_t k = 0; k < sz; ++k) res_norm += r[k] * r[k];
        res_norm = std::sqrt(res_norm);
    }
    out.iters = it;
    out.rel_residual = res_norm / norm_b;
    out.converged = res_norm <= target;
    return out;
}

}  // namespace snls
