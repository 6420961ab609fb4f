#include "snls/functionals.hpp"

#include <cmath>

namespace snls {

double grad_energy_sq(const Field& u) {
    const Grid& g = *u.grid;
    const int n = g.n();
    double links = 0.0;
    if (g.dim() == 1) {
        for (int i = 0; i + 1 < n; ++i) {
            const double d = u.v[static_cast<std::size_t>(i + 1)] - u.v[static_cast<std::size_t>(i)];
            links += d * d;
        }
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
            }
        }
    }
    return links * g.cell_volume() / (g.spacing() * g.spacing());
}

namespace {

double nonlinear_integral(const Field& u, const Nonlinearity& f) {
    double s = 0.0;
    for (double x : u.v) s += f.F(x);
    s *= u.grid->cell_volume();
    if (!std::isfinite(s)) throw SolverError("energy: F(u) quadrature overflowed");
    return s;
}

}  // namespace

double energy_J(const Field& u, const Problem& problem) {
    if (!u.all_finite()) throw SolverError("energy_J: non-finite field");
    double vmass = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) vmass += problem.veps[k] * u.v[k] * u.v[k];
    vmass *= u.grid->cell_volume();
    return 0.5 * grad_energy_sq(u) + 0.5 * vmass - nonlinear_integral(u, problem.f);
}

double limit_energy_L(const Field& u, double m, const Problem& problem) {
    if (!(m > 0.0)) throw ConfigError("limit_energy_L: mass coefficient must be positive");
    return 0.5 * grad_energy_sq(u) + 0.5 * m * l2_norm_sq(u) - nonlinear_integral(u, problem.f);
}

double pohozaev_P(const Field& u, double m, int N, const Problem& problem) {
    const double K = grad_energy_sq(u);
    const double M = l2_norm_sq(u);
    const double Fint = nonlinear_integral(u, problem.f);
    return 0.5 * (N - 2) * K + 0.5 * N * m * M - N * Fint;
}

double gamma_energy(const Field& u, const Problem& problem) {
    return energy_J(u, problem) + penalty(u, problem);
}

EnergyReport gamma_report(const Field& u, const Problem& problem) {
    EnergyReport r;
    r.kinetic = 0.5 * grad_energy_sq(u);
    double vmass = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) vmass += problem.veps[k] * u.v[k] * u.v[k];
    r.potential = 0.5 * vmass * u.grid->cell_volume();
    r.nonlinear = nonlinear_integral(u, problem.f);
    r.penalty = penalty(u, problem);
    r.total = r.kinetic + r.potential - r.nonlinear + r.penalty;
    return r;
}

Field residual(const Field& u, const Problem& problem) {
    if (!u.all_finite()) throw SolverError("residual: non-finite field");
    Field r(u.grid);
    apply_operator(problem, u.v, r.v);
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (!u.grid->is_boundary(k)) r.v[k] -= problem.f.f(u.v[k]);
    }
    const Field pg = penalty_gradient(u, problem);
    for (std::size_t k = 0; k < u.size(); ++k) r.v[k] += pg.v[k];
    return r;
}

DualSolve dual_solve(const Field& r, const Problem& problem) {
    if (!r.all_finite()) throw SolverError("dual_norm: non-finite input");
    DualSolve out;
    out.direction = Field(r.grid);
    const PcgResult pcg = pcg_solve(problem, r.v, out.direction.v,
                                    problem.params.solver.linear_tol,
                                    problem.params.solver.linear_max_iters);
    if (!pcg.converged)
        throw SolverError("dual_norm: metric solve stalled at relative residual " +
                          std::to_string(pcg.rel_residual));
    out.pcg_iters = pcg.iters;
    out.dual = std::sqrt(std::max(0.0, inner_l2(r, out.direction)));
    return out;
}

double dual_norm(const Field& r, const Problem& problem) { return dual_solve(r, problem).dual; }

}  // namespace snls
