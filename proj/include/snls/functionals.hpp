#pragma once

#include "snls/barycenter.hpp"
#include "snls/linsolve.hpp"
#include "snls/model.hpp"

namespace snls {

/// Decomposition of the penalized energy.
/// total = kinetic + potential - nonlinear + penalty.
struct EnergyReport {
    double kinetic = 0.0;    // 1/2 ||grad u||_2^2
    double potential = 0.0;  // 1/2 int V(eps x) u^2
    double nonlinear = 0.0;  // int F(u)
    double penalty = 0.0;    // tail penalty value
    double total = 0.0;
};

/// Forward-difference gradient energy ||grad u||_2^2 = <(-Lap_h) u, u> h^d.
double grad_energy_sq(const Field& u);

/// 1/2 (||grad u||^2 + int V(eps x) u^2) - int F(u).
/// The kinetic quadrature is the operator form <(-Lap_h) u, u>/2 so the
/// stencil residual below is the exact gradient of the discrete functional.
double energy_J(const Field& u, const Problem& problem);

/// Limit functional L_m(u) = 1/2 ||grad u||^2 + m/2 ||u||^2 - int F(u).
double limit_energy_L(const Field& u, double m, const Problem& problem);

/// Scaling residual P_m(u) = (N-2)/2 ||grad u||^2 + N m/2 ||u||^2 - N int F(u);
/// zero (up to discretization) on limit-problem solutions. N is the run
/// dimension here, including the N=1 extension used by the closed-form checks.
double pohozaev_P(const Field& u, double m, int N, const Problem& problem);

double gamma_energy(const Field& u, const Problem& problem);
EnergyReport gamma_report(const Field& u, const Problem& problem);

/// L2 representer of the first variation of the penalized energy:
/// -Lap_h u + V(eps x) u - f(u) + penalty gradient.
Field residual(const Field& u, const Problem& problem);

/// Exact discrete H_eps^{-1} norm: solve (-Lap_h + V_eps) g = r and return
/// sqrt(<r, g>). Throws SolverError if the metric solve does not converge.
double dual_norm(const Field& r, const Problem& problem);

struct DualSolve {
    Field direction;  // g = A^{-1} r
    double dual = 0.0;
    int pcg_iters = 0;
};

DualSolve dual_solve(const Field& r, const Problem& problem);

}  // namespace snls
