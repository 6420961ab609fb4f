#pragma once

#include "snls/model.hpp"

namespace snls {

/// out = (-Lap_h + V(eps x)) u at interior nodes, standard (2d+1)-point
/// stencil; boundary rows are identity on the zero boundary values.
void apply_operator(const Problem& problem, const std::vector<double>& u, std::vector<double>& out);

/// <A u, u> h^d as the link sum: sum over grid edges of (du)^2 h^{d-2} plus
/// the V(eps x)-weighted mass. This is the quadratic form whose exact
/// gradient is the stencil operator.
double energy_norm_sq(const Problem& problem, const Field& u);
inline double energy_norm(const Problem& problem, const Field& u) {
    return std::sqrt(std::max(0.0, energy_norm_sq(problem, u)));
}

/// Difference norm ||a - b||_eps without materializing the difference.
double energy_dist(const Problem& problem, const Field& a, const Field& b);

/// Energy inner product <A a, b> h^d.
double energy_inner(const Problem& problem, const Field& a, const Field& b);

struct PcgResult {
    int iters = 0;
    double rel_residual = 0.0;
    bool converged = false;
};

/// Jacobi-preconditioned conjugate gradient for A x = rhs with
/// A = -Lap_h + V(eps x) (SPD since inf V > 0). x is overwritten; the
/// initial guess is whatever x holds on entry.
PcgResult pcg_solve(const Problem& problem, const std::vector<double>& rhs, std::vector<double>& x,
                    double rel_tol, int max_iters);

}  // namespace snls
