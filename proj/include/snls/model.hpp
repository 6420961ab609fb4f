#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "snls/cutoffs.hpp"
#include "snls/grid.hpp"

namespace snls {

/// Axis-aligned box in original (unscaled) coordinates.
struct BoxRegion {
    std::array<double, 2> lo{0.0, 0.0};
    std::array<double, 2> hi{0.0, 0.0};

    static BoxRegion interval(double a, double b) { return {{a, 0.0}, {b, 0.0}}; }
    static BoxRegion square(std::array<double, 2> lo, std::array<double, 2> hi) { return {lo, hi}; }

    bool contains(std::array<double, 2> x, int dim) const {
        for (int a = 0; a < dim; ++a)
            if (x[a] < lo[a] || x[a] > hi[a]) return false;
        return true;
    }

    /// Euclidean distance to the box (0 inside).
    double distance(std::array<double, 2> x, int dim) const {
        double s = 0.0;
        for (int a = 0; a < dim; ++a) {
            const double d = std::max({lo[a] - x[a], x[a] - hi[a], 0.0});
            s += d * d;
        }
        return std::sqrt(s);
    }

    BoxRegion expanded(double delta) const {
        BoxRegion b = *this;
        for (int a = 0; a < 2; ++a) {
            b.lo[a] -= delta;
            b.hi[a] += delta;
        }
        return b;
    }

    bool inside(const BoxRegion& outer, int dim) const {
        for (int a = 0; a < dim; ++a)
            if (lo[a] < outer.lo[a] || hi[a] > outer.hi[a]) return false;
        return true;
    }
};

/// Potential V with positive infimum and an interior maximum over Omega_hat.
class Potential {
public:
    enum class Kind { GaussianBump, Tabulated };

    /// V(x) = v_inf + amplitude * exp(-|x - center|^2 / width^2)
    static Potential gaussian_bump(double v_inf, double amplitude, std::array<double, 2> center,
                                   double width);

    /// Values on a uniform lattice over `domain`; multilinear interpolation,
    /// clamped outside, centered finite-difference gradient.
    static Potential tabulated(int dim, BoxRegion domain, int samples_per_axis,
                               std::vector<double> values, double v_inf);

    double value(std::array<double, 2> x) const;
    std::array<double, 2> gradient(std::array<double, 2> x) const;

    Kind kind() const { return kind_; }
    bool analytic_gradient() const { return kind_ == Kind::GaussianBump; }
    double v_inf() const { return v_inf_; }
    double amplitude() const { return amplitude_; }

    /// Maximum value and its location over Omega_hat (analytic for the bump,
    /// a lattice argmax for tabulated data).
    double v0() const { return v0_; }
    std::array<double, 2> x_max() const { return x0_; }

private:
    Kind kind_ = Kind::GaussianBump;
    double v_inf_ = 1.0;
    double amplitude_ = 1.0;
    std::array<double, 2> center_{0.0, 0.0};
    double width_ = 1.0;
    double v0_ = 2.0;
    std::array<double, 2> x0_{0.0, 0.0};
    // tabulated data
    int dim_ = 1;
    BoxRegion domain_;
    int samples_ = 0;
    std::vector<double> table_;

    double table_value(std::array<double, 2> x) const;
};

struct PotentialCheck {
    double min_v = 0.0;           // over the Omega_hat sample
    double boundary_max = 0.0;    // max V on the sampled boundary of Omega_hat
    double annulus_min_grad = 0.0;  // min |grad V| over sampled O^{3 delta0} \ O
};

/// Sampling checks for (V1)-(V3); throws ConfigError on violation.
PotentialCheck validate_potential(const Potential& pot, int dim, const BoxRegion& omega_hat,
                                  const BoxRegion& o_region, double delta0,
                                  int samples_per_axis = 801);

/// Superlinear nonlinearity f(t) = t^{p-1} for t >= 0 (0 for t < 0), with an
/// optional amplitude truncation: f is clamped to f(2K) above 2K and F
/// continues affinely so it stays the exact antiderivative.
class Nonlinearity {
public:
    static Nonlinearity power(double p);

    double f(double t) const;
    double F(double t) const;
    double df(double t) const;

    double p() const { return p_; }
    bool truncated() const { return clamp_at_ < std::numeric_limits<double>::infinity(); }
    double clamp_at() const { return clamp_at_; }   // 2K
    double f_bound() const { return f_bound_; }     // K_tilde = f(2K)

private:
    double p_ = 4.0;
    double clamp_at_ = std::numeric_limits<double>::infinity();
    double f_bound_ = std::numeric_limits<double>::infinity();
    double F_at_clamp_ = 0.0;

    friend Nonlinearity truncate_nonlinearity(const Nonlinearity& f, double K);
};

Nonlinearity truncate_nonlinearity(const Nonlinearity& f, double K);

struct SolverOptions {
    // descent stop: dual residual below
    //   stop_tol0 + stop_tol2 eps^2 + stop_tole exp(-stop_tolw / eps),
    // the pilot-calibrated envelope of the Palais-Smale floor along the
    // initial family (the exponential term tracks the phi_eps truncation)
    double stop_tol0 = 7.0e-3;
    double stop_tol2 = 2.0;
    double stop_tole = 3.2;
    double stop_tolw = 0.495;
    int max_steps = 400;
    int trace_stride = 1;
    double linear_tol = 1.0e-8;  // relative tolerance of the metric solves
    int linear_max_iters = 50000;
    double armijo = 1.0e-4;
    double backtrack = 0.5;
    double backtrack_floor = 1.0e-12;
};

/// Every constant the rest of the system reads. The manifold-scale constants
/// (r0, rho1, rho0, rho2, d1_bound) are produced by build_s0 and copied here.
struct Params {
    double eps = 0.1;
    double delta0 = 0.1;
    BoxRegion o_region;
    double theta1 = 0.2;  // path amplitude rate, in (0, 1/2)
    double t0 = 3.0;      // witness for F(t0) > V0 t0^2 / 2

    double r0 = 0.0;      // barycenter ball radius
    double rho1 = 0.0;    // manifold distance scale
    double rho0 = 0.0;    // = min(rho1/16, rho2/2)
    double rho2 = 0.0;    // empirical mass floor
    double d1_bound = 0.0;  // recorded bound on the barycenter derivative

    SolverOptions solver;

    double stop_tol() const {
        return solver.stop_tol0 + solver.stop_tol2 * eps * eps +
               solver.stop_tole * std::exp(-solver.stop_tolw / eps);
    }
    CutoffSpec cutoffs() const { return CutoffSpec::from(rho1, delta0); }
};

/// Bundle of grid, potential, nonlinearity and parameters, with V(eps x)
/// cached at the nodes. Value-semantic snapshot: all evaluation is pure.
struct Problem {
    GridPtr grid;
    Potential potential;
    Nonlinearity f;
    Params params;
    BoxRegion omega_hat;
    std::vector<double> veps;

    void refresh_veps();
    double veps_at(std::size_t k) const { return veps[k]; }
    int dim() const { return grid->dim(); }
};

struct NormReport {
    double l2 = 0.0;
    double h1 = 0.0;
    double he = 0.0;
};

/// L2, H1 and the V(eps x)-weighted energy norm, central-difference gradient
/// quadrature. Throws on non-finite input.
NormReport norms(const Field& u, const Problem& problem);

double l2_norm_sq(const Field& u);
double inner_l2(const Field& a, const Field& b);

}  // namespace snls
