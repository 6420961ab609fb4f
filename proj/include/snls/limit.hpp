#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "snls/functionals.hpp"
#include "snls/model.hpp"

namespace snls {

/// Radially symmetric profile on a uniform r-table with an exponential tail
/// continuation past the table end.
struct RadialProfile {
    double dr = 0.0;
    std::vector<double> u;
    double tail_rate = 1.0;  // sqrt(m): u ~ e^{-tail_rate r} beyond the table
    int dim = 1;

    double rmax() const { return dr * static_cast<double>(u.size() - 1); }
    double amplitude() const { return u.empty() ? 0.0 : u.front(); }

    double eval(double r) const {
        if (r < 0.0) r = -r;
        const double t = r / dr;
        const auto i = static_cast<std::size_t>(t);
        if (i + 1 < u.size()) {
            const double w = t - static_cast<double>(i);
            return u[i] * (1.0 - w) + u[i + 1] * w;
        }
        return u.back() * std::exp(-tail_rate * (r - rmax()));
    }

    /// Radius beyond which the profile drops below `floor` times the peak.
    double support_radius(double floor = 1e-10) const;

    /// Profile of x -> u(e^{-theta} x): same table, rescaled spacing.
    RadialProfile dilated(double theta) const {
        RadialProfile out = *this;
        out.dr = dr * std::exp(theta);
        out.tail_rate = tail_rate * std::exp(-theta);
        return out;
    }

    /// Tail mass int_{|x|>R} u^2 with the d-dimensional radial measure.
    double tail_mass(double R) const;
    /// Ball mass int_{|x|<=R} u^2.
    double ball_mass(double R) const;
};

/// Ground state of -Lap U + m U = f(U): positive, radial, decaying.
struct GroundState {
    double m = 0.0;
    RadialProfile radial;
    Field field;  // sampled on the build grid, Newton-polished for d=1
    double level = 0.0;
    double mass = 0.0;
    double poho_rel = 0.0;    // |P_m| relative to the kinetic term
    double decay_rate = 0.0;  // fitted log-slope magnitude
    double amplitude = 0.0;
};

/// Solve the limit problem by shooting on the radial ODE with bisection on
/// the central amplitude (d=2 adds the u'/r term with a series start at 0).
/// Throws SolverError if no overshoot bracket exists, which signals an (F3)
/// failure at this m.
GroundState ground_state(double m, const Problem& problem);

/// Tridiagonal Newton polish of a d=1 field toward the discrete critical
/// point of L_m; returns the final sup-norm residual. The input must be even
/// about the center node (the solve is on the half line, pinning the
/// near-degenerate translation mode).
double newton_refine(Field& u, double m, const Problem& problem, int max_iters = 40);

/// Same polish against the full rescaled potential V(eps x).
double newton_refine_full(Field& u, const Problem& problem, int max_iters = 40);

/// Least-energy curve; ms must be strictly increasing and the produced
/// levels are asserted strictly increasing.
std::vector<std::pair<double, double>> energy_curve(const std::vector<double>& ms,
                                                    const Problem& problem);

struct DilationResult {
    Field field;
    bool support_clipped = false;
};

/// s * U0(e^{-theta} x) resampled on the grid by linear interpolation.
DilationResult dilation_path(const GroundState& U0, double theta, double s,
                             const Problem& problem);

/// Translate of a (possibly dilated, cutoff) member profile:
///   x -> amp * phi(eps |z|) * U(|z|),  z = scale * (x - center),
/// with the phi cutoff optional.
Field sampled_translate(const RadialProfile& profile, std::array<double, 2> center, double amp,
                        double scale, const Problem& problem, bool with_phi_cutoff);

struct S0Member {
    GroundState gs;
    double theta = 0.0;  // dilation (always 0 for d=1 members)
    bool is_dilation = false;
};

/// Finite sample of the ground-state family with the localization constants
/// computed from the members' decay.
struct GroundStateSet {
    int dim = 1;
    double v0 = 0.0;
    double delta0 = 0.0;
    std::vector<S0Member> members;
    std::vector<double> m_samples;

    double r0 = 0.0;
    double rho1 = 0.0;
    double rho0 = 0.0;
    double rho2 = 0.0;
    double d1_bound = 0.0;
    double theta0 = 0.0;  // d=2 dilation sampling width
    double e_v0 = 0.0;
    double e_v0_minus_delta = 0.0;
    double inf_v_on_o5delta = 0.0;
    double support_max = 0.0;

    const S0Member& reference_member() const;  // m = V0, theta = 0

    void apply_constants(Params& params) const;
};

/// Build the sampled set: ground states at m in {V0-delta0,...,V0}
/// (dilations added for d=2), the (r0, rho1) pair iterated to joint
/// consistency from the members' tails, the empirical mass floor rho2, and a
/// seeded estimate of the barycenter derivative bound.
GroundStateSet build_s0(const Problem& problem, int m_count = 3, std::uint64_t seed = 1);

/// Directory persistence: one snapshot per member plus a JSON manifest with
/// the radial tables and constants.
void save_s0(const GroundStateSet& s0, const std::string& dir, std::uint64_t config_digest);
GroundStateSet load_s0(const std::string& dir, const Problem& problem);

}  // namespace snls
