#pragma once

#include <cmath>

namespace snls {

/// Quintic smoothstep 6t^5 - 15t^4 + 10t^3, clamped to [0,1].
/// C^2, monotone, max slope 15/8 on [0,1].
inline double smoothstep(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

inline double smoothstep_prime(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    const double a = t * (1.0 - t);
    return 30.0 * a * a;
}

/// The three cutoff profiles used by the localization machinery.
/// psi: ball-mass gate, 0 on [0, rho1^2/16], 1 on [rho1^2/2, inf).
/// phi: spatial concentration cutoff, 1 for |x| <= delta0/2, 0 for |x| >= delta0
///      (slope <= 15/(4 delta0) < 4/delta0).
/// chi: far-field indicator, 0 on B(0,1), 1 outside B(0,2) (slope <= 15/8 < 2).
struct CutoffSpec {
    double psi_lo = 0.0;  // rho1^2/16
    double psi_hi = 0.0;  // rho1^2/2
    double delta0 = 0.0;

    static CutoffSpec from(double rho1, double delta0) {
        CutoffSpec c;
        c.psi_lo = rho1 * rho1 / 16.0;
        c.psi_hi = rho1 * rho1 / 2.0;
        c.delta0 = delta0;
        return c;
    }

    double psi(double r) const { return smoothstep((r - psi_lo) / (psi_hi - psi_lo)); }
    double psi_prime(double r) const {
        return smoothstep_prime((r - psi_lo) / (psi_hi - psi_lo)) / (psi_hi - psi_lo);
    }

    double phi(double radius) const {
        return 1.0 - smoothstep((radius - delta0 / 2.0) / (delta0 / 2.0));
    }

    static double chi(double radius) { return smoothstep(radius - 1.0); }
    static double chi_prime(double radius) { return smoothstep_prime(radius - 1.0); }
};

}  // namespace snls
