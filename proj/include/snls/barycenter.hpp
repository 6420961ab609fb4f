#pragma once

#include "snls/linsolve.hpp"
#include "snls/model.hpp"

namespace snls {

struct BarycenterReport {
    std::array<double, 2> upsilon{0.0, 0.0};
    double denominator = 0.0;  // integral of the ball-mass gate over P
    bool degenerate = true;    // denominator below the 1e-8 floor
};

/// Quadrature of u^2 over grid nodes with |x - P| <= radius.
double ball_mass(const Field& u, std::array<double, 2> P, double radius);

/// Smoothed center of mass: Upsilon(u) = int d(u,P) P dP / int d(u,P) dP with
/// d(u,P) = psi(ball mass at P), the P-integral restricted to grid nodes.
/// Accumulated in anchored index form so grid-aligned shifts are bit-exact.
BarycenterReport barycenter(const Field& u, const Params& params);

/// Central finite-difference directional derivative of Upsilon at step
/// t = 1e-4 ||u||_eps / ||v||_eps. Throws on a degenerate barycenter.
std::array<double, 2> barycenter_directional(const Field& u, const Field& v,
                                             const Problem& problem);

struct PenaltyParts {
    BarycenterReport bary;
    double chi_mass = 0.0;  // int chi_{eps,u} u^2
    double value = 0.0;     // ((eps^{-1/2} chi_mass - 1)_+)^2
};

PenaltyParts penalty_parts(const Field& u, const Problem& problem);

/// Tail penalty ((eps^{-1/2} int chi_{eps,u} u^2 - 1)_+)^2. When the ball
/// gate is degenerate (the field is outside every Z set) the window opens
/// fully (chi = 1), the conservative extension; members never hit it.
double penalty(const Field& u, const Problem& problem);

/// L2 representer of the penalty first variation: the dominant term
/// 4 Phi^{1/2} eps^{-1/2} chi_{eps,u} u plus the correction from moving the
/// barycenter through the chi window (chain rule through Upsilon).
Field penalty_gradient(const Field& u, const Problem& problem);

}  // namespace snls
