#pragma once

#include "snls/barycenter.hpp"
#include "snls/limit.hpp"

namespace snls {

struct ManifoldFit {
    double dist = 0.0;
    int member = -1;
    std::array<double, 2> shift{0.0, 0.0};
};

/// Cutoff translate of a set member: x -> phi(eps(x - y)) U(x - y).
Field member_field(const S0Member& mem, std::array<double, 2> center, const Problem& problem);

/// H_eps distance to the sampled cutoff family, minimizing over members and
/// continuous shifts: coarse scan seeded at the barycenter, then per-axis
/// golden-section refinement. Ties break on (dist, member index, shift).
ManifoldFit manifold_distance(const Field& u, const GroundStateSet& s0, const Problem& problem);

/// u lies within manifold distance rho and has eps * barycenter within delta
/// of O. A degenerate barycenter is never a member.
bool zset_membership(const Field& u, double rho, double delta, const GroundStateSet& s0,
                     const Problem& problem);

}  // namespace snls
