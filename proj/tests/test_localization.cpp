#include "doctest.h"
#include "test_util.hpp"

#include "snls/barycenter.hpp"
#include "snls/limit.hpp"
#include "snls/manifold.hpp"

using namespace snls;
using namespace testutil;

TEST_CASE("ball_mass oracles") {
    Problem prob = constant_potential_problem(1.0, 40.0, 0.05);
    CHECK(ball_mass(Field(prob.grid), {0.0, 0.0}, 10.0) == 0.0);
    const Field u = soliton_field(prob.grid, 1.0, 3.0);
    CHECK(ball_mass(u, {3.0, 0.0}, 10.0) == doctest::Approx(4.0).epsilon(1e-3));
    CHECK(ball_mass(u, {-39.5, 0.0}, 0.4) < 1e-25);
}

TEST_CASE("barycenter of a centered bump and two-bump insensitivity") {
    Problem prob = constant_potential_problem(1.0, 40.0, 0.05);
    prob.params.r0 = 2.0;
    prob.params.rho1 = 2.8;

    const Field u = soliton_field(prob.grid, 1.0, 5.0);
    const BarycenterReport rep = barycenter(u, prob.params);
    REQUIRE_FALSE(rep.degenerate);
    CHECK(std::abs(rep.upsilon[0] - 5.0) <= prob.grid->spacing());

    // a 0.05-amplitude bump 30 away stays below the gate and contributes nothing
    Field two = u;
    const Grid& g = *prob.grid;
    for (int i = 0; i < g.n(); ++i) {
        const double x = g.coord(0, i);
        two.v[static_cast<std::size_t>(i)] += 0.05 * std::exp(-(x + 25.0) * (x + 25.0));
    }
    two.zero_boundary();
    const BarycenterReport rep2 = barycenter(two, prob.params);
    CHECK(rep2.upsilon[0] == doctest::Approx(rep.upsilon[0]).epsilon(1e-12));

    CHECK(barycenter(Field(prob.grid), prob.params).degenerate);
}

TEST_CASE("grid-shift equivariance is bit-exact on an exact-coordinate grid") {
    // power-of-two spacing: every node coordinate is exactly representable
    Problem prob = constant_potential_problem(1.0, 24.0, 0.0625);
    prob.params.r0 = 2.0;
    prob.params.rho1 = 2.8;
    const Grid& g = *prob.grid;
    REQUIRE(g.spacing() == 0.0625);

    const Field u = soliton_field(prob.grid, 1.3, -6.0);
    const int k = 160;  // shift by exactly 10.0
    Field shifted(prob.grid);
    for (int i = 0; i + k < g.n(); ++i)
        shifted.v[static_cast<std::size_t>(i + k)] = u.v[static_cast<std::size_t>(i)];
    shifted.zero_boundary();

    const BarycenterReport a = barycenter(u, prob.params);
    const BarycenterReport b = barycenter(shifted, prob.params);
    REQUIRE_FALSE(a.degenerate);
    // identical accumulators; only the final anchor-coordinate addition rounds
    CHECK(std::abs(b.upsilon[0] - (a.upsilon[0] + 10.0)) <=
          2.0 * std::numeric_limits<double>::epsilon() * 16.0);
    CHECK(b.denominator == a.denominator);
}

TEST_CASE("2d barycenter shift equivariance") {
    Problem prob = constant_potential_problem(1.0, 8.0, 0.125, 0.1, 2);
    prob.params.r0 = 1.5;
    prob.params.rho1 = 2.0;
    const Grid& g = *prob.grid;
    const Field u = Field::sample(prob.grid, [&](std::array<double, 2> x) {
        const double r2 = (x[0] + 2.0) * (x[0] + 2.0) + (x[1] + 1.0) * (x[1] + 1.0);
        return 2.5 * std::exp(-r2);
    });
    const int ki = 24, kj = 16;  // exactly (3.0, 2.0)
    Field shifted(prob.grid);
    for (int i = 0; i + ki < g.n(); ++i)
        for (int j = 0; j + kj < g.n(); ++j)
            shifted.v[g.index(i + ki, j + kj)] = u.v[g.index(i, j)];
    shifted.zero_boundary();
    const BarycenterReport a = barycenter(u, prob.params);
    const BarycenterReport b = barycenter(shifted, prob.params);
    REQUIRE_FALSE(a.degenerate);
    const double ulp = 2.0 * std::numeric_limits<double>::epsilon() * 8.0;
    CHECK(std::abs(b.upsilon[0] - (a.upsilon[0] + 3.0)) <= ulp);
    CHECK(std::abs(b.upsilon[1] - (a.upsilon[1] + 2.0)) <= ulp);
}

TEST_CASE("barycenter directional derivative") {
    Problem prob = constant_potential_problem(1.0, 40.0, 0.05);
    prob.params.r0 = 2.0;
    prob.params.rho1 = 2.8;
    const Field u = soliton_field(prob.grid, 1.0, 0.0);

    CHECK(barycenter_directional(u, Field(prob.grid), prob)[0] == 0.0);

    // support outside B(Upsilon, 4 r0) leaves the gated masses untouched
    const Field far = Field::sample(prob.grid, [&](std::array<double, 2> x) {
        return std::abs(x[0] - 20.0) < 4.0 ? 0.3 * std::exp(-(x[0] - 20.0) * (x[0] - 20.0)) : 0.0;
    });
    const auto d = barycenter_directional(u, far, prob);
    CHECK(d[0] == 0.0);

    const auto du = barycenter_directional(u, u, prob);
    CHECK(std::abs(du[0]) <= 5.0);  // sane scale; the recorded bound comes from build_s0

    CHECK_THROWS_AS(barycenter_directional(Field(prob.grid), u, prob), SolverError);
}

TEST_CASE("penalty oracles") {
    Problem prob = reference_problem(0.1);
    prob.params.r0 = 2.0;
    prob.params.rho1 = 2.8;
    const double eps = prob.params.eps;
    const double sqrte = std::sqrt(eps);

    // supported inside B(Upsilon, eps^{-1/2}): chi weight identically zero
    const Field core = soliton_field(prob.grid, 1.9, 0.0);
    Field inside(prob.grid);
    const Grid& g = *prob.grid;
    for (int i = 0; i < g.n(); ++i) {
        if (std::abs(g.coord(0, i)) < 1.0 / sqrte - 0.2)
            inside.v[static_cast<std::size_t>(i)] = core.v[static_cast<std::size_t>(i)];
    }
    inside.zero_boundary();
    CHECK(penalty(inside, prob) == 0.0);

    // shelf calibrated so the chi-weighted mass is exactly 2 sqrt(eps): phi = 1
    auto with_shelf = [&](double target_scaled_mass) {
        Field u = core;
        const BarycenterReport bary = barycenter(core, prob.params);
        double tail = 0.0;
        for (int i = 0; i < g.n(); ++i) {
            const double x = g.coord(0, i);
            tail += CutoffSpec::chi(sqrte * std::abs(x - bary.upsilon[0])) *
                    core.v[static_cast<std::size_t>(i)] * core.v[static_cast<std::size_t>(i)];
        }
        tail *= g.spacing();
        int count = 0;
        for (int i = 0; i < g.n(); ++i)
            if (g.coord(0, i) >= 15.0 && g.coord(0, i) <= 25.0) ++count;
        const double c2 = (target_scaled_mass * sqrte - tail) / (count * g.spacing());
        for (int i = 0; i < g.n(); ++i)
            if (g.coord(0, i) >= 15.0 && g.coord(0, i) <= 25.0)
                u.v[static_cast<std::size_t>(i)] = std::sqrt(c2);
        u.zero_boundary();
        return u;
    };

    const Field u_two = with_shelf(2.0);
    CHECK(penalty(u_two, prob) == doctest::Approx(1.0).epsilon(1e-9));
    // at the positive-part kink the clamp leaves at most fp noise
    const Field u_one = with_shelf(1.0);
    CHECK(penalty(u_one, prob) <= 1e-24);
    const Field u_below = with_shelf(0.999);
    CHECK(penalty(u_below, prob) == 0.0);
}

TEST_CASE("penalty ignores modifications inside the chi window") {
    Problem prob = reference_problem(0.1);
    prob.params.r0 = 2.0;
    prob.params.rho1 = 2.8;
    Field u = soliton_field(prob.grid, 1.9, 0.0);
    const Grid& g = *prob.grid;
    for (int i = 0; i < g.n(); ++i) {
        const double x = g.coord(0, i);
        if (x >= 15.0 && x <= 25.0) u.v[static_cast<std::size_t>(i)] += 0.3;
    }
    u.zero_boundary();
    const PenaltyParts before = penalty_parts(u, prob);
    REQUIRE(before.value > 0.0);

    // an even bump well inside B(Upsilon, eps^{-1/2}) keeps Upsilon and the
    // chi-weighted mass untouched
    Field inner = u;
    for (int i = 0; i < g.n(); ++i) {
        const double x = g.coord(0, i) - before.bary.upsilon[0];
        if (std::abs(x) < 1.5) inner.v[static_cast<std::size_t>(i)] += 0.05 * std::cos(x);
    }
    inner.zero_boundary();
    const PenaltyParts after = penalty_parts(inner, prob);
    CHECK(after.value == doctest::Approx(before.value).epsilon(1e-12));
}

TEST_CASE("penalty gradient: zero branch and the far-support pairing") {
    Problem prob = reference_problem(0.1);
    prob.params.r0 = 2.0;
    prob.params.rho1 = 2.8;
    const double eps = prob.params.eps;

    const Field core = soliton_field(prob.grid, 1.9, 0.0);
    const Field zero_grad = penalty_gradient(core, prob);
    for (double v : zero_grad.v) CHECK(v == 0.0);

    // activate the penalty with a far shelf
    Field u = core;
    const Grid& g = *prob.grid;
    for (int i = 0; i < g.n(); ++i) {
        const double x = g.coord(0, i);
        if (x >= 15.0 && x <= 25.0) u.v[static_cast<std::size_t>(i)] += 0.3;
    }
    u.zero_boundary();
    const PenaltyParts parts = penalty_parts(u, prob);
    REQUIRE(parts.value > 0.0);

    // v supported outside B(Upsilon, 4 r0): exact-equality branch
    const Field v = Field::sample(prob.grid, [&](std::array<double, 2> x) {
        const double d = x[0] - 19.0;
        return std::abs(d) < 3.0 ? std::cos(0.7 * d) * std::exp(-d * d / 4.0) : 0.0;
    });
    const Field pg = penalty_gradient(u, prob);
    double expect = 0.0;
    for (int i = 0; i < g.n(); ++i) {
        const double x = g.coord(0, i);
        expect += CutoffSpec::chi(std::sqrt(eps) * std::abs(x - parts.bary.upsilon[0])) *
                  u.v[static_cast<std::size_t>(i)] * v.v[static_cast<std::size_t>(i)];
    }
    expect *= 4.0 * std::sqrt(parts.value) / std::sqrt(eps) * g.spacing();
    CHECK(inner_l2(pg, v) == doctest::Approx(expect).epsilon(1e-11));
}

TEST_CASE("manifold distance: members, zero field, calibrated perturbation") {
    Problem prob = reference_problem(0.1);
    GroundStateSet s0 = build_s0(prob, 3, 1);
    s0.apply_constants(prob.params);

    // exact member
    const std::array<double, 2> y{4.0, 0.0};
    const Field mem = member_field(s0.members[1], y, prob);
    const ManifoldFit fit = manifold_distance(mem, s0, prob);
    CHECK(fit.dist <= 1e-6);
    CHECK(fit.member == 1);
    CHECK(fit.shift[0] == doctest::Approx(4.0).epsilon(1e-4));

    // zero field: distance is the smallest member norm over the searched shifts
    const ManifoldFit fit0 = manifold_distance(Field(prob.grid), s0, prob);
    double min_norm = 1e300;
    for (const auto& m : s0.members)
        min_norm = std::min(min_norm, energy_norm(prob, member_field(m, {0.0, 0.0}, prob)));
    CHECK(fit0.dist > 0.0);
    CHECK(fit0.dist <= min_norm * (1.0 + 1e-9));
    const Field best = member_field(s0.members[static_cast<std::size_t>(fit0.member)],
                                    fit0.shift, prob);
    CHECK(fit0.dist == doctest::Approx(energy_norm(prob, best)).epsilon(1e-9));

    // member plus a normalized near-orthogonal perturbation of size rho
    const double rho = 0.12;
    Field w = Field::sample(prob.grid, [&](std::array<double, 2> x) {
        const double d = x[0] - 4.0;
        return std::sin(2.1 * d) * std::exp(-d * d / 6.0);
    });
    // remove the translation tangent
    Field tang(prob.grid);
    const Grid& g = *prob.grid;
    for (int i = 1; i < g.n() - 1; ++i)
        tang.v[static_cast<std::size_t>(i)] =
            (mem.v[static_cast<std::size_t>(i + 1)] - mem.v[static_cast<std::size_t>(i - 1)]) /
            (2.0 * g.spacing());
    const double c = energy_inner(prob, w, tang) / energy_inner(prob, tang, tang);
    for (std::size_t k = 0; k < w.size(); ++k) w.v[k] -= c * tang.v[k];
    const double wn = energy_norm(prob, w);
    Field u = mem;
    for (std::size_t k = 0; k < u.size(); ++k) u.v[k] += rho / wn * w.v[k];
    const double d = manifold_distance(u, s0, prob).dist;
    CHECK(d == doctest::Approx(rho).epsilon(0.10));
}

TEST_CASE("z-set membership") {
    Problem prob = reference_problem(0.1);
    GroundStateSet s0 = build_s0(prob, 3, 1);
    s0.apply_constants(prob.params);
    const Params& pp = prob.params;

    // member centered so eps * Upsilon sits at the potential maximum
    const Field mem = member_field(s0.reference_member(), {0.0, 0.0}, prob);
    CHECK(zset_membership(mem, pp.rho1 / 16.0, pp.delta0, s0, prob));

    // shifted so eps * Upsilon is ~2 delta0 outside O: fails the delta clause
    const double z_out = (pp.o_region.hi[0] + 2.0 * pp.delta0) / pp.eps;
    const Field far = member_field(s0.reference_member(), {z_out, 0.0}, prob);
    CHECK_FALSE(zset_membership(far, pp.rho1 / 16.0, pp.delta0, s0, prob));
    CHECK(zset_membership(far, pp.rho1 / 16.0, 3.0 * pp.delta0, s0, prob));

    CHECK_FALSE(zset_membership(Field(prob.grid), pp.rho1, 3.0 * pp.delta0, s0, prob));
}
