#include "doctest.h"
#include "test_util.hpp"

#include "snls/limit.hpp"

using namespace snls;
using namespace testutil;

TEST_CASE("1d ground states match the sech closed forms") {
    // finer grid for the level quadrature
    const Problem prob = constant_potential_problem(2.0, 40.0, 0.025);

    const GroundState g1 = ground_state(1.0, prob);
    CHECK(g1.amplitude == doctest::Approx(std::sqrt(2.0)).epsilon(1e-3));
    CHECK(g1.level == doctest::Approx(soliton_energy(1.0)).epsilon(1e-3));
    CHECK(g1.mass == doctest::Approx(soliton_mass(1.0)).epsilon(1e-3));
    CHECK(g1.poho_rel <= 1e-3);

    const GroundState g2 = ground_state(2.0, prob);
    CHECK(g2.amplitude == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(g2.level == doctest::Approx(soliton_energy(2.0)).epsilon(1e-3));
    CHECK(g2.poho_rel <= 1e-3);

    CHECK_THROWS_AS(ground_state(-1.0, prob), ConfigError);
    CHECK_THROWS_AS(ground_state(2.5, prob), ConfigError);
}

TEST_CASE("exponential decay of the profiles") {
    const Problem prob = constant_potential_problem(2.0, 40.0, 0.05);
    auto fitted_rate = [&](const GroundState& gs, double lo, double hi) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = 0;
        for (double r = lo; r <= hi; r += 0.05) {
            const double u = gs.radial.eval(r);
            if (u <= 0.0) continue;
            const double y = std::log(u);
            sx += r;
            sy += y;
            sxx += r * r;
            sxy += r * y;
            ++n;
        }
        return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
    };
    const GroundState g1 = ground_state(1.0, prob);
    const double c1 = fitted_rate(g1, 6.0, 12.0);  // window [L/3, 2L/3] for L = 18
    CHECK(c1 >= 0.95);
    CHECK(c1 <= 1.05);
    const GroundState g2 = ground_state(2.0, prob);
    const double c2 = fitted_rate(g2, 4.0, 8.0);  // window for L = 12
    CHECK(c2 >= 0.95 * std::sqrt(2.0));
    CHECK(c2 <= 1.05 * std::sqrt(2.0));
}

TEST_CASE("energy curve is strictly increasing") {
    const Problem prob = constant_potential_problem(2.0, 40.0, 0.05);
    const auto curve = energy_curve({1.0, 1.5, 2.0}, prob);
    CHECK(curve[0].second == doctest::Approx(4.0 / 3.0).epsilon(2e-3));
    CHECK(curve[1].second == doctest::Approx(soliton_energy(1.5)).epsilon(2e-3));
    CHECK(curve[2].second == doctest::Approx(soliton_energy(2.0)).epsilon(2e-3));
    CHECK(curve[1].second > curve[0].second);
    CHECK(curve[2].second > curve[1].second);

    CHECK_THROWS_AS(energy_curve({}, prob), ConfigError);
    CHECK_THROWS_AS(energy_curve({1.0, 0.5}, prob), ConfigError);
    CHECK_NOTHROW(energy_curve({1.7}, prob));
}

TEST_CASE("dilation paths") {
    const Problem prob = constant_potential_problem(2.0, 40.0, 0.05);
    const GroundState g1 = ground_state(1.0, prob);

    const DilationResult ident = dilation_path(g1, 0.0, 1.0, prob);
    CHECK_FALSE(ident.support_clipped);
    // identical to the raw resample; within the polish scale of the grid field
    const Field resample =
        sampled_translate(g1.radial, prob.grid->offset(), 1.0, 1.0, prob, false);
    for (std::size_t k = 0; k < ident.field.size(); ++k)
        CHECK(ident.field.v[k] == resample.v[k]);
    double sup = 0.0;
    for (std::size_t k = 0; k < ident.field.size(); ++k)
        sup = std::max(sup, std::abs(ident.field.v[k] - g1.field.v[k]));
    CHECK(sup < 1e-3);

    const DilationResult zero = dilation_path(g1, 0.3, 0.0, prob);
    CHECK(limit_energy_L(zero.field, 1.0, prob) == 0.0);

    const DilationResult d = dilation_path(g1, 0.3, 1.0, prob);
    const double expect = 2.0 / 3.0 * (std::exp(0.3) - std::exp(-0.3));
    CHECK(pohozaev_P(d.field, 1.0, 1, prob) == doctest::Approx(expect).epsilon(0.01));

    CHECK(dilation_path(g1, 1.5, 1.0, prob).support_clipped);
}

TEST_CASE("1d dilation sign structure: P increasing through 0") {
    const Problem prob = constant_potential_problem(2.0, 40.0, 0.05);
    const GroundState g1 = ground_state(1.0, prob);
    double prev = -1e300;
    for (double theta : {-0.3, -0.1, 0.0, 0.1, 0.3}) {
        const double p = pohozaev_P(dilation_path(g1, theta, 1.0, prob).field, 1.0, 1, prob);
        CHECK(p > prev);
        prev = p;
        if (theta < 0.0) CHECK(p < 0.0);
        if (theta > 0.0) CHECK(p > 0.0);
    }
}

TEST_CASE("build_s0 constants and persistence") {
    const Problem prob = reference_problem(0.1);
    const GroundStateSet s0 = build_s0(prob, 3, 1);

    CHECK(s0.members.size() == 3);
    CHECK(s0.m_samples.front() == doctest::Approx(1.3));
    CHECK(s0.m_samples.back() == doctest::Approx(2.0));
    CHECK(2.0 * s0.e_v0_minus_delta > s0.e_v0);
    CHECK(s0.e_v0 == doctest::Approx(soliton_energy(2.0)).epsilon(2e-3));
    CHECK(s0.r0 >= 1.0);
    CHECK(s0.rho1 > 0.0);
    CHECK(s0.rho0 <= s0.rho1 / 16.0 + 1e-12);
    CHECK(s0.rho0 <= std::min(s0.rho1, s0.rho2) / 2.0);
    CHECK(s0.d1_bound > 0.0);
    CHECK(s0.support_max < prob.grid->halfwidth());

    // the two clauses defining (r0, rho1)
    for (const auto& mem : s0.members) {
        CHECK(std::sqrt(mem.gs.radial.ball_mass(s0.r0 / 2.0)) > 0.75 * s0.rho1);
        CHECK(std::sqrt(mem.gs.radial.tail_mass(s0.r0)) < s0.rho1 / 8.0);
        if (!mem.is_dilation) CHECK(mem.gs.poho_rel <= 1e-3);
    }

    const std::string dir = fresh_dir("s0_persist");
    save_s0(s0, dir, 123);
    const GroundStateSet back = load_s0(dir, prob);
    CHECK(back.members.size() == s0.members.size());
    CHECK(back.r0 == s0.r0);
    CHECK(back.rho1 == s0.rho1);
    CHECK(back.rho0 == s0.rho0);
    CHECK(back.d1_bound == s0.d1_bound);
    CHECK(back.members[2].gs.level == doctest::Approx(s0.members[2].gs.level).epsilon(1e-9));

    CHECK_THROWS_AS(load_s0(fresh_dir("s0_missing"), prob), SolverError);
}

TEST_CASE("degenerate delta request yields a singleton set") {
    const Problem prob = reference_problem(0.1);
    const GroundStateSet s0 = build_s0(prob, 1, 1);
    CHECK(s0.members.size() == 1);
    CHECK(s0.members[0].gs.m == doctest::Approx(2.0));
}

TEST_CASE("2d ground state invariants") {
    const Problem prob = constant_potential_problem(1.0, 14.0, 0.1, 0.1, 2);
    const GroundState g = ground_state(1.0, prob);
    CHECK(g.amplitude > 2.0);
    CHECK(g.amplitude < 2.4);
    CHECK(g.poho_rel <= 2e-3);
    // 2d cubic: Pohozaev + Nehari give E = m ||U||^2 / 2
    CHECK(g.level == doctest::Approx(0.5 * g.mass).epsilon(5e-3));
    CHECK(g.decay_rate == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("2d set includes dilations at the recorded theta0") {
    Problem prob = constant_potential_problem(2.0, 14.0, 0.1, 0.1, 2);
    const GroundStateSet s0 = build_s0(prob, 2, 1);
    CHECK(s0.theta0 > 0.0);
    int dilations = 0;
    for (const auto& mem : s0.members) {
        if (mem.is_dilation) {
            ++dilations;
            CHECK(std::abs(mem.theta) == doctest::Approx(s0.theta0));
        }
    }
    CHECK(dilations == 4);
    CHECK(s0.members.size() == 6);
}
