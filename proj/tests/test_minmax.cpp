#include "doctest.h"
#include "test_util.hpp"

#include "snls/minmax.hpp"

using namespace snls;
using namespace testutil;

TEST_CASE("amplitude profile") {
    CHECK(theta_profile(0.0, 0.2) == 1.0);
    CHECK(theta_profile(-1.0, 0.2) == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(theta_profile(1.0, 0.2) == doctest::Approx(1.2).epsilon(1e-14));
    CHECK(theta_profile(-0.5, 0.2) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(theta_profile(0.5, 0.2) == doctest::Approx(1.0).epsilon(1e-14));
    // continuity across the kinks
    CHECK(theta_profile(-0.5 - 1e-9, 0.2) == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(theta_profile(0.5 + 1e-9, 0.2) == doctest::Approx(1.0).epsilon(1e-7));
    CHECK_THROWS_AS(theta_profile(1.5, 0.2), ConfigError);
    CHECK_THROWS_AS(theta_profile(0.0, 0.7), ConfigError);
}

namespace {

struct Fixture {
    Problem prob;
    GroundStateSet s0;
    Fixture() : prob(reference_problem(0.1)) {
        s0 = build_s0(prob, 3, 1);
        s0.apply_constants(prob.params);
    }
};

}  // namespace

TEST_CASE("initial path points") {
    Fixture fx;
    const PathPoint pt = initial_path({0.03, 0.0}, 0.0, fx.prob, fx.s0);
    CHECK(std::abs(pt.gamma - 3.7712) < 0.1);
    CHECK(std::abs(pt.eps_ups[0] - pt.p[0]) < 1e-9);  // node-aligned translate
    CHECK_FALSE(pt.bary_degenerate);

    // endpoint orientation: P > 0 at s=-1, P < 0 at s=+1, for every p
    for (double p : {-0.87, 0.03, 0.93}) {
        CHECK(initial_path({p, 0.0}, -1.0, fx.prob, fx.s0).poho_v0 > 0.0);
        CHECK(initial_path({p, 0.0}, 1.0, fx.prob, fx.s0).poho_v0 < 0.0);
    }

    // P is independent of p along the family (node-aligned translates)
    const double p_ref = initial_path({0.03, 0.0}, -1.0, fx.prob, fx.s0).poho_v0;
    for (double p : {-0.87, -0.42, 0.48, 0.93}) {
        CHECK(std::abs(initial_path({p, 0.0}, -1.0, fx.prob, fx.s0).poho_v0 - p_ref) <= 1e-6);
    }

    CHECK_THROWS_AS(initial_path({2.0, 0.0}, 0.0, fx.prob, fx.s0), ConfigError);
}

TEST_CASE("path level and its boundary margin") {
    Fixture fx;
    const PathLevel pl = path_level(fx.prob, fx.s0, 9, 33, 1);
    CHECK(pl.c_eps == doctest::Approx(3.7712).epsilon(0.05));
    CHECK(pl.margin > 0.0);
    CHECK(pl.boundary_max < pl.c_eps);
    CHECK(pl.endpoint_signs_ok);
    CHECK(pl.used_theta1 == doctest::Approx(0.2));
    CHECK(pl.argmax.p[0] == doctest::Approx(0.03).epsilon(1e-9));
    CHECK(pl.max_center_offset <= 0.2 * fx.prob.params.eps);
    CHECK(pl.table.size() == 9 * 33);

    const PathLevel single = path_level(fx.prob, fx.s0, 1, 1, 1);
    CHECK(single.table.size() == 1);
    CHECK(single.c_eps == doctest::Approx(single.argmax.gamma));
}

TEST_CASE("degree map components") {
    // symmetric O variant so the map is centered
    Config cfg = Config::parse(std::string(kReferenceConfig) +
                               "\n[params]\no_lo = -0.2\no_hi = 0.2\n");
    Problem prob = cfg.make_problem(0.1);
    GroundStateSet s0 = build_s0(prob, 3, 1);
    s0.apply_constants(prob.params);

    const auto center = degree_map({0.0, 0.0}, 0.0, prob, s0, 0);
    REQUIRE(center.size() == 2);
    CHECK(std::abs(center[0]) < 1e-9);
    CHECK(std::abs(center[1]) < 0.05);

    CHECK(degree_map({0.0, 0.0}, -1.0, prob, s0, 0)[1] > 0.0);
    CHECK(degree_map({0.0, 0.0}, 1.0, prob, s0, 0)[1] < 0.0);

    // p on the boundary of O^{delta0}: first component stays away from 0
    const double edge = 0.2 + prob.params.delta0;
    const auto at_edge = degree_map({edge, 0.0}, 0.0, prob, s0, 0);
    CHECK(std::abs(at_edge[0]) >= edge - 0.05);
}

TEST_CASE("winding numbers of synthetic loops") {
    auto circle = [&](int n, bool flip) {
        std::vector<std::array<double, 2>> loop;
        for (int i = 0; i < n; ++i) {
            const double t = 2.0 * M_PI * i / n;
            loop.push_back({std::cos(t), flip ? -std::sin(t) : std::sin(t)});
        }
        return loop;
    };
    CHECK(winding_degree(circle(64, false)) == 1);
    CHECK(winding_degree(circle(64, true)) == -1);
    CHECK(winding_degree(circle(128, false)) == 1);  // refinement invariance
    CHECK_THROWS_AS(winding_degree(circle(3, false)), SolverError);  // jumps of 2pi/3

    std::vector<std::array<double, 2>> through_origin = {{1.0, 0.0}, {0.0, 0.0}, {-1.0, 1.0}};
    CHECK_THROWS_AS(winding_degree(through_origin), SolverError);

    // an off-center loop that misses the origin winds zero times
    std::vector<std::array<double, 2>> off;
    for (int i = 0; i < 64; ++i) {
        const double t = 2.0 * M_PI * i / 64;
        off.push_back({3.0 + std::cos(t), std::sin(t)});
    }
    CHECK(winding_degree(off) == 0);
}

TEST_CASE("degree of the boundary loop is -1 and refinement-stable") {
    Fixture fx;
    const auto loop = degree_boundary_loop(fx.prob, fx.s0, 256, 0, 1);
    CHECK(loop.size() >= 256);
    const int deg = winding_degree(loop);
    CHECK(std::abs(deg) == 1);
    CHECK(deg == -1);  // the d=1 amplitude orientation reproduces the printed sign
    const auto finer = degree_boundary_loop(fx.prob, fx.s0, 512, 0, 2);
    CHECK(winding_degree(finer) == deg);
}

TEST_CASE("solve pipeline at eps = 0.1") {
    Fixture fx;
    MinmaxOptions opts;
    const SolveResult res = solve(fx.prob, fx.s0, opts);
    const SolveRecord& rec = res.record;
    CHECK(rec.termination == "converged");
    CHECK(rec.phi == 0.0);
    CHECK(rec.dual < rec.stop_tol);
    CHECK(rec.dist_vmax <= 0.5);
    CHECK(std::abs(rec.gamma - 3.7712) < 0.1);
    CHECK(rec.in_confined_zset);
    CHECK(rec.start_in_working_set);
    CHECK(rec.decay_fit_r2 >= 0.99);
    CHECK(rec.decay_rate > 0.0);
    CHECK(rec.boundary_margin > 0.0);
    CHECK(rec.chi_mass_scaled <= std::sqrt(rec.phi) + 1.0);  // the chi-mass energy bound
}

TEST_CASE("solve refuses an inadequate box") {
    Config cfg = Config::parse(std::string(kReferenceConfig) +
                               "\n[grid]\nbox_halfwidth = 3.8\nmin_halfwidth_rescaled = 1.0\n");
    Problem prob = cfg.make_problem(0.55);
    GroundStateSet s0 = build_s0(prob, 1, 1);
    s0.apply_constants(prob.params);
    MinmaxOptions opts;
    CHECK_THROWS_AS(solve(prob, s0, opts), SolverError);
}

TEST_CASE("parallel path evaluation is bit-identical to sequential") {
    Fixture fx;
    const PathLevel seq = path_level(fx.prob, fx.s0, 5, 9, 1);
    const PathLevel par = path_level(fx.prob, fx.s0, 5, 9, 2);
    CHECK(seq.c_eps == par.c_eps);
    CHECK(seq.argmax.p[0] == par.argmax.p[0]);
    CHECK(seq.argmax.s == par.argmax.s);
    REQUIRE(seq.table.size() == par.table.size());
    for (std::size_t i = 0; i < seq.table.size(); ++i)
        CHECK(seq.table[i].gamma == par.table[i].gamma);
}

TEST_CASE("2d path: printed branch, endpoint signs, level near the limit") {
    const char* conf2d = R"(
[grid]
dim = 2
h = 0.2
box_halfwidth = 3.0
min_halfwidth_rescaled = 12.0

[potential]
kind = gaussian-bump
v_inf = 1.0
amplitude = 1.0
center = 0.0, 0.0
width = 1.0

[nonlinearity]
kind = power
p = 4.0
truncation = 8.0

[params]
eps = 0.2
delta0 = 0.55
o_lo = -0.15, -0.15
o_hi = 0.15, 0.15
theta1 = 0.2
t0 = 3.0
)";
    Config cfg = Config::parse(conf2d, "2d");
    Problem prob = cfg.make_problem(0.2);
    GroundStateSet s0 = build_s0(prob, 2, 1);
    s0.apply_constants(prob.params);
    REQUIRE(s0.dim == 2);

    // 2d cubic: E_m = m ||U||^2 / 2 and the path plateau sits near E_{V0}
    // (phi_eps truncation inflates it at desk-scale eps)
    const double e_v0 = s0.e_v0;
    const PathPoint mid = initial_path({0.0, 0.0}, 0.0, prob, s0);
    CHECK(mid.gamma == doctest::Approx(e_v0).epsilon(0.2));
    CHECK(std::abs(mid.eps_ups[0]) < 0.05);
    CHECK(std::abs(mid.eps_ups[1]) < 0.05);
    CHECK(initial_path({0.1, -0.1}, -1.0, prob, s0).poho_v0 > 0.0);
    CHECK(initial_path({0.1, -0.1}, 1.0, prob, s0).poho_v0 < 0.0);

    // dilation leaves the 2d level nearly flat across the plateau
    const PathPoint edge = initial_path({0.0, 0.0}, 0.45, prob, s0);
    CHECK(edge.gamma == doctest::Approx(mid.gamma).epsilon(0.05));

    const PathLevel pl = path_level(prob, s0, 3, 5, 2);
    CHECK(pl.endpoint_signs_ok);
    CHECK(pl.margin > 0.0);
    CHECK(pl.c_eps == doctest::Approx(e_v0).epsilon(0.2));

    // the winding map stays d=1-only
    CHECK_THROWS_AS(degree_boundary_loop(prob, s0, 64, 0, 1), ConfigError);
}
