#include "snls/manifold.hpp"

#include <cmath>

namespace snls {

Field member_field(const S0Member& mem, std::array<double, 2> center, const Problem& problem) {
    return sampled_translate(mem.gs.radial, center, 1.0, 1.0, problem, true);
}

namespace {

double fit_dist(const Field& u, const S0Member& mem, std::array<double, 2> y,
                const Problem& problem) {
    const Field cand = member_field(mem, y, problem);
    return energy_dist(problem, u, cand);
}

/// Golden-section along one axis; assumes a bracket [a, b] around the min.
double golden_axis(const Field& u, const S0Member& mem, std::array<double, 2> y, int axis,
                   double a, double b, const Problem& problem, double tol) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    auto eval = [&](double t) {
        auto p = y;
        p[axis] = t;
        return fit_dist(u, mem, p, problem);
    };
    double fc = eval(c), fd = eval(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = eval(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

ManifoldFit manifold_distance(const Field& u, const GroundStateSet& s0, const Problem& problem) {
    const BarycenterReport bary = barycenter(u, problem.params);
    std::array<double, 2> seed = bary.degenerate ? problem.grid->offset() : bary.upsilon;
    const double r0 = problem.params.r0;
    const double span = 2.5 * r0;
    const int coarse = 21;

    ManifoldFit best;
    best.dist = std::numeric_limits<double>::infinity();

    for (std::size_t mi = 0; mi < s0.members.size(); ++mi) {
        const S0Member& mem = s0.members[mi];
        std::array<double, 2> y = seed;
        // coarse lattice around the seed
        double bd = std::numeric_limits<double>::infinity();
        std::array<double, 2> by = seed;
        const int nj = problem.dim() == 2 ? coarse : 1;
        for (int i = 0; i < coarse; ++i) {
            for (int j = 0; j < nj; ++j) {
                std::array<double, 2> p = seed;
                p[0] += -span + 2.0 * span * i / (coarse - 1);
                if (problem.dim() == 2) p[1] += -span + 2.0 * span * j / (coarse - 1);
                const double d = fit_dist(u, mem, p, problem);
                if (d < bd) {
                    bd = d;
                    by = p;
                }
            }
        }
        y = by;
        const double step = 2.0 * span / (coarse - 1);
        const double tol = 1e-7;
        for (int round = 0; round < (problem.dim() == 2 ? 2 : 1); ++round) {
            y[0] = golden_axis(u, mem, y, 0, y[0] - step, y[0] + step, problem, tol);
            if (problem.dim() == 2)
                y[1] = golden_axis(u, mem, y, 1, y[1] - step, y[1] + step, problem, tol);
        }
        const double d = fit_dist(u, mem, y, problem);
        if (d < best.dist) {
            best.dist = d;
            best.member = static_cast<int>(mi);
            best.shift = y;
        }
    }
    return best;
}

bool zset_membership(const Field& u, double rho, double delta, const GroundStateSet& s0,
                     const Problem& problem) {
    const BarycenterReport bary = barycenter(u, problem.params);
    if (bary.degenerate) return false;
    const std::array<double, 2> scaled{problem.params.eps * bary.upsilon[0],
                                       problem.params.eps * bary.upsilon[1]};
    if (!(problem.params.o_region.distance(scaled, problem.dim()) < delta)) return false;
    return manifold_distance(u, s0, problem).dist < rho;
}

}  // namespace snls
