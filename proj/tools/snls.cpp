// Command-line driver: limit | solve | sweep | verify | degree.
#include <filesystem>
#include <iostream>
#include <map>
#include <random>

#include "CLI11.hpp"
#include "snls/config.hpp"
#include "snls/report.hpp"

namespace fs = std::filesystem;
using namespace snls;

namespace {

struct CliState {
    Config config;
    std::string out_dir;
    int jobs = 1;
    std::uint64_t seed = 1;
};

std::string eps_tag(double eps) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", eps);
    return buf;
}

std::string s0_dir(const CliState& st) { return (fs::path(st.out_dir) / "s0").string(); }

GroundStateSet load_set(const CliState& st, const Problem& problem) {
    return load_s0(s0_dir(st), problem);
}

MinmaxOptions minmax_options(const CliState& st) {
    MinmaxOptions mo;
    mo.p_count = st.config.get_int("path", "p_count", 9);
    mo.s_count = st.config.get_int("path", "s_count", 33);
    mo.decay_fit_lo = st.config.get_double("decay", "fit_lo", 5.0);
    mo.decay_fit_hi = st.config.get_double("decay", "fit_hi", 15.0);
    mo.decay_r_step = st.config.get_double("decay", "r_step", 0.5);
    mo.jobs = st.jobs;
    return mo;
}

void check_eps_cap(const CliState& st, double eps) {
    const double cap = st.config.get_double("solver", "eps_max", 0.6);
    if (eps > cap)
        throw ConfigError("eps = " + eps_tag(eps) + " exceeds the box-adequacy threshold " +
                          eps_tag(cap));
}

void check_eps_allowed(const CliState& st, const Problem& problem, const GroundStateSet& s0) {
    check_eps_cap(st, problem.params.eps);
    std::string why;
    if (!box_adequate(problem, s0, &why)) throw ConfigError("eps refused: " + why);
}

int cmd_limit(const CliState& st) {
    const double eps = st.config.default_eps();
    const Problem problem = st.config.make_problem(eps);
    const std::string dir = s0_dir(st);
    fs::create_directories(dir);

    RunManifest manifest("limit", st.config.digest());
    GroundStateSet s0 = build_s0(problem, st.config.get_int("s0", "m_count", 3), st.seed);
    save_s0(s0, dir, st.config.digest());
    for (std::size_t i = 0; i < s0.members.size(); ++i)
        manifest.add_output("member_" + std::to_string(i) + ".snls");
    manifest.add_output("s0_manifest.json");

    const auto ms = st.config.get_list("limit", "m_values", {});
    if (ms.empty()) throw ConfigError("[limit] m_values must be a non-empty list");
    const auto curve = energy_curve(ms, problem);
    write_energy_curve_csv(curve, (fs::path(dir) / "energy_curve.csv").string());
    manifest.add_output("energy_curve.csv");

    Problem echo = problem;
    s0.apply_constants(echo.params);
    manifest.echo_problem(echo);
    manifest.note("e_v0", s0.e_v0);
    manifest.note("e_v0_minus_delta", s0.e_v0_minus_delta);
    manifest.note("inf_v_on_o5delta", s0.inf_v_on_o5delta);
    manifest.note("theta0", s0.theta0);
    manifest.add_output("run_manifest.json");
    manifest.write((fs::path(dir) / "run_manifest.json").string());

    std::cout << "ground-state set: " << s0.members.size() << " members, r0 = " << s0.r0
              << ", rho1 = " << s0.rho1 << ", E_V0 = " << s0.e_v0 << "\n";
    for (const auto& [m, e] : curve) std::cout << "  E(" << m << ") = " << e << "\n";
    return 0;
}

SolveResult solve_one(const CliState& st, double eps, const std::string& dir,
                      RunManifest& manifest) {
    check_eps_cap(st, eps);
    Problem problem = st.config.make_problem(eps);
    GroundStateSet s0 = load_set(st, problem);
    s0.apply_constants(problem.params);
    check_eps_allowed(st, problem, s0);

    SolveResult res = solve(problem, s0, minmax_options(st));

    fs::create_directories(dir);
    write_json((fs::path(dir) / "record.json").string(), to_json(res.record));
    write_json((fs::path(dir) / "energy.json").string(),
               to_json(gamma_report(res.trace.final, problem)));
    write_trace_csv(res.trace, problem.dim(), (fs::path(dir) / "trace.csv").string());
    write_path_table_csv(res.path, problem.dim(), (fs::path(dir) / "path_table.csv").string());
    save_snapshot(res.trace.final, (fs::path(dir) / "final.snls").string());
    manifest.add_output("record.json");
    manifest.add_output("energy.json");
    manifest.add_output("trace.csv");
    manifest.add_output("path_table.csv");
    manifest.add_output("final.snls");
    manifest.echo_problem(problem);
    return res;
}

int cmd_solve(const CliState& st, double eps) {
    const std::string dir = (fs::path(st.out_dir) / ("solve_eps" + eps_tag(eps))).string();
    RunManifest manifest("solve", st.config.digest());
    const SolveResult res = solve_one(st, eps, dir, manifest);
    manifest.add_output("run_manifest.json");
    manifest.write((fs::path(dir) / "run_manifest.json").string());
    std::cout << "eps = " << eps << ": gamma = " << res.record.gamma
              << ", x_eps = " << res.record.x_eps[0] << ", dist = " << res.record.dist_vmax
              << ", phi = " << res.record.phi << ", dual = " << res.record.dual << " ("
              << res.record.termination << ", " << res.record.iters << " iters)\n";
    return 0;
}

int cmd_sweep(const CliState& st, std::vector<double> eps_list) {
    if (eps_list.empty()) throw ConfigError("sweep: empty eps list");
    for (std::size_t i = 1; i < eps_list.size(); ++i) {
        if (!(eps_list[i] < eps_list[i - 1]))
            throw ConfigError("sweep: eps list must be strictly decreasing");
    }
    const fs::path base = fs::path(st.out_dir) / "sweep";
    fs::create_directories(base);

    std::vector<SweepRow> rows(eps_list.size());
    std::vector<std::string> subdirs(eps_list.size());
    parallel_for(eps_list.size(), st.jobs, [&](std::size_t i) {
        const double eps = eps_list[i];
        const std::string dir = (base / ("eps" + eps_tag(eps))).string();
        subdirs[i] = dir;
        rows[i].eps = eps;
        RunManifest manifest("sweep/solve", st.config.digest());
        try {
            rows[i].record = solve_one(st, eps, dir, manifest).record;
            rows[i].status = "ok";
        } catch (const std::exception& e) {
            rows[i].status = std::string("failed: ") + e.what();
            fs::create_directories(dir);
        }
        manifest.add_output("run_manifest.json");
        manifest.write((fs::path(dir) / "run_manifest.json").string());
    });

    RunManifest manifest("sweep", st.config.digest());
    write_sweep_csv(rows, (base / "sweep_summary.csv").string());
    manifest.add_output("sweep_summary.csv");
    for (std::size_t i = 0; i < eps_list.size(); ++i)
        manifest.add_output("eps" + eps_tag(eps_list[i]) + "/");
    manifest.add_output("run_manifest.json");
    manifest.write((base / "run_manifest.json").string());

    bool all_ok = true;
    for (const SweepRow& r : rows) {
        std::cout << "eps = " << r.eps << ": " << r.status;
        if (r.status == "ok")
            std::cout << " dist = " << r.record.dist_vmax << ", gamma = " << r.record.gamma;
        std::cout << "\n";
        all_ok = all_ok && r.status == "ok";
    }
    if (!all_ok) throw SolverError("sweep: some rows failed (see summary)");
    return 0;
}

int cmd_verify(const CliState& st, const std::string& which) {
    const fs::path dir = fs::path(st.out_dir) / ("verify_" + which);
    fs::create_directories(dir);
    RunManifest manifest("verify/" + which, st.config.digest());
    manifest.add_output("run_manifest.json");

    const auto finish = [&](int code) {
        manifest.write((dir / "run_manifest.json").string());
        return code;
    };

    if (which == "decay") {
        const Problem problem = st.config.make_problem(st.config.default_eps());
        GroundStateSet s0 = load_set(st, problem);
        Problem prob = problem;
        s0.apply_constants(prob.params);
        const GroundState control = ground_state(1.0, prob);
        const DecayReport rep =
            tail_profile(control.field, prob, st.config.get_double("decay", "fit_lo", 5.0),
                         st.config.get_double("decay", "fit_hi", 15.0),
                         st.config.get_double("decay", "r_step", 0.5));
        write_json((dir / "decay_report.json").string(), to_json(rep));
        manifest.add_output("decay_report.json");
        std::string csv = "r,q\n";
        for (std::size_t i = 0; i < rep.radii.size(); ++i)
            csv += format_double(rep.radii[i]) + "," + format_double(rep.q[i]) + "\n";
        write_text((dir / "decay_profile.csv").string(), csv);
        manifest.add_output("decay_profile.csv");
        std::cout << "control soliton decay rate: " << rep.rate << " (r2 = " << rep.r2 << ")\n";
        if (!(rep.rate >= 1.9 && rep.rate <= 2.1))
            throw VerifyError("decay: control fit " + std::to_string(rep.rate) +
                              " outside [1.9, 2.1]");
        return finish(0);
    }

    if (which == "recursion") {
        std::mt19937_64 rng(st.seed);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        int pass = 0, reject = 0;
        const int trials = 100;
        for (int t = 0; t < trials; ++t) {
            const double theta = 1.05 + 3.0 * unif(rng);
            const double b = unif(rng);
            std::vector<double> q{10.0 * (1.0 + unif(rng)) + 10.0 * b / (1.0 - 1.0 / theta)};
            for (int i = 1; i < 20; ++i)
                q.push_back(std::min(q.back(), q.back() / theta + b * unif(rng)));
            if (decay_recursion_check(q, theta, b, 2.0).conclusion_ok) ++pass;
        }
        for (int t = 0; t < trials; ++t) {
            const double theta = 1.5 + 3.0 * unif(rng);
            const double b = 0.2 * unif(rng);
            std::vector<double> q{50.0 + 50.0 * unif(rng)};
            const int bad = 3 + static_cast<int>(unif(rng) * 10.0);
            for (int i = 1; i < 20; ++i) {
                if (i == bad) {
                    // stays non-increasing but breaks the recursion inequality
                    q.push_back(q.back() / theta + b + 0.45 * (1.0 - 1.0 / theta) * q.back());
                } else {
                    q.push_back(std::min(q.back(), q.back() / theta + b * unif(rng)));
                }
            }
            const RecursionCheck rc = decay_recursion_check(q, theta, b, 2.0);
            if (rc.hypothesis_violation_step == bad) ++reject;
        }
        nlohmann::json j{{"satisfying_passed", pass}, {"violating_rejected", reject},
                         {"trials", trials}};
        write_json((dir / "recursion_report.json").string(), j);
        manifest.add_output("recursion_report.json");
        std::cout << "recursion: " << pass << "/" << trials << " satisfying passed, " << reject
                  << "/" << trials << " violating rejected\n";
        if (pass != trials || reject != trials)
            throw VerifyError("recursion: generator/check mismatch");
        return finish(0);
    }

    if (which == "directional") {
        const double z1 = st.config.get_double("verify", "z", 0.5);
        const auto eps_list =
            st.config.get_list("verify", "eps_list", {0.4, 0.2, 0.1, 0.05});
        std::string csv = "eps,measured,predicted,ratio,upper_bound\n";
        nlohmann::json all = nlohmann::json::array();
        std::vector<double> xs, ys;
        GroundState cache;
        bool cached = false;
        double main_ratio = 0.0;
        const double main_eps = st.config.get_double("verify", "ratio_eps", 0.1);
        for (double eps : eps_list) {
            const Problem problem = st.config.make_problem(eps);
            if (!cached) {
                cache = ground_state(problem.potential.value({z1, 0.0}), problem);
                cached = true;
            }
            const DirectionalReport rep =
                directional_derivative_test({z1, 0.0}, problem, &cache);
            all.push_back(to_json(rep));
            csv += format_double(eps) + "," + format_double(rep.measured) + "," +
                   format_double(rep.predicted) + "," + format_double(rep.ratio) + "," +
                   format_double(rep.upper_bound) + "\n";
            xs.push_back(eps);
            ys.push_back(std::abs(rep.measured));
            if (std::abs(eps - main_eps) < 1e-12) main_ratio = rep.ratio;
            if (!rep.bound_ok) throw VerifyError("directional: duality bound violated");
        }
        const double slope = loglog_slope(xs, ys);
        write_json((dir / "directional_report.json").string(),
                   nlohmann::json{{"reports", all}, {"loglog_slope", slope}});
        manifest.add_output("directional_report.json");
        write_text((dir / "directional_sweep.csv").string(), csv);
        manifest.add_output("directional_sweep.csv");
        std::cout << "directional: ratio(" << main_eps << ") = " << main_ratio
                  << ", sweep slope = " << slope << "\n";
        if (main_ratio != 0.0 && !(main_ratio >= 0.75 && main_ratio <= 1.25))
            throw VerifyError("directional: measured/predicted ratio outside [0.75, 1.25]");
        if (!(std::abs(slope - 1.0) <= 0.15))
            throw VerifyError("directional: sweep slope outside 1.0 +/- 0.15");
        return finish(0);
    }

    if (which == "floor") {
        const auto eps_list =
            st.config.get_list("verify", "eps_list", {0.4, 0.2, 0.1, 0.05});
        FloorOptions fo;
        fo.z_count = st.config.get_int("verify", "floor_z_count", 8);
        fo.seed = st.seed;
        const auto rows = gradient_floor_experiment(
            eps_list, [&](double e) { return st.config.make_problem(e); },
            [&](const Problem& p) {
                GroundStateSet s0 = load_set(st, p);
                return s0;
            },
            fo);
        write_floor_csv(rows, (dir / "floor_table.csv").string());
        manifest.add_output("floor_table.csv");
        std::vector<double> xs, displaced, annulus;
        for (const FloorPoint& r : rows) {
            if (r.regime == "displaced") {
                xs.push_back(r.eps);
                displaced.push_back(r.min_dual);
            } else if (r.regime == "annulus") {
                annulus.push_back(r.min_dual);
            }
        }
        const double slope = loglog_slope(xs, displaced);
        const double spread =
            *std::max_element(annulus.begin(), annulus.end()) /
            *std::min_element(annulus.begin(), annulus.end());
        write_json((dir / "floor_report.json").string(),
                   nlohmann::json{{"displaced_slope", slope}, {"annulus_spread", spread}});
        manifest.add_output("floor_report.json");
        std::cout << "floor: displaced slope = " << slope << ", annulus spread = " << spread
                  << "\n";
        if (!(std::abs(slope - 1.0) <= 0.2))
            throw VerifyError("floor: displaced-regime slope outside 1.0 +/- 0.2");
        if (!(spread <= 2.0)) throw VerifyError("floor: annulus-regime spread exceeds factor 2");
        return finish(0);
    }

    if (which == "convergence") {
        const auto pair = st.config.get_list("verify", "eps_pair", {0.2, 0.05});
        nlohmann::json all = nlohmann::json::array();
        std::vector<double> dists;
        for (double eps : pair) {
            Problem problem = st.config.make_problem(eps);
            GroundStateSet s0 = load_set(st, problem);
            s0.apply_constants(problem.params);
            check_eps_allowed(st, problem, s0);
            const SolveResult res = solve(problem, s0, minmax_options(st));
            const ConvergenceReport rep = convergence_diagnostics(res.trace.final, problem, s0);
            dists.push_back(rep.dist);
            nlohmann::json j = to_json(rep);
            j["eps"] = eps;
            all.push_back(j);
            if (!rep.within_2r0)
                throw VerifyError("convergence: |shift - Upsilon| exceeds 2 R0 at eps = " +
                                  eps_tag(eps));
        }
        write_json((dir / "convergence_report.json").string(), all);
        manifest.add_output("convergence_report.json");
        std::cout << "convergence: dist(" << pair[0] << ") = " << dists[0] << ", dist(" << pair[1]
                  << ") = " << dists[1] << "\n";
        if (!(dists.back() < dists.front()))
            throw VerifyError("convergence: manifold distance did not shrink with eps");
        return finish(0);
    }

    throw ConfigError("unknown experiment '" + which +
                      "'; valid names: decay, recursion, directional, floor, convergence");
}

int cmd_degree(const CliState& st, int samples, int budget) {
    const fs::path dir = fs::path(st.out_dir) / "degree";
    fs::create_directories(dir);
    Problem problem = st.config.make_problem(st.config.default_eps());
    GroundStateSet s0 = load_set(st, problem);
    s0.apply_constants(problem.params);
    RunManifest manifest("degree", st.config.digest());
    manifest.echo_problem(problem);

    const auto loop = degree_boundary_loop(problem, s0, samples, budget, st.jobs);
    std::string csv = "f0,f1\n";
    for (const auto& v : loop) csv += format_double(v[0]) + "," + format_double(v[1]) + "\n";
    write_text((dir / "degree_loop.csv").string(), csv);
    manifest.add_output("degree_loop.csv");

    const int deg = winding_degree(loop);
    manifest.note("degree", deg);
    manifest.note("samples", static_cast<int>(loop.size()));
    manifest.add_output("run_manifest.json");
    manifest.write((dir / "run_manifest.json").string());
    std::cout << deg << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"concentrating solutions of the singularly perturbed NLS equation"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;
    CliState st;
    app.add_option("--config", config_path, "configuration file")->required();
    app.add_option("--out", out_override, "output directory override");
    app.add_option("--jobs", st.jobs, "parallel workers")->check(CLI::PositiveNumber);
    app.add_option("--seed", st.seed, "rng seed for ensembles");

    auto* limit = app.add_subcommand("limit", "build the ground-state set and energy curve");
    double eps = 0.0;
    auto* solve_cmd = app.add_subcommand("solve", "full min-max + descent pipeline at one eps");
    solve_cmd->add_option("--eps", eps, "semiclassical parameter");
    std::vector<double> eps_list;
    auto* sweep = app.add_subcommand("sweep", "solve along a decreasing eps list");
    sweep->add_option("--eps", eps_list, "decreasing eps list")->delimiter(',')->required();
    std::string which;
    auto* verify = app.add_subcommand("verify", "quantitative experiments");
    verify->add_option("--which", which, "experiment name")->required();
    int samples = 256, budget = 0;
    auto* degree = app.add_subcommand("degree", "winding number of the degree map");
    degree->add_option("--samples", samples, "boundary loop samples");
    degree->add_option("--budget", budget, "flow steps before evaluating the map");

    CLI11_PARSE(app, argc, argv);

    try {
        st.config = Config::load(config_path);
        if (out_override.empty()) {
            // the only environment override: the output directory
            const char* env = std::getenv("SNLS_OUT");
            out_override = env ? env : "";
        }
        st.out_dir = out_override.empty() ? st.config.output_dir() : out_override;
        fs::create_directories(st.out_dir);
        if (limit->parsed()) return cmd_limit(st);
        if (solve_cmd->parsed())
            return cmd_solve(st, eps > 0.0 ? eps : st.config.default_eps());
        if (sweep->parsed()) return cmd_sweep(st, eps_list);
        if (verify->parsed()) return cmd_verify(st, which);
        if (degree->parsed()) return cmd_degree(st, samples, budget);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const VerifyError& e) {
        std::cerr << "verification failure: " << e.what() << "\n";
        return 4;
    } catch (const SolverError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
