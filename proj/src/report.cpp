#include "snls/report.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>

namespace snls {

const char* const kCodeVersion = "0.1.0";

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

nlohmann::json to_json(const EnergyReport& r) {
    return {{"kinetic", r.kinetic},
            {"potential", r.potential},
            {"nonlinear", r.nonlinear},
            {"penalty", r.penalty},
            {"total", r.total}};
}

nlohmann::json to_json(const SolveRecord& r) {
    nlohmann::json j;
    j["eps"] = r.eps;
    j["dimension"] = r.dimension;
    j["gamma"] = r.gamma;
    j["dual_residual"] = r.dual;
    j["stop_tol"] = r.stop_tol;
    j["x_eps"] = r.dimension == 2 ? nlohmann::json{r.x_eps[0], r.x_eps[1]}
                                  : nlohmann::json{r.x_eps[0]};
    j["dist_to_vmax"] = r.dist_vmax;
    j["decay_rate"] = r.decay_rate;
    j["decay_log_c"] = r.decay_log_c;
    j["decay_fit_r2"] = r.decay_fit_r2;
    j["pohozaev_rel"] = r.poho_rel;
    j["manifold_dist"] = r.manifold_dist;
    j["manifold_member"] = r.manifold_member;
    j["phi"] = r.phi;
    j["chi_mass_scaled"] = r.chi_mass_scaled;
    j["c_eps"] = r.c_eps;
    j["boundary_margin"] = r.boundary_margin;
    j["argmax_p"] = r.dimension == 2 ? nlohmann::json{r.argmax_p[0], r.argmax_p[1]}
                                     : nlohmann::json{r.argmax_p[0]};
    j["argmax_s"] = r.argmax_s;
    j["iterations"] = r.iters;
    j["termination"] = r.termination;
    j["in_confined_zset"] = r.in_confined_zset;
    j["start_in_working_set"] = r.start_in_working_set;
    return j;
}

nlohmann::json to_json(const DirectionalReport& r) {
    return {{"z", r.z[0]},          {"eps", r.eps},
            {"m", r.m},             {"grad_v1", r.grad_v1},
            {"measured", r.measured}, {"predicted", r.predicted},
            {"ratio", r.ratio},     {"upper_bound", r.upper_bound},
            {"bound_ok", r.bound_ok}, {"aux_gap", r.aux_gap}};
}

nlohmann::json to_json(const DecayReport& r) {
    return {{"rate", r.rate},        {"log_c", r.log_c},
            {"r2", r.r2},            {"window_lo", r.window_lo},
            {"window_hi", r.window_hi}, {"points", r.radii.size()}};
}

nlohmann::json to_json(const ConvergenceReport& r) {
    return {{"dist", r.dist},
            {"matched_m", r.matched_m},
            {"shift", {r.shift[0], r.shift[1]}},
            {"shift_vs_upsilon", r.shift_vs_upsilon},
            {"within_2r0", r.within_2r0}};
}

nlohmann::json to_json(const BarycenterReport& r, int dim) {
    nlohmann::json j;
    j["degenerate"] = r.degenerate;
    j["denominator"] = r.denominator;
    if (!r.degenerate)
        j["upsilon"] = dim == 2 ? nlohmann::json{r.upsilon[0], r.upsilon[1]}
                                : nlohmann::json{r.upsilon[0]};
    return j;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw SolverError("cannot write '" + path + "'");
    os << text;
}

void write_json(const std::string& path, const nlohmann::json& j) {
    write_text(path, j.dump(2) + "\n");
}

void write_trace_csv(const FlowTrace& trace, int dim, const std::string& path) {
    std::string out = dim == 2 ? "iter,gamma,dual,ups0,ups1,phi,tau\n"
                               : "iter,gamma,dual,ups0,phi,tau\n";
    for (const TraceRow& r : trace.rows) {
        out += std::to_string(r.iter) + "," + format_double(r.gamma) + "," + format_double(r.dual) +
               "," + format_double(r.upsilon[0]);
        if (dim == 2) out += "," + format_double(r.upsilon[1]);
        out += "," + format_double(r.phi) + "," + format_double(r.tau) + "\n";
    }
    write_text(path, out);
}

void write_path_table_csv(const PathLevel& pl, int dim, const std::string& path) {
    std::string out = dim == 2 ? "p0,p1,s,gamma,poho_v0,eps_ups0,eps_ups1,boundary\n"
                               : "p0,s,gamma,poho_v0,eps_ups0,boundary\n";
    for (const PathTableRow& r : pl.table) {
        out += format_double(r.p[0]) + ",";
        if (dim == 2) out += format_double(r.p[1]) + ",";
        out += format_double(r.s) + "," + format_double(r.gamma) + "," +
               format_double(r.poho_v0) + "," + format_double(r.eps_ups[0]);
        if (dim == 2) out += "," + format_double(r.eps_ups[1]);
        out += std::string(",") + (r.boundary ? "1" : "0") + "\n";
    }
    write_text(path, out);
}

void write_energy_curve_csv(const std::vector<std::pair<double, double>>& curve,
                            const std::string& path) {
    std::string out = "m,E\n";
    for (const auto& [m, e] : curve) out += format_double(m) + "," + format_double(e) + "\n";
    write_text(path, out);
}

void write_floor_csv(const std::vector<FloorPoint>& rows, const std::string& path) {
    std::string out = "eps,regime,min_dual,witness,witness_manifold_dist,witness_in_zset\n";
    for (const FloorPoint& r : rows) {
        out += format_double(r.eps) + "," + r.regime + "," + format_double(r.min_dual) + "," +
               r.witness + "," + format_double(r.witness_manifold_dist) + "," +
               (r.witness_in_zset ? "1" : "0") + "\n";
    }
    write_text(path, out);
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
    std::string out = "eps,status,dist_to_vmax,gamma,c_eps,decay_rate\n";
    for (const SweepRow& r : rows) {
        out += format_double(r.eps) + "," + r.status + ",";
        if (r.status == "ok") {
            out += format_double(r.record.dist_vmax) + "," + format_double(r.record.gamma) + "," +
                   format_double(r.record.c_eps) + "," + format_double(r.record.decay_rate);
        } else {
            out += ",,,";
        }
        out += "\n";
    }
    write_text(path, out);
}

RunManifest::RunManifest(std::string command, std::uint64_t config_digest) {
    body_["command"] = std::move(command);
    body_["config_digest"] = config_digest;
    body_["code_version"] = kCodeVersion;
}

void RunManifest::echo_problem(const Problem& problem) {
    nlohmann::json g;
    g["dim"] = problem.dim();
    g["halfwidth"] = problem.grid->halfwidth();
    g["n"] = problem.grid->n();
    g["spacing"] = problem.grid->spacing();
    body_["grid"] = g;
    nlohmann::json p;
    p["eps"] = problem.params.eps;
    p["delta0"] = problem.params.delta0;
    p["theta1"] = problem.params.theta1;
    p["t0"] = problem.params.t0;
    p["r0"] = problem.params.r0;
    p["rho1"] = problem.params.rho1;
    p["rho0"] = problem.params.rho0;
    p["rho2"] = problem.params.rho2;
    p["d1_bound"] = problem.params.d1_bound;
    p["o_lo"] = problem.params.o_region.lo[0];
    p["o_hi"] = problem.params.o_region.hi[0];
    p["psi_knots"] = {problem.params.cutoffs().psi_lo, problem.params.cutoffs().psi_hi};
    body_["params"] = p;
    body_["v0"] = problem.potential.v0();
}

void RunManifest::note(const std::string& key, const nlohmann::json& value) { body_[key] = value; }

void RunManifest::add_output(const std::string& relative_path) {
    outputs_.push_back(relative_path);
}

void RunManifest::write(const std::string& path) const {
    nlohmann::json j = body_;
    const auto now = std::chrono::system_clock::now();
    j["timestamp_unix"] =
        std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
    j["outputs"] = outputs_;
    write_json(path, j);
}

}  // namespace snls
