#include "snls/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "snls/common.hpp"

namespace snls {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace

Config Config::load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse(ss.str(), path);
}

Config Config::parse(const std::string& text, const std::string& name) {
    Config cfg;
    cfg.name_ = name;
    std::istringstream is(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::size_t comment = line.find_first_of("#;");
        if (comment != std::string::npos) line = line.substr(0, comment);
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError(name + ":" + std::to_string(lineno) + ":" +
                                  std::to_string(line.size()) + ": unterminated section header");
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty())
                throw ConfigError(name + ":" + std::to_string(lineno) + ":2: empty section name");
            continue;
        }
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(name + ":" + std::to_string(lineno) + ":1: expected 'key = value'");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw ConfigError(name + ":" + std::to_string(lineno) + ":1: empty key");
        if (section.empty())
            throw ConfigError(name + ":" + std::to_string(lineno) + ":1: key outside any section");
        cfg.sections_[section][key] = value;
    }
    return cfg;
}

bool Config::has(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
    const auto s = sections_.find(section);
    if (s == sections_.end()) return fallback;
    const auto k = s->second.find(key);
    return k == s->second.end() ? fallback : k->second;
}

std::string Config::require(const std::string& section, const std::string& key) const {
    if (!has(section, key))
        throw ConfigError(name_ + ": missing required key [" + section + "] " + key);
    return sections_.at(section).at(key);
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
    if (!has(section, key)) return fallback;
    const std::string v = sections_.at(section).at(key);
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (trim(v.substr(used)).empty()) return x;
    } catch (const std::exception&) {
    }
    throw ConfigError(name_ + ": [" + section + "] " + key + " = '" + v + "' is not a number");
}

int Config::get_int(const std::string& section, const std::string& key, int fallback) const {
    const double x = get_double(section, key, static_cast<double>(fallback));
    const int i = static_cast<int>(std::llround(x));
    if (std::abs(x - i) > 1e-9)
        throw ConfigError(name_ + ": [" + section + "] " + key + " must be an integer");
    return i;
}

std::vector<double> Config::get_list(const std::string& section, const std::string& key,
                                     const std::vector<double>& fallback) const {
    if (!has(section, key)) return fallback;
    const std::string v = sections_.at(section).at(key);
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const std::string t = trim(item);
        if (t.empty()) continue;
        try {
            out.push_back(std::stod(t));
        } catch (const std::exception&) {
            throw ConfigError(name_ + ": [" + section + "] " + key + ": bad list element '" + t +
                              "'");
        }
    }
    if (out.empty())
        throw ConfigError(name_ + ": [" + section + "] " + key + ": empty list");
    return out;
}

std::uint64_t Config::digest() const {
    std::string canon;
    for (const auto& [sec, kv] : sections_) {
        for (const auto& [k, v] : kv) canon += sec + "." + k + "=" + v + "\n";
    }
    return fnv1a(canon);
}

Problem Config::make_problem(double eps) const {
    if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("eps must lie in (0, 1)");

    const int dim = get_int("grid", "dim", 1);
    const double h = get_double("grid", "h", 0.05);
    if (!(h > 0.0)) throw ConfigError("[grid] h must be positive");
    const double box_half = get_double("grid", "box_halfwidth", 4.2);
    const double min_resc = get_double("grid", "min_halfwidth_rescaled", 25.0);
    const auto offs = get_list("grid", "offset", {0.0, 0.0});
    const std::size_t max_nodes =
        static_cast<std::size_t>(get_double("grid", "max_nodes", 64.0e6));

    const double want = std::max(box_half / eps, min_resc);
    const int half_count = static_cast<int>(std::ceil(want / h - 1e-9));
    const int n = 2 * half_count + 1;
    std::array<double, 2> offset{offs[0], offs.size() > 1 ? offs[1] : 0.0};
    auto grid = make_grid(dim, h * half_count, n, offset, max_nodes);

    Problem prob;
    prob.grid = grid;
    prob.omega_hat = dim == 1 ? BoxRegion::interval(-box_half + offset[0] * eps,
                                                    box_half + offset[0] * eps)
                              : BoxRegion::square({-box_half, -box_half}, {box_half, box_half});

    const std::string pkind = get_string("potential", "kind", "gaussian-bump");
    if (pkind == "gaussian-bump") {
        const auto center = get_list("potential", "center", {0.0, 0.0});
        prob.potential = Potential::gaussian_bump(
            get_double("potential", "v_inf", 1.0), get_double("potential", "amplitude", 1.0),
            {center[0], center.size() > 1 ? center[1] : 0.0},
            get_double("potential", "width", 1.0));
    } else if (pkind == "tabulated") {
        const int samples = get_int("potential", "samples", 0);
        std::vector<double> values;
        if (has("potential", "values")) {
            values = get_list("potential", "values", {});
        } else {
            std::ifstream vf(require("potential", "file"));
            if (!vf) throw ConfigError("[potential] file not readable");
            double x;
            while (vf >> x) values.push_back(x);
        }
        prob.potential = Potential::tabulated(dim, prob.omega_hat, samples, std::move(values),
                                              get_double("potential", "v_inf", 1.0));
    } else {
        throw ConfigError("[potential] kind must be gaussian-bump or tabulated");
    }

    const std::string fkind = get_string("nonlinearity", "kind", "power");
    if (fkind != "power") throw ConfigError("[nonlinearity] kind must be power");
    Nonlinearity f = Nonlinearity::power(get_double("nonlinearity", "p", 4.0));
    const double K = get_double("nonlinearity", "truncation", 8.0);
    if (K > 0.0) f = truncate_nonlinearity(f, K);
    prob.f = f;

    Params& pp = prob.params;
    pp.eps = eps;
    pp.delta0 = get_double("params", "delta0", 0.7);
    const auto olo = get_list("params", "o_lo", {-0.17, -0.17});
    const auto ohi = get_list("params", "o_hi", {0.23, 0.23});
    pp.o_region = BoxRegion{{olo[0], olo.size() > 1 ? olo[1] : olo[0]},
                            {ohi[0], ohi.size() > 1 ? ohi[1] : ohi[0]}};
    pp.theta1 = get_double("params", "theta1", 0.2);
    pp.t0 = get_double("params", "t0", 3.0);
    if (!(pp.theta1 > 0.0 && pp.theta1 < 0.5))
        throw ConfigError("[params] theta1 must lie in (0, 1/2)");
    if (!(pp.delta0 > 0.0)) throw ConfigError("[params] delta0 must be positive");

    pp.solver.stop_tol0 = get_double("solver", "stop_tol0", 7.0e-3);
    pp.solver.stop_tol2 = get_double("solver", "stop_tol2", 2.0);
    pp.solver.stop_tole = get_double("solver", "stop_tole", 3.2);
    pp.solver.stop_tolw = get_double("solver", "stop_tolw", 0.495);
    pp.solver.max_steps = get_int("solver", "max_steps", 400);
    pp.solver.trace_stride = get_int("solver", "trace_stride", 1);
    pp.solver.linear_tol = get_double("solver", "linear_tol", 1.0e-8);
    pp.solver.linear_max_iters = get_int("solver", "linear_max_iters", 50000);

    // structural checks: the max set sits in O, O^{5 delta0} in Omega_hat
    if (!pp.o_region.contains(prob.potential.x_max(), dim))
        throw ConfigError("[params] O must contain the maximum point of V");
    if (!pp.o_region.expanded(5.0 * pp.delta0).inside(prob.omega_hat, dim))
        throw ConfigError("[params] O^{5 delta0} must lie inside the Omega_hat box");

    validate_potential(prob.potential, dim, prob.omega_hat, pp.o_region, pp.delta0);

    const double v0 = prob.potential.v0();
    if (!(prob.f.F(pp.t0) > 0.5 * v0 * pp.t0 * pp.t0))
        throw ConfigError("[params] t0 does not witness F(t0) > V0 t0^2 / 2 (F3)");
    if (!(prob.f.f(1e-8) / 1e-8 < 1e-6))
        throw ConfigError("nonlinearity violates f(t)/t -> 0 (F1)");

    prob.refresh_veps();
    return prob;
}

}  // namespace snls
