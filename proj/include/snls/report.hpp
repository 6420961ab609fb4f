#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "snls/flow.hpp"
#include "snls/functionals.hpp"
#include "snls/minmax.hpp"
#include "snls/verify.hpp"

namespace snls {

/// Shortest-roundtrip formatting used by every data file.
std::string format_double(double x);

nlohmann::json to_json(const EnergyReport& r);
nlohmann::json to_json(const SolveRecord& r);
nlohmann::json to_json(const DirectionalReport& r);
nlohmann::json to_json(const DecayReport& r);
nlohmann::json to_json(const ConvergenceReport& r);
nlohmann::json to_json(const BarycenterReport& r, int dim);

void write_text(const std::string& path, const std::string& text);
void write_json(const std::string& path, const nlohmann::json& j);

void write_trace_csv(const FlowTrace& trace, int dim, const std::string& path);
void write_path_table_csv(const PathLevel& pl, int dim, const std::string& path);
void write_energy_curve_csv(const std::vector<std::pair<double, double>>& curve,
                            const std::string& path);
void write_floor_csv(const std::vector<FloorPoint>& rows, const std::string& path);

struct SweepRow {
    double eps = 0.0;
    std::string status;  // "ok" or the failure reason
    SolveRecord record;  // valid when status == "ok"
};

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path);

/// Per-run manifest: config digest, code version, problem echo, timestamps,
/// and the complete output inventory. Timestamps live only here.
class RunManifest {
public:
    RunManifest(std::string command, std::uint64_t config_digest);

    void echo_problem(const Problem& problem);
    void note(const std::string& key, const nlohmann::json& value);
    void add_output(const std::string& relative_path);
    const std::vector<std::string>& outputs() const { return outputs_; }

    void write(const std::string& path) const;

private:
    nlohmann::json body_;
    std::vector<std::string> outputs_;
};

extern const char* const kCodeVersion;

}  // namespace snls
