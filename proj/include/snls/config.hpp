#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "snls/model.hpp"

namespace snls {

/// Flat sectioned key = value configuration text. '#' and ';' start comments;
/// parse errors carry line and column.
class Config {
public:
    static Config load(const std::string& path);
    static Config parse(const std::string& text, const std::string& name = "<config>");

    bool has(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    int get_int(const std::string& section, const std::string& key, int fallback) const;
    std::vector<double> get_list(const std::string& section, const std::string& key,
                                 const std::vector<double>& fallback) const;

    std::string require(const std::string& section, const std::string& key) const;

    /// FNV-1a over the canonicalized (sorted) section/key/value lines; stable
    /// under key reordering in the file.
    std::uint64_t digest() const;

    /// Assemble the problem bundle for a given eps. The rescaled box is
    /// max(box_halfwidth / eps, min_halfwidth_rescaled), snapped to the
    /// configured spacing with an odd point count.
    Problem make_problem(double eps) const;

    double default_eps() const { return get_double("params", "eps", 0.1); }
    std::string output_dir() const { return get_string("output", "dir", "out"); }

private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
    std::string name_;
};

}  // namespace snls
