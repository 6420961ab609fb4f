#include "snls/grid.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace snls {

Grid::Grid(int dim, double halfwidth, int points_per_axis, std::array<double, 2> offset,
           std::size_t max_nodes)
    : dim_(dim), halfwidth_(halfwidth), n_(points_per_axis), offset_(offset) {
    if (dim_ != 1 && dim_ != 2) throw ConfigError("grid: dim must be 1 or 2");
    if (!(halfwidth_ > 0.0)) throw ConfigError("grid: half-width must be positive");
    if (n_ < 3) throw ConfigError("grid: need at least 3 points per axis");
    if (n_ % 2 == 0) throw ConfigError("grid: points-per-axis must be odd so the origin is a node");
    h_ = 2.0 * halfwidth_ / (n_ - 1);
    size_ = static_cast<std::size_t>(n_);
    if (dim_ == 2) size_ *= static_cast<std::size_t>(n_);
    if (size_ > max_nodes)
        throw ConfigError("grid: " + std::to_string(size_) + " nodes exceeds the memory budget of " +
                          std::to_string(max_nodes));
}

GridPtr make_grid(int dim, double halfwidth, int points_per_axis, std::array<double, 2> offset,
                  std::size_t max_nodes) {
    return std::make_shared<Grid>(dim, halfwidth, points_per_axis, offset, max_nodes);
}

void Field::zero_boundary() {
    const Grid& g = *grid;
    if (g.dim() == 1) {
        v.front() = 0.0;
        v.back() = 0.0;
        return;
    }
    const int n = g.n();
    for (int i = 0; i < n; ++i) {
        v[g.index(0, i)] = 0.0;
        v[g.index(n - 1, i)] = 0.0;
        v[g.index(i, 0)] = 0.0;
        v[g.index(i, n - 1)] = 0.0;
    }
}

bool Field::all_finite() const {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

Field operator+(const Field& a, const Field& b) {
    Field out = a;
    for (std::size_t k = 0; k < out.v.size(); ++k) out.v[k] += b.v[k];
    return out;
}

Field operator-(const Field& a, const Field& b) {
    Field out = a;
    for (std::size_t k = 0; k < out.v.size(); ++k) out.v[k] -= b.v[k];
    return out;
}

Field operator*(double s, const Field& a) {
    Field out = a;
    for (double& x : out.v) x *= s;
    return out;
}

namespace {

constexpr char kMagic[4] = {'S', 'N', 'L', 'S'};
constexpr std::uint16_t kVersion = 1;

template <class T>
void write_le(std::ofstream& os, T value) {
    // little-endian host assumed (x86-64 / aarch64 targets)
    os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T read_le(std::ifstream& is) {
    T value{};
    is.read(reinterpret_cast<char*>(&value), sizeof(T));
    return value;
}

}  // namespace

void save_snapshot(const Field& f, const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw SolverError("snapshot: cannot open '" + path + "' for writing");
    os.write(kMagic, 4);
    write_le<std::uint16_t>(os, kVersion);
    write_le<std::uint16_t>(os, static_cast<std::uint16_t>(f.grid->dim()));
    write_le<std::uint32_t>(os, static_cast<std::uint32_t>(f.grid->n()));
    write_le<std::uint32_t>(os, 0u);
    for (int a = 0; a < f.grid->dim(); ++a) write_le<double>(os, f.grid->halfwidth());
    os.write(reinterpret_cast<const char*>(f.v.data()),
             static_cast<std::streamsize>(f.v.size() * sizeof(double)));
    if (!os) throw SolverError("snapshot: short write to '" + path + "'");
}

Field load_snapshot(const std::string& path, std::size_t max_nodes) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw SolverError("snapshot: cannot open '" + path + "'");
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw SolverError("snapshot: bad magic in '" + path + "'");
    const auto version = read_le<std::uint16_t>(is);
    if (version != kVersion)
        throw SolverError("snapshot: unsupported version " + std::to_string(version));
    const auto dim = read_le<std::uint16_t>(is);
    const auto n = read_le<std::uint32_t>(is);
    (void)read_le<std::uint32_t>(is);
    if (dim != 1 && dim != 2) throw SolverError("snapshot: bad dimension in '" + path + "'");
    double halfwidth = 0.0;
    for (int a = 0; a < dim; ++a) halfwidth = read_le<double>(is);
    auto grid = make_grid(dim, halfwidth, static_cast<int>(n), {0.0, 0.0}, max_nodes);
    Field f(grid);
    is.read(reinterpret_cast<char*>(f.v.data()),
            static_cast<std::streamsize>(f.v.size() * sizeof(double)));
    if (!is) throw SolverError("snapshot: truncated payload in '" + path + "'");
    if (!f.all_finite()) throw SolverError("snapshot: non-finite values in '" + path + "'");
    f.zero_boundary();
    return f;
}

}  // namespace snls
