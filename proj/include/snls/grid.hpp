#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "snls/common.hpp"

namespace snls {

/// Uniform box grid for the rescaled domain (1/eps)*Omega_hat.
/// Same half-width and point count per axis; n is odd so the origin
/// (plus the per-axis offset) is a node. Row-major node order, axis 0 slow.
class Grid {
public:
    static constexpr std::size_t kDefaultMaxNodes = 64u * 1024u * 1024u;

    Grid(int dim, double halfwidth, int points_per_axis,
         std::array<double, 2> offset = {0.0, 0.0},
         std::size_t max_nodes = kDefaultMaxNodes);

    int dim() const { return dim_; }
    double halfwidth() const { return halfwidth_; }
    int n() const { return n_; }
    double spacing() const { return h_; }
    const std::array<double, 2>& offset() const { return offset_; }

    std::size_t size() const { return size_; }

    /// Coordinate along one axis. Node i sits at offset + (i - (n-1)/2) * h.
    double coord(int axis, int i) const {
        return offset_[static_cast<std::size_t>(axis)] + (i - (n_ - 1) / 2) * h_;
    }

    std::array<double, 2> point(std::size_t flat) const {
        if (dim_ == 1) return {coord(0, static_cast<int>(flat)), 0.0};
        const int i = static_cast<int>(flat) / n_;
        const int j = static_cast<int>(flat) % n_;
        return {coord(0, i), coord(1, j)};
    }

    std::size_t index(int i, int j = 0) const {
        return dim_ == 1 ? static_cast<std::size_t>(i)
                         : static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
    }

    bool is_boundary(std::size_t flat) const {
        if (dim_ == 1) {
            const int i = static_cast<int>(flat);
            return i == 0 || i == n_ - 1;
        }
        const int i = static_cast<int>(flat) / n_;
        const int j = static_cast<int>(flat) % n_;
        return i == 0 || i == n_ - 1 || j == 0 || j == n_ - 1;
    }

    bool same_layout(const Grid& other) const {
        return dim_ == other.dim_ && n_ == other.n_ && halfwidth_ == other.halfwidth_ &&
               offset_ == other.offset_;
    }

    double cell_volume() const { return dim_ == 1 ? h_ : h_ * h_; }

private:
    int dim_;
    double halfwidth_;
    int n_;
    double h_;
    std::array<double, 2> offset_;
    std::size_t size_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(int dim, double halfwidth, int points_per_axis,
                  std::array<double, 2> offset = {0.0, 0.0},
                  std::size_t max_nodes = Grid::kDefaultMaxNodes);

/// Real grid function with homogeneous Dirichlet boundary values.
struct Field {
    GridPtr grid;
    std::vector<double> v;

    Field() = default;
    explicit Field(GridPtr g) : grid(std::move(g)), v(grid->size(), 0.0) {}

    std::size_t size() const { return v.size(); }
    double& operator[](std::size_t i) { return v[i]; }
    double operator[](std::size_t i) const { return v[i]; }

    void zero_boundary();
    bool all_finite() const;

    /// Fill from a callable of the node point; boundary forced to zero.
    template <class Fn>
    static Field sample(const GridPtr& g, Fn&& fn) {
        Field f(g);
        for (std::size_t k = 0; k < f.v.size(); ++k) f.v[k] = fn(g->point(k));
        f.zero_boundary();
        return f;
    }
};

Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(double s, const Field& a);

/// Binary field snapshot. 16-byte header: magic "SNLS", u16 version, u16 dim,
/// u32 points-per-axis, u32 reserved; then dim x f64 half-widths and the
/// n^dim node values, all little-endian, row-major.
void save_snapshot(const Field& f, const std::string& path);
Field load_snapshot(const std::string& path, std::size_t max_nodes = Grid::kDefaultMaxNodes);

}  // namespace snls
