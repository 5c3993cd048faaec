#pragma once

#include <cstdint>
#include <vector>

#include "garding/types.hpp"

namespace garding {

/// Uniform rectangular grid in 1 or 2 space dimensions with an interior
/// mask. Nodes off the mask act as Dirichlet data; the boundary ring is
/// the set of off-mask nodes touching the interior (8-neighbourhood in 2D,
/// matching the cross-derivative stencil reach). The domain (interior plus
/// ring) determines the diameter.
class GridDomain {
  public:
    static GridDomain line(int n, double spacing);
    static GridDomain line(int n, double spacing, std::vector<uint8_t> interior_mask);
    static GridDomain rect(int ny, int nx, double spacing);
    static GridDomain rect(int ny, int nx, double spacing, std::vector<uint8_t> interior_mask);

    int dim() const { return dim_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double spacing() const { return spacing_; }
    double diam() const { return diam_; }
    size_t node_count() const { return static_cast<size_t>(nx_) * ny_; }

    size_t index(int ix, int iy = 0) const { return static_cast<size_t>(iy) * nx_ + ix; }
    bool is_interior(size_t node) const { return interior_[node] != 0; }
    const std::vector<uint8_t>& interior_mask() const { return interior_; }
    const std::vector<int>& boundary_nodes() const { return boundary_; }

    size_t interior_count() const;
    /// Euclidean distance from a node to the nearest boundary-ring node.
    double distance_to_boundary(size_t node) const;

    bool same_layout(const GridDomain& other) const {
        return dim_ == other.dim_ && nx_ == other.nx_ && ny_ == other.ny_ &&
               spacing_ == other.spacing_ && interior_ == other.interior_;
    }

  private:
    GridDomain(int dim, int ny, int nx, double spacing, std::vector<uint8_t> interior_mask);
    void compute_boundary_ring();
    void compute_diameter();

    int dim_ = 1;
    int ny_ = 1;
    int nx_ = 0;
    double spacing_ = 0.0;
    double diam_ = 0.0;
    std::vector<uint8_t> interior_;
    std::vector<int> boundary_;
};

/// Scalar nodal values over a GridDomain. All values must be finite.
struct GridFunction {
    GridDomain domain;
    std::vector<double> values;

    GridFunction(GridDomain d, std::vector<double> vals);
    static GridFunction zeros(const GridDomain& d) {
        return GridFunction(d, std::vector<double>(d.node_count(), 0.0));
    }
    /// Sample f(x, y) at node coordinates (ix*h, iy*h).
    template <typename F>
    static GridFunction sample(const GridDomain& d, F&& f) {
        std::vector<double> vals(d.node_count());
        for (int iy = 0; iy < d.ny(); ++iy)
            for (int ix = 0; ix < d.nx(); ++ix)
                vals[d.index(ix, iy)] = f(ix * d.spacing(), iy * d.spacing());
        return GridFunction(d, std::move(vals));
    }

    double at(int ix, int iy = 0) const { return values[domain.index(ix, iy)]; }

    double interior_sup() const;
    double boundary_sup() const;
    /// Max over the domain node set (interior plus ring) of |values|.
    double sup_abs() const;
    /// Oscillation max - min over the domain node set.
    double osc() const;
};

}  // namespace garding
