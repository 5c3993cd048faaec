#include "garding/grid.hpp"

#include <limits>

namespace garding {

namespace {

/// 2D convex hull (monotone chain) of node coordinates; the O(H^2) scan on
/// the hull replaces the O(N^2) all-pairs diameter.
struct Pt {
    double x, y;
};

double cross(const Pt& o, const Pt& a, const Pt& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

std::vector<Pt> convex_hull(std::vector<Pt> pts) {
    std::sort(pts.begin(), pts.end(), [](const Pt& a, const Pt& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Pt& a, const Pt& b) { return a.x == b.x && a.y == b.y; }),
              pts.end());
    const size_t n = pts.size();
    if (n < 3) return pts;
    std::vector<Pt> hull(2 * n);
    size_t m = 0;
    for (size_t i = 0; i < n; ++i) {
        while (m >= 2 && cross(hull[m - 2], hull[m - 1], pts[i]) <= 0) --m;
        hull[m++] = pts[i];
    }
    const size_t lower = m + 1;
    for (size_t i = n - 1; i-- > 0;) {
        while (m >= lower && cross(hull[m - 2], hull[m - 1], pts[i]) <= 0) --m;
        hull[m++] = pts[i];
    }
    hull.resize(m - 1);
    return hull;
}

}  // namespace

GridDomain::GridDomain(int dim, int ny, int nx, double spacing,
                       std::vector<uint8_t> interior_mask)
    : dim_(dim), ny_(ny), nx_(nx), spacing_(spacing), interior_(std::move(interior_mask)) {
    if (!(spacing > 0.0)) throw std::invalid_argument("GridDomain: spacing must be positive");
    if (nx < 3 || (dim == 2 && ny < 3))
        throw std::invalid_argument("GridDomain: need at least 3 nodes per axis");
    if (interior_.size() != node_count())
        throw std::invalid_argument("GridDomain: mask size mismatch");
    for (int iy = 0; iy < ny_; ++iy) {
        for (int ix = 0; ix < nx_; ++ix) {
            const bool edge = ix == 0 || ix == nx_ - 1 || (dim_ == 2 && (iy == 0 || iy == ny_ - 1));
            if (edge && interior_[index(ix, iy)])
                throw std::invalid_argument("GridDomain: interior mask touches the grid edge");
        }
    }
    compute_boundary_ring();
    if (boundary_.empty()) throw std::invalid_argument("GridDomain: empty boundary ring");
    compute_diameter();
}

GridDomain GridDomain::line(int n, double spacing) {
    if (n < 3) throw std::invalid_argument("GridDomain: need at least 3 nodes per axis");
    std::vector<uint8_t> mask(static_cast<size_t>(n), 1);
    mask.front() = 0;
    mask.back() = 0;
    return GridDomain(1, 1, n, spacing, std::move(mask));
}

GridDomain GridDomain::line(int n, double spacing, std::vector<uint8_t> interior_mask) {
    return GridDomain(1, 1, n, spacing, std::move(interior_mask));
}

GridDomain GridDomain::rect(int ny, int nx, double spacing) {
    std::vector<uint8_t> mask(static_cast<size_t>(nx) * ny, 0);
    for (int iy = 1; iy < ny - 1; ++iy)
        for (int ix = 1; ix < nx - 1; ++ix) mask[static_cast<size_t>(iy) * nx + ix] = 1;
    return GridDomain(2, ny, nx, spacing, std::move(mask));
}

GridDomain GridDomain::rect(int ny, int nx, double spacing, std::vector<uint8_t> interior_mask) {
    return GridDomain(2, ny, nx, spacing, std::move(interior_mask));
}

void GridDomain::compute_boundary_ring() {
    boundary_.clear();
    for (int iy = 0; iy < ny_; ++iy) {
        for (int ix = 0; ix < nx_; ++ix) {
            const size_t node = index(ix, iy);
            if (interior_[node]) continue;
            bool touches = false;
            for (int dy = -1; dy <= 1 && !touches; ++dy) {
                for (int dx = -1; dx <= 1 && !touches; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    if (dim_ == 1 && dy != 0) continue;
                    const int jx = ix + dx;
                    const int jy = iy + dy;
                    if (jx < 0 || jx >= nx_ || jy < 0 || jy >= ny_) continue;
                    if (interior_[index(jx, jy)]) touches = true;
                }
            }
            if (touches) boundary_.push_back(static_cast<int>(node));
        }
    }
}

void GridDomain::compute_diameter() {
    std::vector<Pt> pts;
    pts.reserve(node_count());
    for (int iy = 0; iy < ny_; ++iy)
        for (int ix = 0; ix < nx_; ++ix)
            if (interior_[index(ix, iy)])
                pts.push_back({ix * spacing_, iy * spacing_});
    for (const int node : boundary_)
        pts.push_back({(node % nx_) * spacing_, (node / nx_) * spacing_});

    const std::vector<Pt> hull = convex_hull(std::move(pts));
    double best = 0.0;
    for (size_t i = 0; i < hull.size(); ++i) {
        for (size_t j = i + 1; j < hull.size(); ++j) {
            const double dx = hull[i].x - hull[j].x;
            const double dy = hull[i].y - hull[j].y;
            best = std::max(best, dx * dx + dy * dy);
        }
    }
    diam_ = std::sqrt(best);
}

size_t GridDomain::interior_count() const {
    size_t c = 0;
    for (const uint8_t m : interior_) c += m;
    return c;
}

double GridDomain::distance_to_boundary(size_t node) const {
    const double x = static_cast<double>(node % nx_) * spacing_;
    const double y = static_cast<double>(node / nx_) * spacing_;
    double best = std::numeric_limits<double>::infinity();
    for (const int b : boundary_) {
        const double dx = x - (b % nx_) * spacing_;
        const double dy = y - (b / nx_) * spacing_;
        best = std::min(best, dx * dx + dy * dy);
    }
    return std::sqrt(best);
}

GridFunction::GridFunction(GridDomain d, std::vector<double> vals)
    : domain(std::move(d)), values(std::move(vals)) {
    if (values.size() != domain.node_count())
        throw std::invalid_argument("GridFunction: value count mismatch");
    for (const double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument("GridFunction: non-finite value");
}

double GridFunction::interior_sup() const {
    double best = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < values.size(); ++i)
        if (domain.is_interior(i)) best = std::max(best, values[i]);
    return best;
}

double GridFunction::boundary_sup() const {
    double best = -std::numeric_limits<double>::infinity();
    for (const int b : domain.boundary_nodes()) best = std::max(best, values[static_cast<size_t>(b)]);
    return best;
}

double GridFunction::sup_abs() const {
    double best = 0.0;
    for (size_t i = 0; i < values.size(); ++i)
        if (domain.is_interior(i)) best = std::max(best, std::fabs(values[i]));
    for (const int b : domain.boundary_nodes())
        best = std::max(best, std::fabs(values[static_cast<size_t>(b)]));
    return best;
}

double GridFunction::osc() const {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    auto visit = [&](size_t i) {
        lo = std::min(lo, values[i]);
        hi = std::max(hi, values[i]);
    };
    for (size_t i = 0; i < values.size(); ++i)
        if (domain.is_interior(i)) visit(i);
    for (const int b : domain.boundary_nodes()) visit(static_cast<size_t>(b));
    return hi - lo;
}

}  // namespace garding
