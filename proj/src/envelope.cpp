#include "garding/envelope.hpp"

#include "garding/kernels.hpp"
#include "garding/sym_poly.hpp"

namespace garding {

namespace {

/// Eigenvalues of the symmetric 2x2 [[a, c], [c, b]].
void eigen_2x2(double a, double b, double c, double* lo, double* hi) {
    const double mean = 0.5 * (a + b);
    const double rad = std::sqrt(0.25 * (a - b) * (a - b) + c * c);
    *lo = mean - rad;
    *hi = mean + rad;
}

bool hessian_in_cone(double hxx, double hyy, double hxy, int k, double tol) {
    double lo, hi;
    eigen_2x2(hxx, hyy, hxy, &lo, &hi);
    const double base = std::max(1.0, std::max(std::fabs(lo), std::fabs(hi)));
    const double s1 = lo + hi;
    if (s1 < -tol * base) return false;
    if (k == 1) return true;
    const double s2 = lo * hi;
    return s2 >= -tol * base * base;
}

}  // namespace

std::vector<uint8_t> k_convexity_mask(const GridFunction& u, int k, double tol) {
    const GridDomain& d = u.domain;
    if (k < 1 || k > d.dim()) throw std::domain_error("k_convexity_mask: k out of range");
    if (!(tol > 0.0)) throw std::invalid_argument("k_convexity_mask: tol must be positive");
    const double inv_h2 = 1.0 / (d.spacing() * d.spacing());
    std::vector<uint8_t> ok(d.node_count(), 0);

    if (d.dim() == 1) {
        for (int i = 1; i < d.nx() - 1; ++i) {
            const size_t node = d.index(i);
            if (!d.is_interior(node)) continue;
            const double h2 = (u.values[node - 1] - 2.0 * u.values[node] + u.values[node + 1]) * inv_h2;
            const double base = std::max(1.0, std::fabs(h2));
            ok[node] = h2 >= -tol * base ? 1 : 0;
        }
        return ok;
    }

    const int nx = d.nx();
    for (int iy = 1; iy < d.ny() - 1; ++iy) {
        for (int ix = 1; ix < nx - 1; ++ix) {
            const size_t node = d.index(ix, iy);
            if (!d.is_interior(node)) continue;
            const auto& v = u.values;
            const double hxx = (v[node - 1] - 2.0 * v[node] + v[node + 1]) * inv_h2;
            const double hyy = (v[node - nx] - 2.0 * v[node] + v[node + nx]) * inv_h2;
            const double hxy = (v[node + nx + 1] + v[node - nx - 1] - v[node + nx - 1] -
                                v[node - nx + 1]) *
                               0.25 * inv_h2;
            ok[node] = hessian_in_cone(hxx, hyy, hxy, k, tol) ? 1 : 0;
        }
    }
    return ok;
}

ContactSetResult upper_k_envelope(const GridFunction& u, int k, double tol, int max_iter) {
    const GridDomain& d = u.domain;
    if (k < 1 || k > d.dim()) throw std::domain_error("upper_k_envelope: k out of range");
    if (!(tol > 0.0)) throw std::invalid_argument("upper_k_envelope: tol must be positive");
    if (max_iter < 1) throw std::invalid_argument("upper_k_envelope: max_iter must be >= 1");

    const double osc = u.osc();
    const double scale = std::max(osc, 1e-30);
    const double stop = tol * scale;
    const int nx = d.nx();
    const int ny = d.ny();

    // Start from the constant majorant and sweep downward.
    double top = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < u.values.size(); ++i) top = std::max(top, u.values[i]);
    std::vector<double> w = u.values;
    for (size_t i = 0; i < w.size(); ++i)
        if (d.is_interior(i)) w[i] = top;

    // Target for the node: smallest value making the binding discrete
    // constraint active given the neighbours. k = 1 is the five-point mean
    // (trace constraint). k = 2 uses directional second differences along
    // the axes and both diagonals: concave functions satisfy those chord
    // inequalities exactly at any spacing, so the scheme is monotone and
    // keeps true concave majorants feasible (the four-point cross term does
    // not, and its least majorant drifts O(h) off the hull at oblique
    // ridges).
    auto target_1d = [&](size_t node) {
        return 0.5 * (w[node - 1] + w[node + 1]);
    };
    // Chord directions by stencil radius; co-prime offsets up to radius 3
    // bring the angular gaps down to ~11 degrees.
    struct Dir {
        int dx, dy;
    };
    static constexpr Dir kRadius2[] = {{2, 1}, {1, 2}, {2, -1}, {1, -2}};
    static constexpr Dir kRadius3[] = {{3, 1}, {1, 3}, {3, -1}, {1, -3},
                                       {3, 2}, {2, 3}, {3, -2}, {2, -3}};
    static constexpr Dir kRadius4[] = {{4, 1}, {1, 4}, {4, -1}, {1, -4},
                                       {4, 3}, {3, 4}, {4, -3}, {3, -4}};
    auto target_2d = [&](size_t node, int ix, int iy) {
        const double ew = 0.5 * (w[node - 1] + w[node + 1]);
        const double ns = 0.5 * (w[node - nx] + w[node + nx]);
        if (k == 1) return 0.5 * (ew + ns);
        const double d1 = 0.5 * (w[node - nx - 1] + w[node + nx + 1]);
        const double d2 = 0.5 * (w[node - nx + 1] + w[node + nx - 1]);
        double best = std::max(std::max(ew, ns), std::max(d1, d2));
        auto add = [&](const Dir* dirs, size_t count) {
            for (size_t t = 0; t < count; ++t) {
                const long step = static_cast<long>(dirs[t].dy) * nx + dirs[t].dx;
                best = std::max(best, 0.5 * (w[node - step] + w[node + step]));
            }
        };
        if (ix >= 2 && ix + 2 < nx && iy >= 2 && iy + 2 < ny) add(kRadius2, std::size(kRadius2));
        if (ix >= 3 && ix + 3 < nx && iy >= 3 && iy + 3 < ny) add(kRadius3, std::size(kRadius3));
        if (ix >= 4 && ix + 4 < nx && iy >= 4 && iy + 4 < ny) add(kRadius4, std::size(kRadius4));
        return best;
    };

    constexpr double kDamping = 0.9;
    int iter = 0;
    double max_update = 0.0;
    bool converged = false;
    for (; iter < max_iter; ++iter) {
        max_update = 0.0;
        // Red-black ordering, fixed: parity of ix+iy, red first.
        for (int color = 0; color < 2; ++color) {
            for (int iy = 0; iy < ny; ++iy) {
                for (int ix = (iy + color) % 2; ix < nx; ix += 2) {
                    const size_t node = d.index(ix, iy);
                    if (!d.is_interior(node)) continue;
                    const double want = std::max(
                        u.values[node], d.dim() == 1 ? target_1d(node) : target_2d(node, ix, iy));
                    const double next = w[node] + kDamping * (want - w[node]);
                    max_update = std::max(max_update, std::fabs(next - w[node]));
                    w[node] = next;
                }
            }
        }
        if (max_update < stop) {
            converged = true;
            ++iter;
            break;
        }
    }

    const double contact_tol = std::max(tol, kMembershipTol) * scale;
    std::vector<uint8_t> contact(d.node_count(), 0);
    for (size_t i = 0; i < w.size(); ++i)
        if (d.is_interior(i) && std::fabs(w[i] - u.values[i]) <= contact_tol) contact[i] = 1;

    ContactSetResult out{GridFunction(d, std::move(w)), std::move(contact), contact_tol, converged,
                         iter, max_update};
    return out;
}

GradientCheck gradient_norm_check(const GridFunction& v, int k, double r, double kappa) {
    const GridDomain& d = v.domain;
    const int n = d.dim();
    if (k < 1 || k > n) throw std::domain_error("gradient_norm_check: k out of range");
    if (!(r >= 1.0)) throw std::domain_error("gradient_norm_check: r must be >= 1");
    if (k < n && !(r < static_cast<double>(n) * k / (n - k)))
        throw std::domain_error("gradient_norm_check: r must be below n*k/(n-k)");
    if (!(kappa > 0.0 && kappa < 0.5))
        throw std::domain_error("gradient_norm_check: kappa must lie in (0, 1/2)");

    const double cutoff = kappa * d.diam();
    std::vector<uint8_t> omega_prime(d.node_count(), 0);
    size_t count = 0;
    for (size_t i = 0; i < d.node_count(); ++i) {
        if (!d.is_interior(i)) continue;
        if (d.distance_to_boundary(i) >= cutoff) {
            omega_prime[i] = 1;
            ++count;
        }
    }
    if (count == 0) throw std::domain_error("gradient_norm_check: empty interior subdomain");

    const double h = d.spacing();
    const double inv_2h = 0.5 / h;
    const double cell = std::pow(h, n);
    double pow_sum;
    if (n == 1)
        pow_sum = kernels::masked_gradient_pow_sum_1d(v.values.data(), omega_prime.data(), d.nx(),
                                                      inv_2h, r);
    else
        pow_sum = kernels::masked_gradient_pow_sum_2d(v.values.data(), omega_prime.data(), d.nx(),
                                                      d.ny(), inv_2h, r);
    const double lhs = std::pow(pow_sum * cell, 1.0 / r);
    const double rhs = std::pow(d.diam(), (n - r) / r) * v.sup_abs();
    const double required_c = rhs > 0.0 ? lhs / rhs : 0.0;
    return GradientCheck{lhs, rhs, required_c, count};
}

}  // namespace garding
