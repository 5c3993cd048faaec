#include "garding/reference.hpp"

#include "garding/sym_poly.hpp"

#include <limits>
#include <numeric>

namespace garding::reference {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

double esf_enumeration(std::span<const double> values, int k) {
    const int n = static_cast<int>(values.size());
    if (k < 0 || k > n) throw std::domain_error("esf_enumeration: k out of range");
    if (k == 0) return 1.0;
    double total = 0.0;
    for (unsigned bits = 0; bits < (1u << n); ++bits) {
        if (__builtin_popcount(bits) != k) continue;
        double prod = 1.0;
        for (int i = 0; i < n; ++i)
            if (bits & (1u << i)) prod *= values[static_cast<size_t>(i)];
        total += prod;
    }
    return total;
}

SliceScan brute_force_rho_star(const SpectrumVector& lambda, int k, double step) {
    const int n = lambda.dim();
    if (n > 3) throw std::domain_error("brute_force_rho_star: supports n <= 3");
    if (k < 2 || k > n) throw std::domain_error("brute_force_rho_star: k must be in [2, n]");
    const SliceBounds bounds = gamma_k_slice_bounds(n, k);
    const double scale = norm2(lambda.raw());
    const double binom = binomial(n, k);

    SliceScan out;
    double best_ratio = kInf;
    double slice_min = kInf;

    auto consider = [&](const double* mu) {
        std::array<double, kMaxDim + 1> s{};
        elementary_symmetric_sequence({mu, static_cast<size_t>(n)}, k, s);
        for (int j = 2; j <= k; ++j)
            if (s[static_cast<size_t>(j)] < 0.0) return;
        double obj = 0.0;
        for (int i = 0; i < n; ++i) obj += lambda[i] * mu[i];
        slice_min = std::min(slice_min, obj);
        const double normalized = s[static_cast<size_t>(k)] / binom;
        if (normalized <= 1e-12) return;
        const double rho = std::pow(normalized, 1.0 / k);
        best_ratio = std::min(best_ratio, obj / static_cast<double>(n) / rho);
    };

    // lambda ascending, mu descending: pair lambda[0] with the largest
    // component, so the scan stores mu in descending order.
    if (n == 2) {
        double mu[2];
        for (double m0 = 1.0; m0 <= bounds.upper + 1e-12; m0 += step) {
            mu[0] = m0;  // largest component pairs with the smallest lambda
            mu[1] = 2.0 - m0;
            consider(mu);
        }
    } else {
        double mu[3];
        for (double m0 = 1.0; m0 <= bounds.upper + 1e-12; m0 += step) {
            const double lo = std::max(bounds.lower, (3.0 - m0) / 2.0);
            const double hi = std::min(m0, 3.0 - m0 - bounds.lower);
            for (double m1 = lo; m1 <= hi + 1e-12; m1 += step) {
                // descending (m0 >= m1 >= m2) against lambda ascending.
                mu[0] = m0;
                mu[1] = m1;
                mu[2] = 3.0 - m0 - m1;
                consider(mu);
            }
        }
    }

    out.slice_min = slice_min;
    if (slice_min < -1e-6 * scale) {
        out.unbounded = true;
        out.value = -kInf;
    } else {
        out.value = best_ratio;
    }
    return out;
}

std::vector<double> upper_hull_1d(std::span<const double> x, std::span<const double> u) {
    const size_t n = x.size();
    if (u.size() != n || n < 2) throw std::invalid_argument("upper_hull_1d: bad input");
    // Monotone chain over points already sorted in x.
    std::vector<size_t> hull;
    for (size_t i = 0; i < n; ++i) {
        while (hull.size() >= 2) {
            const size_t a = hull[hull.size() - 2];
            const size_t b = hull[hull.size() - 1];
            const double cross =
                (x[b] - x[a]) * (u[i] - u[a]) - (u[b] - u[a]) * (x[i] - x[a]);
            if (cross >= 0.0)
                hull.pop_back();  // b below the chord a-i: not on the upper hull
            else
                break;
        }
        hull.push_back(i);
    }
    std::vector<double> env(n);
    size_t seg = 0;
    for (size_t i = 0; i < n; ++i) {
        while (seg + 1 < hull.size() && x[hull[seg + 1]] < x[i]) ++seg;
        const size_t a = hull[seg];
        const size_t b = hull[std::min(seg + 1, hull.size() - 1)];
        if (a == b || x[b] == x[a]) {
            env[i] = u[a];
        } else {
            const double t = (x[i] - x[a]) / (x[b] - x[a]);
            env[i] = u[a] + t * (u[b] - u[a]);
        }
    }
    return env;
}

namespace {

/// minimize c.z over {a_i.z >= b_i} within a |z_j| <= box, by Seidel's
/// randomized incremental algorithm (dimensions 1..3).
struct LpProblem {
    std::vector<std::array<double, 3>> a;
    std::vector<double> b;
};

constexpr double kLpEps = 1e-9;

bool lp_seidel(const LpProblem& prob, const std::vector<int>& order, const double* c,
               const double* box, int dim, double* z);

/// Reduce onto the hyperplane of constraint `pivot` and recurse.
bool lp_on_hyperplane(const LpProblem& prob, const std::vector<int>& order, size_t upto,
                      int pivot, const double* c, const double* box, int dim, double* z) {
    const auto& ap = prob.a[static_cast<size_t>(pivot)];
    const double bp = prob.b[static_cast<size_t>(pivot)];
    int drop = 0;
    for (int j = 1; j < dim; ++j)
        if (std::fabs(ap[static_cast<size_t>(j)]) > std::fabs(ap[static_cast<size_t>(drop)]))
            drop = j;
    const double ad = ap[static_cast<size_t>(drop)];
    if (std::fabs(ad) < 1e-14) return false;

    // z_drop = (bp - sum_{j != drop} ap_j z_j) / ad
    auto reduce_row = [&](const std::array<double, 3>& row, double rhs,
                          std::array<double, 3>& out_row, double& out_rhs) {
        const double factor = row[static_cast<size_t>(drop)] / ad;
        int t = 0;
        for (int j = 0; j < dim; ++j) {
            if (j == drop) continue;
            out_row[static_cast<size_t>(t++)] =
                row[static_cast<size_t>(j)] - factor * ap[static_cast<size_t>(j)];
        }
        out_rhs = rhs - factor * bp;
    };

    LpProblem sub;
    std::vector<int> sub_order;
    for (size_t t = 0; t < upto; ++t) {
        const int idx = order[t];
        std::array<double, 3> row{};
        double rhs = 0.0;
        reduce_row(prob.a[static_cast<size_t>(idx)], prob.b[static_cast<size_t>(idx)], row, rhs);
        sub.a.push_back(row);
        sub.b.push_back(rhs);
        sub_order.push_back(static_cast<int>(sub.a.size()) - 1);
    }
    // The dropped variable's box becomes two general constraints.
    {
        std::array<double, 3> row_hi{};
        std::array<double, 3> row_lo{};
        double rhs_hi = 0.0, rhs_lo = 0.0;
        std::array<double, 3> unit{};
        unit[static_cast<size_t>(drop)] = 1.0;
        reduce_row(unit, -box[static_cast<size_t>(drop)], row_hi, rhs_hi);  // z_drop >= -M
        for (int j = 0; j < 3; ++j) unit[static_cast<size_t>(j)] = 0.0;
        unit[static_cast<size_t>(drop)] = -1.0;
        reduce_row(unit, -box[static_cast<size_t>(drop)], row_lo, rhs_lo);  // -z_drop >= -M
        sub.a.push_back(row_hi);
        sub.b.push_back(rhs_hi);
        sub_order.push_back(static_cast<int>(sub.a.size()) - 1);
        sub.a.push_back(row_lo);
        sub.b.push_back(rhs_lo);
        sub_order.push_back(static_cast<int>(sub.a.size()) - 1);
    }

    double c_sub[3] = {0.0, 0.0, 0.0};
    double box_sub[3] = {0.0, 0.0, 0.0};
    {
        const double factor = c[drop] / ad;
        int t = 0;
        for (int j = 0; j < dim; ++j) {
            if (j == drop) continue;
            c_sub[t] = c[j] - factor * ap[static_cast<size_t>(j)];
            box_sub[t] = box[j];
            ++t;
        }
    }

    double z_sub[3] = {0.0, 0.0, 0.0};
    if (!lp_seidel(sub, sub_order, c_sub, box_sub, dim - 1, z_sub)) return false;

    int t = 0;
    double acc = bp;
    for (int j = 0; j < dim; ++j) {
        if (j == drop) continue;
        z[j] = z_sub[t];
        acc -= ap[static_cast<size_t>(j)] * z_sub[t];
        ++t;
    }
    z[drop] = acc / ad;
    return true;
}

bool lp_seidel(const LpProblem& prob, const std::vector<int>& order, const double* c,
               const double* box, int dim, double* z) {
    if (dim == 1) {
        double lo = -box[0];
        double hi = box[0];
        for (const int idx : order) {
            const double a = prob.a[static_cast<size_t>(idx)][0];
            const double b = prob.b[static_cast<size_t>(idx)];
            if (std::fabs(a) < 1e-14) {
                if (b > kLpEps) return false;
                continue;
            }
            if (a > 0.0)
                lo = std::max(lo, b / a);
            else
                hi = std::min(hi, b / a);
        }
        if (lo > hi + kLpEps) return false;
        z[0] = c[0] >= 0.0 ? lo : hi;
        return true;
    }

    for (int j = 0; j < dim; ++j) z[j] = c[j] >= 0.0 ? -box[j] : box[j];
    for (size_t t = 0; t < order.size(); ++t) {
        const int idx = order[t];
        const auto& row = prob.a[static_cast<size_t>(idx)];
        double lhs = 0.0;
        double row_scale = 0.0;
        for (int j = 0; j < dim; ++j) {
            lhs += row[static_cast<size_t>(j)] * z[j];
            row_scale = std::max(row_scale, std::fabs(row[static_cast<size_t>(j)]) * box[j]);
        }
        const double slack_tol = kLpEps * std::max(1.0, row_scale);
        if (lhs >= prob.b[static_cast<size_t>(idx)] - slack_tol) continue;
        if (!lp_on_hyperplane(prob, order, t, idx, c, box, dim, z)) return false;
    }
    return true;
}

}  // namespace

GridFunction concave_envelope_lp(const GridFunction& u, uint64_t seed) {
    const GridDomain& d = u.domain;
    if (d.dim() != 2) throw std::invalid_argument("concave_envelope_lp: needs a 2D grid");
    const int nx = d.nx();
    const int ny = d.ny();
    const size_t count = d.node_count();

    double umax = -kInf;
    for (const double v : u.values) umax = std::max(umax, v);
    const double osc = std::max(u.osc(), 1e-12);
    const double extent = std::max((nx - 1) * d.spacing(), (ny - 1) * d.spacing());
    const double slope_box = 64.0 * osc / d.spacing();
    const double offset_box = std::fabs(umax) + slope_box * extent + 1.0;

    LpProblem prob;
    prob.a.reserve(count);
    prob.b.reserve(count);
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
            prob.a.push_back({ix * d.spacing(), iy * d.spacing(), 1.0});
            prob.b.push_back(u.values[d.index(ix, iy)]);
        }

    std::vector<int> order(count);
    std::iota(order.begin(), order.end(), 0);

    std::vector<double> env(count);
    Rng rng(seed);
    const double box[3] = {slope_box, slope_box, offset_box};
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            // Fisher-Yates under the shared generator: node-order dependent
            // but fully deterministic for a fixed seed.
            for (size_t t = count - 1; t > 0; --t)
                std::swap(order[t], order[static_cast<size_t>(rng.uniform_int(0, static_cast<int>(t)))]);
            const double c[3] = {ix * d.spacing(), iy * d.spacing(), 1.0};
            double z[3] = {0.0, 0.0, 0.0};
            if (!lp_seidel(prob, order, c, box, 3, z))
                throw std::runtime_error("concave_envelope_lp: LP infeasible");
            env[d.index(ix, iy)] = c[0] * z[0] + c[1] * z[1] + z[2];
        }
    }
    return GridFunction(d, std::move(env));
}

SpectrumVector sample_gamma_boundary(int n, int k, Rng& rng) {
    for (int attempt = 0; attempt < 256; ++attempt) {
        VecN dir(n);
        for (int i = 0; i < n; ++i) dir[i] = rng.normal();

        auto min_esf = [&](double t) {
            std::array<double, kMaxDim> point{};
            for (int i = 0; i < n; ++i) point[static_cast<size_t>(i)] = 1.0 + t * dir[i];
            std::array<double, kMaxDim + 1> s{};
            elementary_symmetric_sequence({point.data(), static_cast<size_t>(n)}, k, s);
            double m = kInf;
            for (int j = 1; j <= k; ++j) m = std::min(m, s[static_cast<size_t>(j)]);
            return m;
        };

        double hi = 1.0;
        bool crossed = false;
        for (int grow = 0; grow < 60; ++grow) {
            if (min_esf(hi) < 0.0) {
                crossed = true;
                break;
            }
            hi *= 2.0;
        }
        if (!crossed) continue;

        double lo = 0.0;
        for (int iter = 0; iter < 200; ++iter) {
            const double mid = 0.5 * (lo + hi);
            if (min_esf(mid) >= 0.0)
                lo = mid;
            else
                hi = mid;
        }
        VecN point(n);
        for (int i = 0; i < n; ++i) point[i] = 1.0 + lo * dir[i];
        return SpectrumVector(point);
    }
    throw std::runtime_error("sample_gamma_boundary: no crossing direction found");
}

SymmetricMatrix random_conjugation(const VecN& eigenvalues, Rng& rng) {
    const int n = eigenvalues.n;
    std::array<double, kMaxDim * kMaxDim> q{};
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) q[static_cast<size_t>(i) * n + j] = rng.normal();
        for (int prev = 0; prev < i; ++prev) {
            double proj = 0.0;
            for (int j = 0; j < n; ++j)
                proj += q[static_cast<size_t>(i) * n + j] * q[static_cast<size_t>(prev) * n + j];
            for (int j = 0; j < n; ++j)
                q[static_cast<size_t>(i) * n + j] -= proj * q[static_cast<size_t>(prev) * n + j];
        }
        double norm = 0.0;
        for (int j = 0; j < n; ++j)
            norm += q[static_cast<size_t>(i) * n + j] * q[static_cast<size_t>(i) * n + j];
        norm = std::sqrt(norm);
        if (norm < 1e-8) return random_conjugation(eigenvalues, rng);  // degenerate draw
        for (int j = 0; j < n; ++j) q[static_cast<size_t>(i) * n + j] /= norm;
    }
    SymmetricMatrix m(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            double entry = 0.0;
            for (int t = 0; t < n; ++t)
                entry += q[static_cast<size_t>(t) * n + i] * eigenvalues[t] *
                         q[static_cast<size_t>(t) * n + j];
            m.set(i, j, entry);
        }
    }
    return m;
}

}  // namespace garding::reference
