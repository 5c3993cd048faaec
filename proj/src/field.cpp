#include "garding/field.hpp"

#include "garding/abp.hpp"
#include "garding/dual_cone.hpp"
#include "garding/rng.hpp"

namespace garding {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

/// One low-order trigonometric mode over normalized grid coordinates.
struct TrigMode {
    double amp = 0.0;
    double fx = 1.0;
    double fy = 0.0;
    double phase = 0.0;

    static TrigMode draw(Rng& rng, double amp_scale) {
        TrigMode m;
        m.amp = amp_scale * rng.uniform(0.5, 1.0);
        m.fx = rng.uniform_int(1, 2);
        m.fy = rng.uniform_int(0, 2);
        m.phase = rng.uniform(0.0, kTwoPi);
        return m;
    }
    double operator()(double xn, double yn) const {
        return amp * std::sin(kTwoPi * (fx * xn + fy * yn) + phase);
    }
};

}  // namespace

SymmetricMatrixField::SymmetricMatrixField(GridDomain d, int matrix_dim)
    : domain(std::move(d)), mat_dim(matrix_dim) {
    if (matrix_dim < 1 || matrix_dim > kMaxDim)
        throw std::invalid_argument("SymmetricMatrixField: matrix dimension out of range");
    const size_t nodes = domain.node_count();
    a.assign(static_cast<size_t>(matrix_dim) * (matrix_dim + 1) / 2,
             std::vector<double>(nodes, 0.0));
}

SymmetricMatrixField SymmetricMatrixField::constant(const GridDomain& d,
                                                    const SymmetricMatrix& matrix) {
    SymmetricMatrixField field(d, matrix.dim());
    size_t comp = 0;
    for (int i = 0; i < matrix.dim(); ++i) {
        for (int j = i; j < matrix.dim(); ++j) {
            std::fill(field.a[comp].begin(), field.a[comp].end(), matrix(i, j));
            ++comp;
        }
    }
    return field;
}

void SymmetricMatrixField::enable_drift() {
    if (b.empty())
        b.assign(static_cast<size_t>(mat_dim), std::vector<double>(domain.node_count(), 0.0));
}

void SymmetricMatrixField::enable_zero_order() {
    if (c.empty()) c.assign(domain.node_count(), 0.0);
}

void SymmetricMatrixField::validate() const {
    const size_t nodes = domain.node_count();
    if (a.size() != static_cast<size_t>(mat_dim) * (mat_dim + 1) / 2)
        throw std::invalid_argument("SymmetricMatrixField: component count mismatch");
    for (const auto& comp : a)
        if (comp.size() != nodes)
            throw std::invalid_argument("SymmetricMatrixField: component size mismatch");
    if (!b.empty() && b.size() != static_cast<size_t>(mat_dim))
        throw std::invalid_argument("SymmetricMatrixField: drift component count mismatch");
    for (const auto& comp : b)
        if (comp.size() != nodes)
            throw std::invalid_argument("SymmetricMatrixField: drift size mismatch");
    if (!c.empty()) {
        if (c.size() != nodes) throw std::invalid_argument("SymmetricMatrixField: c size mismatch");
        for (size_t node = 0; node < nodes; ++node)
            if (domain.is_interior(node) && c[node] > 0.0)
                throw std::invalid_argument("SymmetricMatrixField: zero-order term must be <= 0");
    }
}

SymmetricMatrix SymmetricMatrixField::matrix_at(size_t node) const {
    SymmetricMatrix m(mat_dim);
    size_t comp = 0;
    for (int i = 0; i < mat_dim; ++i)
        for (int j = i; j < mat_dim; ++j) m.set(i, j, a[comp++][node]);
    return m;
}

VecN SymmetricMatrixField::drift_at(size_t node) const {
    VecN v(mat_dim);
    for (int d = 0; d < mat_dim; ++d) v[d] = b.empty() ? 0.0 : b[static_cast<size_t>(d)][node];
    return v;
}

double SymmetricMatrixField::drift_magnitude_at(size_t node) const {
    if (b.empty()) return 0.0;
    double s = 0.0;
    for (int d = 0; d < mat_dim; ++d) {
        const double bd = b[static_cast<size_t>(d)][node];
        s += bd * bd;
    }
    return std::sqrt(s);
}

SymmetricMatrixField sample_operator_field(uint64_t seed, const GridDomain& domain, int mat_dim,
                                           int k, FieldMode mode, const FieldOptions& opts) {
    if (k < 1 || k > mat_dim) throw std::domain_error("sample_operator_field: k out of range");
    SymmetricMatrixField field(domain, mat_dim);
    const int nx = domain.nx();
    const int ny = domain.ny();
    const double xden = std::max(nx - 1, 1);
    const double yden = std::max(ny - 1, 1);

    auto apply_extras = [&](Rng& rng) {
        if (opts.drift_scale > 0.0) {
            field.enable_drift();
            for (int d = 0; d < mat_dim; ++d) {
                const TrigMode mode_d = TrigMode::draw(rng, 1.0);
                const double base = rng.uniform(-1.0, 1.0);
                for (int iy = 0; iy < ny; ++iy)
                    for (int ix = 0; ix < nx; ++ix)
                        field.b[static_cast<size_t>(d)][domain.index(ix, iy)] =
                            opts.drift_scale * (base + mode_d(ix / xden, iy / yden));
            }
        }
        if (opts.with_zero_order) {
            field.enable_zero_order();
            const TrigMode mode_c = TrigMode::draw(rng, 0.5);
            const double base = rng.uniform(0.5, 1.5);
            for (int iy = 0; iy < ny; ++iy)
                for (int ix = 0; ix < nx; ++ix)
                    field.c[domain.index(ix, iy)] =
                        -std::fabs(base + mode_c(ix / xden, iy / yden));
        }
    };

    if (mode == FieldMode::identity) {
        Rng rng(seed);
        size_t comp = 0;
        for (int i = 0; i < mat_dim; ++i)
            for (int j = i; j < mat_dim; ++j, ++comp)
                if (i == j) std::fill(field.a[comp].begin(), field.a[comp].end(), 1.0);
        apply_extras(rng);
        field.validate();
        return field;
    }

    // chi > 0 needs trace/lambda_min below n(n-1)/(n-k); unreachable at k=1
    // where the threshold n(n-1)/(n-1) = n is the isotropic floor.
    const bool isotropic = (k == 1);
    const double threshold = (k == mat_dim)
                                 ? 3.0 * mat_dim
                                 : static_cast<double>(mat_dim) * (mat_dim - 1) / (mat_dim - k);
    if (mode == FieldMode::chi_positive && k == 1 && mat_dim > 1)
        throw std::domain_error("sample_operator_field: chi_positive unreachable for k = 1");

    int rejected = 0;
    for (int attempt = 0;; ++attempt) {
        Rng rng(seed + static_cast<uint64_t>(attempt) * 0x9e3779b97f4a7c15ULL);
        const double level_base = rng.uniform(0.5, 2.0);
        const TrigMode level_mode = TrigMode::draw(rng, 0.3);

        if (isotropic || mat_dim == 1) {
            for (int iy = 0; iy < ny; ++iy) {
                for (int ix = 0; ix < nx; ++ix) {
                    const size_t node = domain.index(ix, iy);
                    const double level = level_base * (1.0 + level_mode(ix / xden, iy / yden));
                    size_t comp = 0;
                    for (int i = 0; i < mat_dim; ++i)
                        for (int j = i; j < mat_dim; ++j) field.a[comp++][node] = (i == j) ? level : 0.0;
                }
            }
            apply_extras(rng);
            field.validate();
            return field;
        }

        const double a0_target =
            static_cast<double>(mat_dim) + (threshold - mat_dim) * rng.uniform(0.25, 0.7);
        const double spread = (a0_target - mat_dim) / std::max(mat_dim - 1, 1);

        std::vector<TrigMode> ratio_modes;
        std::vector<TrigMode> angle_modes;
        for (int i = 1; i < mat_dim; ++i) {
            ratio_modes.push_back(TrigMode::draw(rng, 0.5));
            angle_modes.push_back(TrigMode::draw(rng, 0.4));
        }
        // Fixed orthogonal base for dimensions above 2 (Gram-Schmidt on a
        // Gaussian draw); the spatial variation rides on one rotation plane.
        std::array<double, kMaxDim * kMaxDim> q0{};
        for (int i = 0; i < mat_dim; ++i) {
            for (int j = 0; j < mat_dim; ++j) q0[static_cast<size_t>(i) * mat_dim + j] = rng.normal();
            for (int prev = 0; prev < i; ++prev) {
                double proj = 0.0;
                for (int j = 0; j < mat_dim; ++j)
                    proj += q0[static_cast<size_t>(i) * mat_dim + j] *
                            q0[static_cast<size_t>(prev) * mat_dim + j];
                for (int j = 0; j < mat_dim; ++j)
                    q0[static_cast<size_t>(i) * mat_dim + j] -=
                        proj * q0[static_cast<size_t>(prev) * mat_dim + j];
            }
            double norm = 0.0;
            for (int j = 0; j < mat_dim; ++j)
                norm += q0[static_cast<size_t>(i) * mat_dim + j] *
                        q0[static_cast<size_t>(i) * mat_dim + j];
            norm = std::sqrt(norm);
            for (int j = 0; j < mat_dim; ++j) q0[static_cast<size_t>(i) * mat_dim + j] /= norm;
        }

        bool ok = true;
        for (int iy = 0; iy < ny && ok; ++iy) {
            for (int ix = 0; ix < nx && ok; ++ix) {
                const size_t node = domain.index(ix, iy);
                const double xn = ix / xden;
                const double yn = iy / yden;
                const double lmin = level_base * (1.0 + level_mode(xn, yn));

                VecN eig(mat_dim);
                eig[0] = lmin;
                for (int i = 1; i < mat_dim; ++i)
                    eig[i] = lmin * (1.0 + spread * 0.5 * (1.0 + ratio_modes[static_cast<size_t>(i - 1)](xn, yn)));

                // Rotate: Q = G(theta(x)) applied to the fixed base in the
                // (0,1) plane; smooth in x by construction.
                const double theta = angle_modes[0](xn, yn) * kTwoPi * 0.25;
                const double cs = std::cos(theta);
                const double sn = std::sin(theta);
                std::array<double, kMaxDim * kMaxDim> q = q0;
                for (int j = 0; j < mat_dim; ++j) {
                    const double r0 = q0[j];
                    const double r1 = q0[static_cast<size_t>(mat_dim) + j];
                    q[static_cast<size_t>(j)] = cs * r0 - sn * r1;
                    q[static_cast<size_t>(mat_dim) + j] = sn * r0 + cs * r1;
                }

                size_t comp = 0;
                for (int i = 0; i < mat_dim; ++i) {
                    for (int j = i; j < mat_dim; ++j) {
                        double entry = 0.0;
                        for (int t = 0; t < mat_dim; ++t)
                            entry += q[static_cast<size_t>(t) * mat_dim + i] * eig[t] *
                                     q[static_cast<size_t>(t) * mat_dim + j];
                        field.a[comp++][node] = entry;
                    }
                }

                if (mode == FieldMode::dual_interior && domain.is_interior(node)) {
                    const ConeLabel label = dual_cone_membership(SpectrumVector(eig), k);
                    if (label.membership != Membership::interior) {
                        ok = false;
                        if (++rejected >= 10000)
                            throw std::runtime_error(
                                "sample_operator_field: rejection limit exceeded");
                    }
                }
            }
        }
        if (ok) {
            apply_extras(rng);
            field.validate();
            return field;
        }
    }
}

GridDomain disk_domain(double radius, double spacing) {
    if (!(radius > 0.0) || !(spacing > 0.0))
        throw std::invalid_argument("disk_domain: radius and spacing must be positive");
    const int m = static_cast<int>(std::ceil(radius / spacing)) + 1;
    const int side = 2 * m + 1;
    std::vector<uint8_t> mask(static_cast<size_t>(side) * side, 0);
    for (int iy = 0; iy < side; ++iy) {
        for (int ix = 0; ix < side; ++ix) {
            const double dx = (ix - m) * spacing;
            const double dy = (iy - m) * spacing;
            if (dx * dx + dy * dy < radius * radius)
                mask[static_cast<size_t>(iy) * side + ix] = 1;
        }
    }
    return GridDomain::rect(side, side, spacing, std::move(mask));
}

GridFunction random_smooth_function(uint64_t seed, const GridDomain& domain,
                                    bool nonpositive_boundary) {
    Rng rng(seed);
    std::vector<TrigMode> modes;
    const int mode_count = 3;
    for (int i = 0; i < mode_count; ++i) modes.push_back(TrigMode::draw(rng, 0.6));
    const double cx = rng.uniform(0.35, 0.65);
    const double cy = rng.uniform(0.35, 0.65);
    const double xden = std::max(domain.nx() - 1, 1);
    const double yden = std::max(domain.ny() - 1, 1);

    double bump = rng.uniform(0.5, 1.5);
    for (int round = 0; round < 12; ++round) {
        std::vector<double> vals(domain.node_count());
        for (int iy = 0; iy < domain.ny(); ++iy) {
            for (int ix = 0; ix < domain.nx(); ++ix) {
                const double xn = ix / xden;
                const double yn = domain.dim() == 2 ? iy / yden : 0.0;
                double v = 0.0;
                for (const auto& mode : modes) v += mode(xn, yn);
                const double dx = xn - cx;
                const double dy = yn - cy;
                v += bump * (0.25 - dx * dx - dy * dy) * 4.0;
                vals[domain.index(ix, iy)] = v;
            }
        }
        GridFunction u(domain, std::move(vals));
        if (!nonpositive_boundary) return u;

        const double shift = u.boundary_sup() + 0.02 * std::max(u.osc(), 1e-12);
        for (auto& v : u.values) v -= shift;
        if (u.interior_sup() > 0.0) return u;
        bump *= 2.0;  // raise the interior peak until it clears the boundary
    }
    throw std::runtime_error("random_smooth_function: could not raise interior above boundary");
}

ManufacturedProblem make_manufactured_problem(SymmetricMatrixField field, GridFunction u) {
    if (!field.domain.same_layout(u.domain))
        throw std::invalid_argument("make_manufactured_problem: domain mismatch");
    field.validate();
    GridFunction f = apply_operator(field, u);
    const double bsup = u.boundary_sup();
    return ManufacturedProblem{std::move(field), std::move(u), std::move(f), bsup};
}

}  // namespace garding
