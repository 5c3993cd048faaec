#include "garding/abp.hpp"

#include "garding/dual_cone.hpp"
#include "garding/ellipticity.hpp"
#include "garding/kernels.hpp"

namespace garding {

namespace {

void check_operator_field(const SymmetricMatrixField& field, const GridFunction& u) {
    if (!field.domain.same_layout(u.domain))
        throw std::invalid_argument("apply_operator: domain mismatch");
    if (field.mat_dim != field.domain.dim())
        throw std::invalid_argument("apply_operator: matrix dimension must match spatial dimension");
}

}  // namespace

GridFunction apply_operator(const SymmetricMatrixField& field, const GridFunction& u) {
    check_operator_field(field, u);
    const GridDomain& d = field.domain;
    const double h = d.spacing();
    std::vector<double> out(d.node_count(), 0.0);

    if (d.dim() == 1) {
        const double inv_h2 = 1.0 / (h * h);
        const double inv_2h = 0.5 / h;
        for (int i = 1; i < d.nx() - 1; ++i) {
            const size_t node = d.index(i);
            if (!d.is_interior(node)) continue;
            const auto& v = u.values;
            double lu = field.a[0][node] * (v[node - 1] - 2.0 * v[node] + v[node + 1]) * inv_h2;
            if (field.has_drift()) lu += field.b[0][node] * (v[node + 1] - v[node - 1]) * inv_2h;
            if (field.has_zero_order()) lu += field.c[node] * v[node];
            out[node] = lu;
        }
        return GridFunction(d, std::move(out));
    }

    const int nx = d.nx();
    const double inv_h2 = 1.0 / (h * h);
    const double inv_4h2 = 0.25 * inv_h2;
    const double inv_2h = 0.5 / h;
    for (int iy = 1; iy < d.ny() - 1; ++iy) {
        const size_t row = d.index(1, iy);
        kernels::operator_row_2d(
            u.values.data() + row - nx, u.values.data() + row, u.values.data() + row + nx,
            field.a[0].data() + row, field.a[1].data() + row, field.a[2].data() + row,
            field.has_drift() ? field.b[0].data() + row : nullptr,
            field.has_drift() ? field.b[1].data() + row : nullptr,
            field.has_zero_order() ? field.c.data() + row : nullptr, inv_h2, inv_4h2, inv_2h,
            out.data() + row, nx - 2);
    }
    for (size_t node = 0; node < out.size(); ++node)
        if (!d.is_interior(node)) out[node] = 0.0;
    return GridFunction(d, std::move(out));
}

double weighted_lq_norm(const GridFunction& f, const GridFunction& weight, double q,
                        const std::vector<uint8_t>& mask) {
    if (!(q >= 1.0)) throw std::domain_error("weighted_lq_norm: q must be >= 1");
    if (!f.domain.same_layout(weight.domain))
        throw std::invalid_argument("weighted_lq_norm: domain mismatch");
    if (mask.size() != f.values.size())
        throw std::invalid_argument("weighted_lq_norm: mask size mismatch");
    for (size_t i = 0; i < mask.size(); ++i)
        if (mask[i] && !(weight.values[i] > 0.0))
            throw std::domain_error("weighted_lq_norm: weight not positive on the mask");

    const double s = kernels::masked_pow_sum(f.values.data(), weight.values.data(), mask.data(),
                                             mask.size(), q);
    const double cell = std::pow(f.domain.spacing(), f.domain.dim());
    return std::pow(s * cell, 1.0 / q);
}

const char* to_string(TheoremId id) {
    switch (id) {
        case TheoremId::eq_1_8: return "T1.1/Eq1.8";
        case TheoremId::eq_1_9: return "T1.2/Eq1.9";
        case TheoremId::eq_2_10: return "Eq2.10";
        case TheoremId::eq_2_12: return "Eq2.12";
    }
    return "?";
}

TheoremId theorem_from_string(const std::string& name) {
    if (name == "T1.1/Eq1.8" || name == "eq1.8") return TheoremId::eq_1_8;
    if (name == "T1.2/Eq1.9" || name == "eq1.9") return TheoremId::eq_1_9;
    if (name == "Eq2.10" || name == "eq2.10") return TheoremId::eq_2_10;
    if (name == "Eq2.12" || name == "eq2.12") return TheoremId::eq_2_12;
    throw std::invalid_argument("unknown estimate form: " + name);
}

GridFunction rho_star_weights(const SymmetricMatrixField& field, int k, bool chi_substitution,
                              double value_tol) {
    const GridDomain& d = field.domain;
    const int n = field.mat_dim;
    if (k < 1 || k > n) throw std::domain_error("rho_star_weights: k out of range");
    std::vector<double> w(d.node_count(), 1.0);

    double a0 = 0.0;
    std::vector<double> lmin_cache(d.node_count(), 1.0);
    for (size_t node = 0; node < d.node_count(); ++node) {
        if (!d.is_interior(node)) continue;
        const SymmetricMatrix a = field.matrix_at(node);
        double lmin, trace;
        if (n == 1) {
            lmin = a(0, 0);
            trace = lmin;
        } else {
            const TraceExtremes te = trace_and_extremes(a);
            lmin = te.lambda_min;
            trace = te.trace;
        }
        if (!(lmin > 0.0))
            throw std::domain_error("rho_star_weights: node with lambda_min <= 0");
        lmin_cache[node] = lmin;
        a0 = std::max(a0, trace / lmin);
        if (!chi_substitution) {
            if (n == 1) {
                w[node] = lmin;
            } else {
                const DualEvalResult r =
                    rho_star(eigen_decompose(a).eigenvalues, k, value_tol);
                if (r.status == DualStatus::unbounded_below ||
                    r.status == DualStatus::infeasible_input || !(r.value > 0.0))
                    throw std::domain_error("rho_star_weights: node outside the open dual cone");
                w[node] = r.value;
            }
        }
    }
    if (chi_substitution) {
        const double margin = chi(n, k, a0);
        if (!(margin > 0.0))
            throw std::domain_error("rho_star_weights: chi substitution needs chi > 0");
        for (size_t node = 0; node < d.node_count(); ++node)
            if (d.is_interior(node)) w[node] = lmin_cache[node] * margin * a0;
    }
    return GridFunction(d, std::move(w));
}

ExtendedContact upper_contact_set_extended(const GridFunction& u, int k, double tol,
                                           int max_iter) {
    const GridDomain& d = u.domain;
    const double h = d.spacing();

    // Centroid and circumradius of the domain node set.
    double cx = 0.0, cy = 0.0;
    size_t count = 0;
    auto visit = [&](size_t node) {
        cx += static_cast<double>(node % d.nx()) * h;
        cy += static_cast<double>(node / d.nx()) * h;
        ++count;
    };
    for (size_t node = 0; node < d.node_count(); ++node)
        if (d.is_interior(node)) visit(node);
    for (const int b : d.boundary_nodes()) visit(static_cast<size_t>(b));
    cx /= static_cast<double>(count);
    cy /= static_cast<double>(count);

    double circum = 0.0;
    auto measure = [&](size_t node) {
        const double dx = static_cast<double>(node % d.nx()) * h - cx;
        const double dy = static_cast<double>(node / d.nx()) * h - cy;
        circum = std::max(circum, std::sqrt(dx * dx + dy * dy));
    };
    for (size_t node = 0; node < d.node_count(); ++node)
        if (d.is_interior(node)) measure(node);
    for (const int b : d.boundary_nodes()) measure(static_cast<size_t>(b));

    const double ball = 2.0 * circum;
    const int pad_left_x = std::max(0, static_cast<int>(std::ceil((ball - cx) / h))) + 1;
    const int pad_right_x =
        std::max(0, static_cast<int>(std::ceil((ball - ((d.nx() - 1) * h - cx)) / h))) + 1;
    const int nx0 = d.nx() + pad_left_x + pad_right_x;
    int pad_left_y = 0;
    int ny0 = 1;
    if (d.dim() == 2) {
        pad_left_y = std::max(0, static_cast<int>(std::ceil((ball - cy) / h))) + 1;
        const int pad_right_y =
            std::max(0, static_cast<int>(std::ceil((ball - ((d.ny() - 1) * h - cy)) / h))) + 1;
        ny0 = d.ny() + pad_left_y + pad_right_y;
    }

    const double c0x = cx + pad_left_x * h;
    const double c0y = cy + pad_left_y * h;
    std::vector<uint8_t> mask0(static_cast<size_t>(nx0) * ny0, 0);
    for (int iy = 0; iy < ny0; ++iy) {
        for (int ix = 0; ix < nx0; ++ix) {
            const double dx = ix * h - c0x;
            const double dy = d.dim() == 2 ? iy * h - c0y : 0.0;
            const bool edge =
                ix == 0 || ix == nx0 - 1 || (d.dim() == 2 && (iy == 0 || iy == ny0 - 1));
            if (!edge && dx * dx + dy * dy < ball * ball)
                mask0[static_cast<size_t>(iy) * nx0 + ix] = 1;
        }
    }
    const GridDomain d0 = d.dim() == 2 ? GridDomain::rect(ny0, nx0, h, std::move(mask0))
                                       : GridDomain::line(nx0, h, std::move(mask0));

    // u carried on the original domain node set, zero elsewhere.
    std::vector<double> u0(d0.node_count(), 0.0);
    auto carry = [&](size_t node) {
        const int ix = static_cast<int>(node % d.nx()) + pad_left_x;
        const int iy = static_cast<int>(node / d.nx()) + pad_left_y;
        u0[d0.index(ix, iy)] = u.values[node];
    };
    for (size_t node = 0; node < d.node_count(); ++node)
        if (d.is_interior(node)) carry(node);
    for (const int b : d.boundary_nodes()) carry(static_cast<size_t>(b));

    const ContactSetResult env = upper_k_envelope(GridFunction(d0, std::move(u0)), k, tol, max_iter);

    ExtendedContact out;
    out.converged = env.converged;
    out.contact.assign(d.node_count(), 0);
    for (size_t node = 0; node < d.node_count(); ++node) {
        if (!d.is_interior(node)) continue;
        const int ix = static_cast<int>(node % d.nx()) + pad_left_x;
        const int iy = static_cast<int>(node / d.nx()) + pad_left_y;
        if (env.contact[d0.index(ix, iy)]) {
            out.contact[node] = 1;
            ++out.contact_count;
        }
    }
    return out;
}

namespace {

GridFunction drift_magnitude(const SymmetricMatrixField& field) {
    std::vector<double> mag(field.domain.node_count(), 0.0);
    for (size_t node = 0; node < mag.size(); ++node) mag[node] = field.drift_magnitude_at(node);
    return GridFunction(field.domain, std::move(mag));
}

bool drift_is_zero(const SymmetricMatrixField& field) {
    if (!field.has_drift()) return true;
    for (const auto& comp : field.b)
        for (const double v : comp)
            if (v != 0.0) return false;
    return true;
}

}  // namespace

EstimateReport make_estimate_report(const ManufacturedProblem& problem, TheoremId id, int k,
                                    const ReportParams& params) {
    const SymmetricMatrixField& field = problem.field;
    const GridDomain& d = field.domain;
    const int n = d.dim();
    if (k < 1 || k > n) throw std::domain_error("make_estimate_report: k out of range");
    if (!(params.q >= 1.0)) throw std::domain_error("make_estimate_report: q must be >= 1");
    if (!(params.p > 0.0)) throw std::domain_error("make_estimate_report: p must be positive");

    EstimateReport rep;
    rep.id = id;
    rep.n = n;
    rep.k = k;
    rep.p = params.p;
    rep.q = params.q;
    rep.h = d.spacing();
    rep.chi_substitution = params.chi_substitution;
    rep.tol = params.value_tol;

    rep.lhs = problem.u.interior_sup() - problem.u.boundary_sup();

    const GridFunction w = rho_star_weights(field, k, params.chi_substitution, params.value_tol);

    // (Lu)^- nodewise.
    std::vector<double> neg(problem.f.values.size(), 0.0);
    for (size_t i = 0; i < neg.size(); ++i) neg[i] = std::max(0.0, -problem.f.values[i]);
    const GridFunction lu_neg(d, std::move(neg));

    // Norm domain: the upper k-contact set for the sharp drift form, the
    // whole interior otherwise.
    std::vector<uint8_t> norm_mask = d.interior_mask();
    if (id == TheoremId::eq_2_10) {
        const ExtendedContact contact =
            upper_contact_set_extended(problem.u, k, params.envelope_tol, params.envelope_max_iter);
        norm_mask = contact.contact;
    }

    const double q = params.q;
    const double p = params.p;
    const double diam = d.diam();

    double geometry_base = diam;
    if (id == TheoremId::eq_1_9) {
        // Trace over the dual weight, L^k over the interior, power k/n.
        std::vector<double> tr(d.node_count(), 0.0);
        for (size_t node = 0; node < tr.size(); ++node)
            if (d.is_interior(node)) tr[node] = field.matrix_at(node).trace();
        const double norm_tk = weighted_lq_norm(GridFunction(d, std::move(tr)), w,
                                                static_cast<double>(k), d.interior_mask());
        geometry_base = std::pow(norm_tk, static_cast<double>(k) / n);
    }
    rep.geometry_factor = std::pow(geometry_base, 2.0 - static_cast<double>(n) / q);

    rep.source_norm = weighted_lq_norm(lu_neg, w, q, norm_mask);

    const bool zero_drift = drift_is_zero(field);
    if (zero_drift) {
        rep.drift_factor = 1.0;
    } else if (id == TheoremId::eq_2_12) {
        // |b|^2 over rho* * lambda_min, L^q, exponent q, length scale 2q-n.
        std::vector<double> b2(d.node_count(), 0.0);
        std::vector<double> wl(d.node_count(), 1.0);
        for (size_t node = 0; node < b2.size(); ++node) {
            if (!d.is_interior(node)) continue;
            const double mag = field.drift_magnitude_at(node);
            b2[node] = mag * mag;
            const double lmin = n == 1 ? field.a[0][node]
                                       : trace_and_extremes(field.matrix_at(node)).lambda_min;
            wl[node] = w.values[node] * lmin;
        }
        const double norm_b2 = weighted_lq_norm(GridFunction(d, std::move(b2)),
                                                GridFunction(d, std::move(wl)), q,
                                                d.interior_mask());
        const double x = std::pow(diam, 2.0 * q - n) * std::pow(norm_b2, q);
        rep.drift_factor = std::exp(params.c0 * x);
    } else {
        // Drift norm weight: rho*, or sqrt(rho* * lambda_min) below the
        // half-dimension index.
        GridFunction bw = w;
        if (2 * k < n) {
            for (size_t node = 0; node < bw.values.size(); ++node) {
                if (!d.is_interior(node)) continue;
                const double lmin = trace_and_extremes(field.matrix_at(node)).lambda_min;
                bw.values[node] = std::sqrt(w.values[node] * lmin);
            }
        }
        const double norm_b = weighted_lq_norm(drift_magnitude(field), bw, p, norm_mask);
        const double x =
            std::pow(geometry_base, (1.0 - static_cast<double>(n) / p) * q) * std::pow(norm_b, q);
        rep.drift_factor = std::exp(params.c0 * x);
    }

    const double denom = rep.geometry_factor * rep.drift_factor * rep.source_norm;
    if (rep.lhs <= 0.0)
        rep.required_c = 0.0;
    else
        rep.required_c = denom > 0.0 ? rep.lhs / denom
                                     : std::numeric_limits<double>::infinity();

    // Hypothesis table.
    const bool variant = 2 * k < n;  // drift weight sqrt(rho* lambda_min)
    if (id == TheoremId::eq_2_12) {
        rep.flags.push_back({"q_above_half_n", 2.0 * q > n});
    } else {
        if (variant) {
            rep.flags.push_back({"p_exponent", p > n});
            rep.flags.push_back({"q_above_half_n", 2.0 * q > n});
            rep.flags.push_back({"drift_weight_variant", true});
        } else {
            rep.flags.push_back({"p_exponent", k == n ? p >= n : p > n});
            rep.flags.push_back(
                {"q_exponent", 2 * k > n ? q >= static_cast<double>(k) : 2.0 * q > n});
        }
        if (id == TheoremId::eq_1_9) rep.flags.push_back({"k_above_half_n", 2 * k > n});
    }
    if (field.has_zero_order()) {
        bool nonpositive = true;
        for (size_t node = 0; node < field.c.size(); ++node)
            if (d.is_interior(node) && field.c[node] > 0.0) nonpositive = false;
        rep.flags.push_back({"c_nonpositive", nonpositive});
    }
    return rep;
}

double gronwall_factor(double theta, double q, double n_steps) {
    if (!(theta >= 0.0)) throw std::domain_error("gronwall_factor: theta must be >= 0");
    if (!(q > 0.0)) throw std::domain_error("gronwall_factor: q must be positive");
    double base;
    if (std::isinf(n_steps)) {
        base = std::expm1(theta);
    } else {
        if (!(n_steps > theta)) throw std::domain_error("gronwall_factor: need N > theta");
        // (N/(N-theta))^N - 1 through log1p for large N.
        base = std::expm1(-n_steps * std::log1p(-theta / n_steps));
    }
    return std::pow(base, 1.0 / q);
}

GronwallCheck gronwall_recurrence_check(double alpha, double mu, int n_terms) {
    if (!(alpha > 0.0)) throw std::invalid_argument("gronwall_recurrence_check: alpha must be > 0");
    if (!(mu >= 0.0)) throw std::invalid_argument("gronwall_recurrence_check: mu must be >= 0");
    if (n_terms < 1) throw std::invalid_argument("gronwall_recurrence_check: N must be >= 1");

    GronwallCheck out;
    out.max_sequence.assign(static_cast<size_t>(n_terms), 0.0);
    out.bound_sequence.assign(static_cast<size_t>(n_terms), 0.0);

    double suffix = 0.0;
    for (int i = n_terms; i >= 1; --i) {
        const double y = alpha * (suffix + mu);
        out.max_sequence[static_cast<size_t>(i - 1)] = y;
        suffix += y;
    }
    for (int i = 1; i <= n_terms; ++i)
        out.bound_sequence[static_cast<size_t>(i - 1)] =
            alpha * std::pow(1.0 + alpha, n_terms - i) * mu;

    out.holds = true;
    for (int i = 0; i < n_terms; ++i) {
        const double y = out.max_sequence[static_cast<size_t>(i)];
        const double b = out.bound_sequence[static_cast<size_t>(i)];
        if (y > b + 1e-12 * std::max(1.0, std::fabs(b))) out.holds = false;
        out.sequence_sum += y;
    }
    out.closed_form_sum = (std::pow(1.0 + alpha, n_terms) - 1.0) * mu;
    return out;
}

std::vector<uint8_t> monotone_stencil_mask(const SymmetricMatrixField& field) {
    const GridDomain& d = field.domain;
    if (field.mat_dim != d.dim())
        throw std::invalid_argument("monotone_stencil_mask: matrix dimension mismatch");
    const double h = d.spacing();
    std::vector<uint8_t> ok(d.node_count(), 0);
    for (size_t node = 0; node < d.node_count(); ++node) {
        if (!d.is_interior(node)) continue;
        const double c = field.zero_order_at(node);
        if (c > 0.0) continue;
        if (d.dim() == 1) {
            const double a = field.a[0][node];
            const double b = field.has_drift() ? field.b[0][node] : 0.0;
            ok[node] = (a > 0.0 && a / (h * h) >= std::fabs(b) / (2.0 * h)) ? 1 : 0;
        } else {
            const double a11 = field.a[0][node];
            const double a12 = field.a[1][node];
            const double a22 = field.a[2][node];
            const double b1 = field.has_drift() ? field.b[0][node] : 0.0;
            const double b2 = field.has_drift() ? field.b[1][node] : 0.0;
            const double scale = std::max({std::fabs(a11), std::fabs(a22), 1.0});
            const bool no_cross = std::fabs(a12) <= 1e-14 * scale;
            ok[node] = (no_cross && a11 > 0.0 && a22 > 0.0 &&
                        a11 / (h * h) >= std::fabs(b1) / (2.0 * h) &&
                        a22 / (h * h) >= std::fabs(b2) / (2.0 * h))
                           ? 1
                           : 0;
        }
    }
    return ok;
}

GridFunction solve_dirichlet_jacobi(const SymmetricMatrixField& field, const GridFunction& f,
                                    const GridFunction& g, int max_iter, double tol) {
    const GridDomain& d = field.domain;
    if (!d.same_layout(f.domain) || !d.same_layout(g.domain))
        throw std::invalid_argument("solve_dirichlet_jacobi: domain mismatch");
    if (field.mat_dim != d.dim())
        throw std::invalid_argument("solve_dirichlet_jacobi: matrix dimension mismatch");

    const double h = d.spacing();
    const double inv_h2 = 1.0 / (h * h);
    const double inv_2h = 0.5 / h;
    std::vector<double> u = g.values;
    std::vector<double> next = u;
    const int nx = d.nx();

    for (int it = 0; it < max_iter; ++it) {
        double max_delta = 0.0;
        double scale = 1.0;
        for (size_t node = 0; node < u.size(); ++node) {
            if (!d.is_interior(node)) continue;
            double center;
            double off;
            if (d.dim() == 1) {
                const double a = field.a[0][node];
                const double b = field.has_drift() ? field.b[0][node] : 0.0;
                center = -2.0 * a * inv_h2 + field.zero_order_at(node);
                off = (a * inv_h2 + b * inv_2h) * u[node + 1] +
                      (a * inv_h2 - b * inv_2h) * u[node - 1];
            } else {
                const double a11 = field.a[0][node];
                const double a12 = field.a[1][node];
                const double a22 = field.a[2][node];
                const double b1 = field.has_drift() ? field.b[0][node] : 0.0;
                const double b2 = field.has_drift() ? field.b[1][node] : 0.0;
                center = -2.0 * (a11 + a22) * inv_h2 + field.zero_order_at(node);
                off = (a11 * inv_h2 + b1 * inv_2h) * u[node + 1] +
                      (a11 * inv_h2 - b1 * inv_2h) * u[node - 1] +
                      (a22 * inv_h2 + b2 * inv_2h) * u[node + nx] +
                      (a22 * inv_h2 - b2 * inv_2h) * u[node - nx] +
                      0.5 * a12 * inv_h2 *
                          (u[node + nx + 1] + u[node - nx - 1] - u[node + nx - 1] -
                           u[node - nx + 1]);
            }
            if (!(center < 0.0))
                throw std::domain_error("solve_dirichlet_jacobi: non-negative center coefficient");
            next[node] = (f.values[node] - off) / center;
            max_delta = std::max(max_delta, std::fabs(next[node] - u[node]));
            scale = std::max(scale, std::fabs(next[node]));
        }
        std::swap(u, next);
        if (max_delta <= tol * scale) break;
    }
    return GridFunction(d, std::move(u));
}

}  // namespace garding
