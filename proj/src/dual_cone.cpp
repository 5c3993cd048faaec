#include "garding/dual_cone.hpp"

#include <limits>

namespace garding {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// S_j, grad S_j and Hess S_j at a point, for every degree j <= kmax.
/// grad S_j[i] = S_{j-1} of the tuple without component i; the Hessian has
/// zero diagonal and S_{j-2} of the tuple without {i,l} off it. Each subset
/// value is recomputed from scratch: immune to the cancellation the
/// divide-out shortcut suffers on mixed-sign tuples.
struct EsfDerivatives {
    int n = 0;
    int kmax = 0;
    std::array<double, kMaxDim + 1> s{};
    // grad[j][i], row-major over (kmax+1) x n
    std::array<double, (kMaxDim + 1) * kMaxDim> grad{};
    // pair[j][i][l], (kmax+1) x n x n, symmetric in (i,l), zero diagonal
    std::array<double, (kMaxDim + 1) * kMaxDim * kMaxDim> pair{};

    double g(int j, int i) const { return grad[static_cast<size_t>(j) * n + i]; }
    double h(int j, int i, int l) const {
        return pair[(static_cast<size_t>(j) * n + i) * n + l];
    }
};

void esf_derivatives(const VecN& mu, int kmax, EsfDerivatives& out) {
    const int n = mu.n;
    out.n = n;
    out.kmax = kmax;
    elementary_symmetric_sequence(mu.span(), kmax, out.s);

    std::array<double, kMaxDim> sub{};
    std::array<double, kMaxDim + 1> esf{};
    for (int i = 0; i < n; ++i) {
        int m = 0;
        for (int t = 0; t < n; ++t)
            if (t != i) sub[static_cast<size_t>(m++)] = mu[t];
        const int cap = std::min(kmax - 1, n - 1);
        elementary_symmetric_sequence({sub.data(), static_cast<size_t>(m)}, std::max(cap, 0), esf);
        for (int j = 1; j <= kmax; ++j)
            out.grad[static_cast<size_t>(j) * n + i] = (j - 1 <= cap) ? esf[static_cast<size_t>(j - 1)] : 0.0;
    }

    std::fill(out.pair.begin(), out.pair.end(), 0.0);
    for (int i = 0; i < n; ++i) {
        for (int l = i + 1; l < n; ++l) {
            int m = 0;
            for (int t = 0; t < n; ++t)
                if (t != i && t != l) sub[static_cast<size_t>(m++)] = mu[t];
            const int cap = std::min(kmax - 2, n - 2);
            elementary_symmetric_sequence({sub.data(), static_cast<size_t>(m)}, std::max(cap, 0),
                                          esf);
            for (int j = 2; j <= kmax; ++j) {
                const double value = (j - 2 <= cap) ? esf[static_cast<size_t>(j - 2)] : 0.0;
                out.pair[(static_cast<size_t>(j) * n + i) * n + l] = value;
                out.pair[(static_cast<size_t>(j) * n + l) * n + i] = value;
            }
        }
    }
}

/// Solve H d = -g for a symmetric positive (semi)definite H, escalating a
/// diagonal ridge until the Cholesky factorization succeeds.
bool solve_newton_step(const double* hess, const double* grad, int m, double* step) {
    double h[kMaxDim * kMaxDim];
    double scale = 0.0;
    for (int i = 0; i < m; ++i) scale = std::max(scale, std::fabs(hess[i * m + i]));
    if (scale <= 0.0) scale = 1.0;

    double ridge = 0.0;
    for (int attempt = 0; attempt < 40; ++attempt) {
        for (int i = 0; i < m * m; ++i) h[i] = hess[i];
        for (int i = 0; i < m; ++i) h[i * m + i] += ridge;

        // In-place Cholesky, lower triangle.
        bool ok = true;
        for (int i = 0; i < m && ok; ++i) {
            for (int j = 0; j <= i; ++j) {
                double sum = h[i * m + j];
                for (int t = 0; t < j; ++t) sum -= h[i * m + t] * h[j * m + t];
                if (i == j) {
                    if (!(sum > 1e-300)) {
                        ok = false;
                        break;
                    }
                    h[i * m + i] = std::sqrt(sum);
                } else {
                    h[i * m + j] = sum / h[j * m + j];
                }
            }
        }
        if (ok) {
            double y[kMaxDim];
            for (int i = 0; i < m; ++i) {
                double sum = -grad[i];
                for (int t = 0; t < i; ++t) sum -= h[i * m + t] * y[t];
                y[i] = sum / h[i * m + i];
            }
            for (int i = m - 1; i >= 0; --i) {
                double sum = y[i];
                for (int t = i + 1; t < m; ++t) sum -= h[t * m + i] * step[t];
                step[i] = sum / h[i * m + i];
            }
            return true;
        }
        ridge = (ridge == 0.0) ? 1e-12 * scale : ridge * 10.0;
    }
    return false;
}

/// One barrier subproblem: phi_t(x) = t * objective(x) + sum of -log(g_i).
/// Implementations fill value/gradient/Hessian in the reduced variables.
struct BarrierProblem {
    virtual ~BarrierProblem() = default;
    virtual int dim() const = 0;
    virtual int constraint_count() const = 0;
    virtual double objective(const double* x) const = 0;
    virtual bool feasible(const double* x) const = 0;
    // Returns phi_t; grad/hess sized dim() and dim()^2.
    virtual double eval(const double* x, double t, double* grad, double* hess) const = 0;
};

struct NewtonStats {
    int steps = 0;
    double grad_norm = 0.0;
    bool stalled = false;
};

void newton_minimize(const BarrierProblem& prob, double t, double* x, NewtonStats& stats,
                     int max_steps = 80) {
    const int m = prob.dim();
    double grad[kMaxDim], hess[kMaxDim * kMaxDim], step[kMaxDim], trial[kMaxDim];
    for (int it = 0; it < max_steps; ++it) {
        const double value = prob.eval(x, t, grad, hess);
        if (!solve_newton_step(hess, grad, m, step)) {
            stats.stalled = true;
            break;
        }
        double slope = 0.0;
        for (int i = 0; i < m; ++i) slope += grad[i] * step[i];
        const double decrement = -0.5 * slope;
        ++stats.steps;
        if (decrement < 1e-12) break;

        double alpha = 1.0;
        bool moved = false;
        for (int ls = 0; ls < 60; ++ls) {
            for (int i = 0; i < m; ++i) trial[i] = x[i] + alpha * step[i];
            if (prob.feasible(trial)) {
                const double trial_value = prob.eval(trial, t, nullptr, nullptr);
                if (trial_value <= value + 0.25 * alpha * slope) {
                    std::copy(trial, trial + m, x);
                    moved = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if (!moved) {
            stats.stalled = true;
            break;
        }
    }
    double g2 = 0.0;
    double grad_final[kMaxDim], hess_final[kMaxDim * kMaxDim];
    prob.eval(x, t, grad_final, hess_final);
    for (int i = 0; i < m; ++i) g2 += grad_final[i] * grad_final[i];
    stats.grad_norm = std::sqrt(g2);
}

struct BarrierOutcome {
    double t_final = 1.0;
    double gap = kInf;
    int newton_steps = 0;
    double kkt_residual = 0.0;
    bool converged = false;
};

BarrierOutcome run_barrier(const BarrierProblem& prob, double* x, double gap_target) {
    BarrierOutcome out;
    const double m = static_cast<double>(prob.constraint_count());
    double t = 1.0;
    for (int outer = 0; outer < 80; ++outer) {
        NewtonStats stats;
        newton_minimize(prob, t, x, stats);
        out.newton_steps += stats.steps;
        out.t_final = t;
        out.gap = m / t;
        out.kkt_residual = stats.grad_norm / t;
        if (out.gap < gap_target) {
            out.converged = !stats.stalled;
            break;
        }
        if (stats.stalled && out.gap < 16.0 * gap_target) break;
        t *= 12.0;
    }
    return out;
}

/// Minimize dot(lambda, mu)/n over Gamma_k with S_k >= binom(n,k).
/// Barriers on S_1..S_k and on S_k - binom(n,k); m = k + 1.
struct ConeProgram final : BarrierProblem {
    VecN lambda;
    int k;
    double excess;  // binom(n,k)

    ConeProgram(const VecN& l, int k_in) : lambda(l), k(k_in), excess(binomial(l.n, k_in)) {}

    int dim() const override { return lambda.n; }
    int constraint_count() const override { return k + 1; }

    double objective(const double* x) const override {
        double s = 0.0;
        for (int i = 0; i < lambda.n; ++i) s += lambda[i] * x[i];
        return s / lambda.n;
    }
    bool feasible(const double* x) const override {
        std::array<double, kMaxDim + 1> s{};
        elementary_symmetric_sequence({x, static_cast<size_t>(lambda.n)}, k, s);
        for (int j = 1; j <= k; ++j)
            if (!(s[static_cast<size_t>(j)] > 0.0)) return false;
        return s[static_cast<size_t>(k)] - excess > 0.0;
    }
    double eval(const double* x, double t, double* grad, double* hess) const override {
        const int n = lambda.n;
        VecN mu = VecN::from({x, static_cast<size_t>(n)});
        EsfDerivatives d;
        esf_derivatives(mu, k, d);

        double phi = t * objective(x);
        for (int j = 1; j <= k; ++j) phi -= std::log(d.s[static_cast<size_t>(j)]);
        phi -= std::log(d.s[static_cast<size_t>(k)] - excess);
        if (grad == nullptr) return phi;

        for (int i = 0; i < n; ++i) grad[i] = t * lambda[i] / n;
        std::fill(hess, hess + n * n, 0.0);

        auto add_log_term = [&](int j, double value) {
            // -log(value) with value = S_j (+ shift); grad/hess of S_j reused.
            for (int i = 0; i < n; ++i) grad[i] -= d.g(j, i) / value;
            for (int i = 0; i < n; ++i)
                for (int l = 0; l < n; ++l)
                    hess[i * n + l] +=
                        d.g(j, i) * d.g(j, l) / (value * value) - d.h(j, i, l) / value;
        };
        for (int j = 1; j <= k; ++j) add_log_term(j, d.s[static_cast<size_t>(j)]);
        add_log_term(k, d.s[static_cast<size_t>(k)] - excess);
        return phi;
    }
};

/// Minimize dot(lambda, mu) over the compact slice {mu in closed Gamma_k,
/// S_1(mu) = n}. The equality is eliminated: the last component is
/// n - sum of the others; barriers on S_2..S_k (S_1 is constant).
struct SliceProgram final : BarrierProblem {
    VecN lambda;
    int k;

    SliceProgram(const VecN& l, int k_in) : lambda(l), k(k_in) {}

    int dim() const override { return lambda.n - 1; }
    int constraint_count() const override { return k - 1; }

    VecN lift(const double* x) const {
        VecN mu(lambda.n);
        double s = 0.0;
        for (int i = 0; i + 1 < lambda.n; ++i) {
            mu[i] = x[i];
            s += x[i];
        }
        mu[lambda.n - 1] = static_cast<double>(lambda.n) - s;
        return mu;
    }
    double objective(const double* x) const override {
        const VecN mu = lift(x);
        return dot(lambda, mu);
    }
    bool feasible(const double* x) const override {
        const VecN mu = lift(x);
        std::array<double, kMaxDim + 1> s{};
        elementary_symmetric_sequence(mu.span(), k, s);
        for (int j = 2; j <= k; ++j)
            if (!(s[static_cast<size_t>(j)] > 0.0)) return false;
        return true;
    }
    double eval(const double* x, double t, double* grad, double* hess) const override {
        const int n = lambda.n;
        const int m = n - 1;
        const VecN mu = lift(x);
        EsfDerivatives d;
        esf_derivatives(mu, k, d);

        double phi = t * objective(x);
        for (int j = 2; j <= k; ++j) phi -= std::log(d.s[static_cast<size_t>(j)]);
        if (grad == nullptr) return phi;

        for (int i = 0; i < m; ++i) grad[i] = t * (lambda[i] - lambda[n - 1]);
        std::fill(hess, hess + m * m, 0.0);

        double gfull[kMaxDim];
        for (int j = 2; j <= k; ++j) {
            const double value = d.s[static_cast<size_t>(j)];
            for (int i = 0; i < n; ++i) gfull[i] = d.g(j, i);
            // Reduced gradient of S_j under the elimination.
            double gred[kMaxDim];
            for (int i = 0; i < m; ++i) gred[i] = gfull[i] - gfull[n - 1];
            for (int i = 0; i < m; ++i) grad[i] -= gred[i] / value;
            for (int i = 0; i < m; ++i) {
                for (int l = 0; l < m; ++l) {
                    const double hred = d.h(j, i, l) - d.h(j, i, n - 1) - d.h(j, n - 1, l) +
                                        d.h(j, n - 1, n - 1);
                    hess[i * m + l] += gred[i] * gred[l] / (value * value) - hred / value;
                }
            }
        }
        return phi;
    }
};

void sort_descending(VecN& v) {
    std::sort(v.v.begin(), v.v.begin() + v.n, std::greater<double>());
}

DualEvalResult analytic_k1(const SpectrumVector& lambda, double tol) {
    const int n = lambda.dim();
    DualEvalResult r;
    r.tol = tol;
    const double scale_inf = std::max(std::fabs(lambda.min()), std::fabs(lambda.max()));
    double mean = 0.0;
    for (int i = 0; i < n; ++i) mean += lambda[i];
    mean /= n;
    double dev = 0.0;
    for (int i = 0; i < n; ++i) dev = std::max(dev, std::fabs(lambda[i] - mean));

    const bool on_ray = dev <= tol * scale_inf;
    if (on_ray && mean >= 0.0) {
        r.value = lambda.min();
        r.status = DualStatus::optimal;
        r.has_mu = true;
        r.optimal_mu = VecN::constant(n, 1.0);
        r.slice_min = mean * n;
        return r;
    }

    r.value = -kInf;
    r.status = DualStatus::unbounded_below;
    r.has_certificate = true;
    if (on_ray) {
        // Negative diagonal ray: the symmetric slice point already certifies.
        r.certificate = VecN::constant(n, 1.0);
        r.slice_min = mean * n;
    } else {
        VecN cert = VecN::constant(n, 1.0);
        const double spread = lambda.max() - lambda.min();
        const double shift = std::max(1.0, 2.0 * mean * n / spread);
        cert[0] += shift;       // smallest component of lambda
        cert[n - 1] -= shift;   // largest component of lambda
        r.certificate = cert;
        r.slice_min = -kInf;
    }
    return r;
}

}  // namespace

DualEvalResult rho_star(const SpectrumVector& lambda, int k, double tol) {
    const int n = lambda.dim();
    if (k < 1 || k > n) throw std::domain_error("rho_star: k out of range");
    if (!(tol > 0.0 && tol <= 1e-4)) throw std::invalid_argument("rho_star: tol must be in (0, 1e-4]");

    DualEvalResult r;
    r.tol = tol;
    if (!lambda.all_finite()) {
        r.status = DualStatus::infeasible_input;
        r.value = std::numeric_limits<double>::quiet_NaN();
        return r;
    }
    if (k == 1) return analytic_k1(lambda, tol);

    const double scale = norm2(lambda.raw());
    if (scale == 0.0) {
        r.value = 0.0;
        r.status = DualStatus::optimal;
        r.has_mu = true;
        r.optimal_mu = VecN::constant(n, 1.0);
        r.slice_min = 0.0;
        return r;
    }
    VecN lhat(n);
    for (int i = 0; i < n; ++i) lhat[i] = lambda[i] / scale;

    // Unboundedness first: the barrier itself diverges silently on an
    // unbounded objective, the compact slice does not.
    SliceProgram slice(lhat, k);
    double xs[kMaxDim];
    std::fill(xs, xs + n - 1, 1.0);
    const BarrierOutcome slice_out = run_barrier(slice, xs, 0.25 * tol);
    r.iterations += slice_out.newton_steps;
    const VecN slice_mu = slice.lift(xs);
    const double slice_min = dot(lhat, slice_mu);
    r.slice_min = slice_min * scale;

    if (slice_min < -tol) {
        r.value = -kInf;
        r.status = DualStatus::unbounded_below;
        r.has_certificate = true;
        r.certificate = slice_mu;
        r.duality_gap = slice_out.gap * scale;
        r.kkt_residual = slice_out.kkt_residual;
        return r;
    }

    ConeProgram cone(lhat, k);
    double x[kMaxDim];
    const double inflate = std::pow(2.0, 1.0 / k);  // strictly feasible symmetric start
    std::fill(x, x + n, inflate);
    const BarrierOutcome out = run_barrier(cone, x, tol);
    r.iterations += out.newton_steps;
    r.duality_gap = out.gap * scale;
    r.kkt_residual = out.kkt_residual;

    VecN mu = VecN::from({x, static_cast<size_t>(n)});
    r.value = cone.objective(x) * scale;
    sort_descending(mu);
    r.has_mu = true;
    r.optimal_mu = mu;
    const double mu_floor = 1e-6 * std::max(1.0, max_abs(mu));
    r.status = (min_component(mu) <= mu_floor) ? DualStatus::boundary_optimal : DualStatus::optimal;
    return r;
}

double rho_star_upper_bound(const SpectrumVector& lambda, int k) {
    const int n = lambda.dim();
    if (k < 1 || k > n) throw std::domain_error("rho_star_upper_bound: k out of range");
    double log_product = 0.0;
    for (int i = 0; i < k; ++i) {
        if (!(lambda[i] > 0.0))
            throw std::domain_error("rho_star_upper_bound: first k components must be positive");
        log_product += std::log(lambda[i]);
    }
    const double geo = std::exp(log_product / k);
    return static_cast<double>(k) / n * std::pow(binomial(n, k), 1.0 / k) * geo;
}

VecN rho_star_upper_bound_witness(const SpectrumVector& lambda, int k) {
    const int n = lambda.dim();
    if (k < 1 || k > n) throw std::domain_error("rho_star_upper_bound_witness: k out of range");
    double log_product = 0.0;
    for (int i = 0; i < k; ++i) {
        if (!(lambda[i] > 0.0))
            throw std::domain_error("rho_star_upper_bound_witness: first k components must be positive");
        log_product += std::log(lambda[i]);
    }
    const double c = std::pow(binomial(n, k), 1.0 / k) * std::exp(log_product / k);
    VecN mu(n);
    for (int i = 0; i < n; ++i) mu[i] = (i < k) ? c / lambda[i] : 0.0;
    return mu;
}

ConeLabel dual_cone_membership(const SpectrumVector& lambda, int k, double tol) {
    const int n = lambda.dim();
    if (k < 1 || k > n) throw std::domain_error("dual_cone_membership: k out of range");
    if (!(tol > 0.0)) throw std::invalid_argument("dual_cone_membership: tol must be positive");

    const double scale = norm2(lambda.raw());
    if (k == 1) {
        const DualEvalResult r = analytic_k1(lambda, tol);
        Membership m;
        if (r.status == DualStatus::unbounded_below) {
            // Off the diagonal ray, or on its negative half beyond tolerance.
            m = (r.slice_min < -tol * scale || r.slice_min == -kInf) ? Membership::outside
                                                                     : Membership::boundary;
        } else {
            m = (r.value > tol * scale) ? Membership::interior : Membership::boundary;
        }
        return ConeLabel{k, m, tol};
    }

    const DualEvalResult r = rho_star(lambda, k, std::min(tol, kValueTol));
    Membership m;
    if (r.slice_min < -tol * scale) {
        m = Membership::outside;
    } else if (r.status == DualStatus::unbounded_below || r.value <= tol * scale) {
        m = Membership::boundary;
    } else {
        m = Membership::interior;
    }
    return ConeLabel{k, m, tol};
}

}  // namespace garding
