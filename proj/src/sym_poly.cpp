#include "garding/sym_poly.hpp"

namespace garding {

void elementary_symmetric_sequence(std::span<const double> values, int kmax,
                                   std::span<double> out) {
    const int n = static_cast<int>(values.size());
    if (kmax < 0 || kmax > n) throw std::domain_error("elementary_symmetric: k out of range");
    if (out.size() < static_cast<size_t>(kmax) + 1)
        throw std::invalid_argument("elementary_symmetric_sequence: output too small");
    out[0] = 1.0;
    for (int j = 1; j <= kmax; ++j) out[static_cast<size_t>(j)] = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = values[static_cast<size_t>(i)];
        const int top = std::min(i + 1, kmax);
        // Reverse order so each pass reads the previous degree's value.
        for (int j = top; j >= 1; --j)
            out[static_cast<size_t>(j)] += z * out[static_cast<size_t>(j - 1)];
    }
}

double elementary_symmetric(std::span<const double> values, int k) {
    const int n = static_cast<int>(values.size());
    if (k < 0 || k > n) throw std::domain_error("elementary_symmetric: k out of range");
    std::array<double, kMaxDim + 1> buf{};
    elementary_symmetric_sequence(values, k, buf);
    return buf[static_cast<size_t>(k)];
}

double elementary_symmetric(const SpectrumVector& lambda, int k) {
    return elementary_symmetric(lambda.span(), k);
}

double rho_k(const SpectrumVector& lambda, int k, double tol) {
    const int n = lambda.dim();
    if (k < 1 || k > n) throw std::domain_error("rho_k: k out of range");
    const ConeLabel label = gamma_k_membership(lambda, k, tol);
    if (label.membership == Membership::outside)
        throw std::domain_error("rho_k: eigenvalue vector outside the closed Gamma_k cone");
    const double normalized = elementary_symmetric(lambda, k) / binomial(n, k);
    if (normalized <= 0.0) return 0.0;
    return std::pow(normalized, 1.0 / static_cast<double>(k));
}

ConeLabel gamma_k_membership(const SpectrumVector& lambda, int k, double tol) {
    const int n = lambda.dim();
    if (k < 1 || k > n) throw std::domain_error("gamma_k_membership: k out of range");
    if (!(tol > 0.0)) throw std::invalid_argument("gamma_k_membership: tol must be positive");

    std::array<double, kMaxDim + 1> s{};
    elementary_symmetric_sequence(lambda.span(), k, s);
    const double base = std::max(1.0, max_abs(lambda.raw()));

    bool interior = true;
    bool outside = false;
    double scale = 1.0;
    for (int j = 1; j <= k; ++j) {
        scale *= base;  // scale_j = base^j
        const double sj = s[static_cast<size_t>(j)];
        if (!(sj > tol * scale)) interior = false;
        if (sj < -tol * scale) outside = true;
    }
    Membership m = interior ? Membership::interior
                            : (outside ? Membership::outside : Membership::boundary);
    return ConeLabel{k, m, tol};
}

double fundamental_inequality(const SpectrumVector& mu, int k) {
    const int n = mu.dim();
    if (k < 2 || k > n) throw std::domain_error("fundamental_inequality: requires 2 <= k <= n");
    const double s1 = elementary_symmetric(mu, 1);
    return static_cast<double>(n - k) * s1 + static_cast<double>(n) * (k - 1) * mu.min();
}

SliceBounds gamma_k_slice_bounds(int n, int k) {
    if (n < 2 || n > kMaxDim) throw std::invalid_argument("gamma_k_slice_bounds: n out of range");
    if (k < 2 || k > n)
        throw std::domain_error("gamma_k_slice_bounds: slice is non-compact for k = 1");
    const double lower = -static_cast<double>(n - k) / static_cast<double>(k - 1);
    const double upper = static_cast<double>(n) - static_cast<double>(n - 1) * lower;
    return SliceBounds{lower, upper};
}

}  // namespace garding
