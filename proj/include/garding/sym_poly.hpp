#pragma once

#include "garding/types.hpp"

namespace garding {

/// Elementary symmetric polynomials S_0..S_kmax of `values`, written to
/// `out` (kmax+1 slots). Computed by the one-variable-at-a-time
/// coefficient recurrence, never by subset enumeration.
void elementary_symmetric_sequence(std::span<const double> values, int kmax,
                                   std::span<double> out);

/// S_k of a raw tuple. S_0 = 1 by the empty-product convention.
double elementary_symmetric(std::span<const double> values, int k);
double elementary_symmetric(const SpectrumVector& lambda, int k);

/// Normalized symmetric mean rho_k = (S_k / binom(n,k))^(1/k).
/// Requires lambda within the closed cone at tolerance `tol`; a slightly
/// negative normalized value inside the boundary band clamps to 0.
double rho_k(const SpectrumVector& lambda, int k, double tol = kMembershipTol);

/// Gamma_k cone label. Interior needs S_j > tol*scale_j for every j <= k,
/// with scale_j = max(1, |lambda|_inf)^j matching the degree-j homogeneity
/// of S_j; outside needs some S_j < -tol*scale_j; boundary otherwise.
ConeLabel gamma_k_membership(const SpectrumVector& lambda, int k, double tol = kMembershipTol);

/// (n-k)*S_1(mu) + n*(k-1)*min(mu); strictly positive on the open cone
/// Gamma_k for 2 <= k <= n, and >= 0 on its closure.
double fundamental_inequality(const SpectrumVector& mu, int k);

/// Component bounds for any mu in the closed Gamma_k slice {S_1(mu) = n}.
struct SliceBounds {
    double lower = 0.0;
    double upper = 0.0;
};

/// lower = -(n-k)/(k-1), upper = n + (n-1)(n-k)/(k-1). k = 1 is a domain
/// error: that slice is non-compact and is handled analytically elsewhere.
SliceBounds gamma_k_slice_bounds(int n, int k);

}  // namespace garding
