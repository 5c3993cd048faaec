#pragma once

#include "garding/sym_poly.hpp"
#include "garding/types.hpp"

namespace garding {

enum class DualStatus { optimal, boundary_optimal, unbounded_below, infeasible_input };

inline const char* to_string(DualStatus s) {
    switch (s) {
        case DualStatus::optimal: return "optimal";
        case DualStatus::boundary_optimal: return "boundary_optimal";
        case DualStatus::unbounded_below: return "unbounded_below";
        case DualStatus::infeasible_input: return "infeasible_input";
    }
    return "?";
}

/// Outcome of one dual-function evaluation. `optimal_mu` (when present) is
/// the descending-sorted representative of the minimizer; for an ascending
/// input spectrum the reported value pairs components positionally, i.e.
/// value = dot(lambda_ascending, mu_descending) / n.
struct DualEvalResult {
    double value = 0.0;  // -inf when unbounded below
    DualStatus status = DualStatus::infeasible_input;
    bool has_mu = false;
    VecN optimal_mu;
    bool has_certificate = false;
    VecN certificate;  // on the S_1 = n slice of the closed cone, dot(lambda, cert) < 0
    int iterations = 0;
    double kkt_residual = 0.0;
    double duality_gap = 0.0;
    double slice_min = 0.0;  // min of dot(lambda, mu) over the compact slice (k >= 2)
    double tol = 0.0;
};

/// Dual function rho*_k: infimum of dot(lambda, mu)/n over mu in Gamma_k
/// with S_k(mu) >= binom(n,k). k >= 2 runs a log-barrier interior-point
/// minimization after an unboundedness check on the compact S_1 = n slice;
/// k = 1 is analytic (finite exactly on the non-negative diagonal ray).
DualEvalResult rho_star(const SpectrumVector& lambda, int k, double tol = kValueTol);

/// Sharp upper bound (k/n) * binom(n,k)^(1/k) * (lambda_1...lambda_k)^(1/k);
/// equality at k = 1, k = n, and along the ray lambda = (1,..,1,k,..,k).
double rho_star_upper_bound(const SpectrumVector& lambda, int k);

/// The feasible comparison vector realizing the upper bound:
/// mu_i = binom(n,k)^(1/k) * (lambda_1...lambda_k)^(1/k) / lambda_i for
/// i <= k, zero beyond. Returned positionally against lambda ascending
/// (which makes it descending); S_k(mu) = binom(n,k).
VecN rho_star_upper_bound_witness(const SpectrumVector& lambda, int k);

/// Dual-cone label: outside when the slice minimum drops below -tol*|lambda|,
/// boundary when rho*_k stays within tol*|lambda| of zero, interior above.
ConeLabel dual_cone_membership(const SpectrumVector& lambda, int k, double tol = kMembershipTol);

}  // namespace garding
