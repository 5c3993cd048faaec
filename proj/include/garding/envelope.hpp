#pragma once

#include "garding/grid.hpp"
#include "garding/types.hpp"

namespace garding {

/// Nodewise test that the central-difference Hessian of u lies in the
/// closed Gamma_k cone; false wherever the node is not interior.
std::vector<uint8_t> k_convexity_mask(const GridFunction& u, int k, double tol = kMembershipTol);

/// Envelope output: the least grid majorant whose negative passes the
/// discrete k-convexity test, plus the contact set {envelope == u}.
struct ContactSetResult {
    GridFunction envelope;
    std::vector<uint8_t> contact;
    double tol_used = 0.0;
    bool converged = false;
    int iterations = 0;
    double final_update = 0.0;
};

/// Damped obstacle-style sweeps (red-black order, damping 0.9) lowering w
/// from a constant majorant toward the value that activates the binding
/// discrete constraint at each node, never below u. Boundary values stay
/// pinned to u. Terminates when the largest nodewise update drops under
/// tol * osc(u), or flags non-convergence at max_iter.
ContactSetResult upper_k_envelope(const GridFunction& u, int k, double tol = 1e-8,
                                  int max_iter = 20000);

struct GradientCheck {
    double lhs = 0.0;         // discrete L^r norm of the gradient over Omega'
    double rhs_factor = 0.0;  // diam^((n-r)/r) * sup |v|
    double required_c = 0.0;
    size_t omega_prime_count = 0;
};

/// Interior-offset gradient bound: Omega' keeps nodes at distance
/// >= kappa * diam from the boundary ring. r must satisfy r < n*k/(n-k)
/// for k < n (any finite r >= 1 at k = n) and kappa must lie in (0, 1/2).
GradientCheck gradient_norm_check(const GridFunction& v, int k, double r, double kappa = 0.25);

}  // namespace garding
