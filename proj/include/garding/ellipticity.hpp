#pragma once

#include "garding/field.hpp"
#include "garding/types.hpp"

namespace garding {

/// Pucci ellipticity margin chi = k - n*(1 - (n-1)/a0). Positivity places
/// the matrix inside the dual cone for index k.
double chi(int n, int k, double a0);

struct RhoStarLowerBound {
    double bound = 0.0;
    bool valid = false;  // chi > 0 and chi*a0 <= (k-1)/(n-1)
};

/// Explicit lower bound chi*a0*lambda_min/(n*(k-1)) for rho*_k, gated by
/// the side condition that makes it sound for substitution downstream.
RhoStarLowerBound rho_star_lower_bound(const SpectrumVector& lambda, int k, double a0);

struct EllipticityProfile {
    int n = 0;
    int k = 0;
    double a0 = 0.0;   // max over interior nodes of trace/lambda_min
    double a_k = 0.0;  // max over interior nodes of lambda_max/rho*_k
    double chi = 0.0;
    bool chi_side_condition = false;
    double ratio_bound = 0.0;        // (n/k)^k * binom(n,k)^-1 * a_k^k, as printed
    double crude_ratio_bound = 0.0;  // a_k^k
    double observed_ratio = 0.0;     // max over nodes of lambda_max/lambda_min
    bool refined_holds = false;
    bool crude_holds = false;
    size_t nodes_outside_dual_cone = 0;
};

/// Nodewise ellipticity suprema over the interior of a coefficient field.
/// Any node with lambda_min <= 0 is a domain error; nodes outside the
/// closed dual cone are counted and excluded from a_k. Both ratio-bound
/// forms are recorded with flags instead of asserting either.
EllipticityProfile ellipticity_profile(const SymmetricMatrixField& field, int k,
                                       double value_tol = kValueTol);

}  // namespace garding
