#include "garding/ellipticity.hpp"

#include "garding/dual_cone.hpp"

namespace garding {

double chi(int n, int k, double a0) {
    if (n < 1 || k < 1 || k > n) throw std::domain_error("chi: invalid cone index");
    if (!(a0 > 0.0)) throw std::domain_error("chi: a0 must be positive");
    return static_cast<double>(k) - static_cast<double>(n) * (1.0 - (n - 1) / a0);
}

RhoStarLowerBound rho_star_lower_bound(const SpectrumVector& lambda, int k, double a0) {
    const int n = lambda.dim();
    if (k < 2 || k > n)
        throw std::domain_error("rho_star_lower_bound: degenerate at k = 1 (rho*_1 = lambda_min)");
    if (!(lambda.min() > 0.0))
        throw std::domain_error("rho_star_lower_bound: eigenvalues must be positive");
    const double margin = chi(n, k, a0);
    RhoStarLowerBound out;
    out.bound = margin * a0 * lambda.min() / (static_cast<double>(n) * (k - 1));
    out.valid = margin > 0.0 &&
                margin * a0 <= static_cast<double>(k - 1) / static_cast<double>(n - 1);
    return out;
}

EllipticityProfile ellipticity_profile(const SymmetricMatrixField& field, int k,
                                       double value_tol) {
    const GridDomain& d = field.domain;
    const int n = field.mat_dim;
    if (k < 1 || k > n) throw std::domain_error("ellipticity_profile: k out of range");

    EllipticityProfile out;
    out.n = n;
    out.k = k;

    for (size_t node = 0; node < d.node_count(); ++node) {
        if (!d.is_interior(node)) continue;
        const SymmetricMatrix a = field.matrix_at(node);
        double lmin, lmax, trace;
        double rho = 0.0;
        bool in_dual = true;
        if (n == 1) {
            lmin = lmax = trace = a(0, 0);
            rho = lmin;
            in_dual = rho > 0.0;
        } else {
            const SpectralDecomposition dec = eigen_decompose(a);
            lmin = dec.eigenvalues.min();
            lmax = dec.eigenvalues.max();
            trace = a.trace();
            const DualEvalResult r = rho_star(dec.eigenvalues, k, value_tol);
            in_dual = r.status != DualStatus::unbounded_below &&
                      r.status != DualStatus::infeasible_input && r.value > 0.0;
            rho = in_dual ? r.value : 0.0;
        }
        if (!(lmin > 0.0)) throw std::domain_error("ellipticity_profile: node with lambda_min <= 0");
        out.a0 = std::max(out.a0, trace / lmin);
        out.observed_ratio = std::max(out.observed_ratio, lmax / lmin);
        if (in_dual)
            out.a_k = std::max(out.a_k, lmax / rho);
        else
            ++out.nodes_outside_dual_cone;
    }

    out.chi = chi(n, k, out.a0);
    out.chi_side_condition =
        k >= 2 && out.chi > 0.0 &&
        out.chi * out.a0 <= static_cast<double>(k - 1) / static_cast<double>(n - 1);

    // Both printed forms of the uniform-ellipticity chain are recorded;
    // whether each holds is data, not an assertion (they disagree for some
    // n, k already on the identity field).
    const double akk = std::pow(out.a_k, k);
    out.ratio_bound = std::pow(static_cast<double>(n) / k, k) / binomial(n, k) * akk;
    out.crude_ratio_bound = akk;
    // Slack tracks the dual-value tolerance: a_k inherits the solver gap.
    const double slack = 1.0 + 16.0 * value_tol * k;
    const bool all_in = out.nodes_outside_dual_cone == 0;
    out.refined_holds = all_in && out.observed_ratio <= out.ratio_bound * slack;
    out.crude_holds = all_in && out.observed_ratio <= out.crude_ratio_bound * slack;
    return out;
}

}  // namespace garding
