#pragma once

#include "garding/envelope.hpp"
#include "garding/field.hpp"
#include "garding/grid.hpp"

namespace garding {

/// Nodewise Lu = A.D^2u + b.Du (+ c*u) by second-order central differences,
/// cross terms by the standard 4-point formula. Values are written at
/// interior nodes; everything else is 0. Requires mat_dim == spatial dim.
GridFunction apply_operator(const SymmetricMatrixField& field, const GridFunction& u);

/// (sum over mask of |f/weight|^q * h^n)^(1/q), midpoint quadrature.
/// weight must be strictly positive on the mask.
double weighted_lq_norm(const GridFunction& f, const GridFunction& weight, double q,
                        const std::vector<uint8_t>& mask);

enum class TheoremId { eq_1_8, eq_1_9, eq_2_10, eq_2_12 };

const char* to_string(TheoremId id);
TheoremId theorem_from_string(const std::string& name);

struct HypothesisFlag {
    std::string name;
    bool ok = false;
};

struct EstimateReport {
    TheoremId id = TheoremId::eq_1_8;
    int n = 0;
    int k = 0;
    double p = 0.0;
    double q = 0.0;
    double h = 0.0;
    double lhs = 0.0;
    double geometry_factor = 0.0;
    double drift_factor = 1.0;
    double source_norm = 0.0;
    double required_c = 0.0;
    std::vector<HypothesisFlag> flags;
    bool chi_substitution = false;
    double tol = 0.0;

    bool hypotheses_ok() const {
        for (const auto& f : flags)
            if (!f.ok) return false;
        return true;
    }
};

struct ReportParams {
    double p = 4.0;
    double q = 2.0;
    double c0 = 1.0;               // calibrated drift constant inside the exponential
    bool chi_substitution = false; // weight by lambda_min * chi * a0 instead of rho*_k
    double value_tol = kValueTol;  // dual-function tolerance for the weights
    double envelope_tol = 1e-7;    // contact-set solve (eq 2.10 only)
    int envelope_max_iter = 40000;
};

/// One maximum-principle report: lhs = sup u - boundary sup, the geometry /
/// drift / source factors of the selected estimate form, and the constant
/// the inequality would need. Hypothesis violations only clear flags.
EstimateReport make_estimate_report(const ManufacturedProblem& problem, TheoremId id, int k,
                                    const ReportParams& params = {});

/// Per-node dual-function weights rho*_k(A(x)) on interior nodes (1 off the
/// interior); with chi_substitution, lambda_min(A(x)) * chi * a0 instead.
GridFunction rho_star_weights(const SymmetricMatrixField& field, int k, bool chi_substitution,
                              double value_tol = kValueTol);

/// Upper k-contact set of u extended by zero to a concentric doubled
/// domain; the returned mask lives on the original grid (contact nodes
/// intersected with the interior).
struct ExtendedContact {
    std::vector<uint8_t> contact;  // on the original grid
    bool converged = false;
    size_t contact_count = 0;
};

ExtendedContact upper_contact_set_extended(const GridFunction& u, int k, double tol = 1e-7,
                                           int max_iter = 40000);

/// Drift amplification factor ((N/(N-theta))^N - 1)^(1/q); pass infinity
/// for the limit (e^theta - 1)^(1/q). Requires N > theta when finite.
double gronwall_factor(double theta, double q, double n_steps);

struct GronwallCheck {
    std::vector<double> max_sequence;    // y_1..y_N, maximal solution
    std::vector<double> bound_sequence;  // alpha*(1+alpha)^(N-i)*mu
    bool holds = false;
    double sequence_sum = 0.0;
    double closed_form_sum = 0.0;  // ((1+alpha)^N - 1)*mu
};

/// Backward iteration of y_i = alpha*(sum_{j>i} y_j + mu) with equality,
/// compared elementwise against the closed-form bound.
GronwallCheck gronwall_recurrence_check(double alpha, double mu, int n_terms);

/// Positive-type stencil test for the discrete operator at interior nodes:
/// no cross term, axis diffusion dominating the upwind drift, c <= 0.
std::vector<uint8_t> monotone_stencil_mask(const SymmetricMatrixField& field);

/// Point-Jacobi iteration for Lu = f with Dirichlet data g off the
/// interior. Intended for monotone stencils (where it converges and obeys
/// the discrete maximum principle); used by the harness sanity checks.
GridFunction solve_dirichlet_jacobi(const SymmetricMatrixField& field, const GridFunction& f,
                                    const GridFunction& g, int max_iter = 200000,
                                    double tol = 1e-12);

}  // namespace garding
