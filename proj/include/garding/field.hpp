#pragma once

#include "garding/grid.hpp"
#include "garding/spectral.hpp"
#include "garding/types.hpp"

namespace garding {

/// Grid-indexed coefficient data: a symmetric matrix A(x) per node plus
/// optional drift b(x) and zero-order c(x) <= 0. Matrix components are
/// stored component-major (one array per packed upper-triangle entry) so
/// the row kernels stream them directly. The matrix dimension usually
/// equals the spatial dimension (required by apply_operator) but may
/// differ for pure ellipticity studies.
struct SymmetricMatrixField {
    GridDomain domain;
    int mat_dim = 0;
    std::vector<std::vector<double>> a;  // mat_dim*(mat_dim+1)/2 arrays, node-indexed
    std::vector<std::vector<double>> b;  // mat_dim arrays, or empty for zero drift
    std::vector<double> c;               // node-indexed, or empty for zero

    SymmetricMatrixField(GridDomain d, int matrix_dim);
    static SymmetricMatrixField constant(const GridDomain& d, const SymmetricMatrix& matrix);

    bool has_drift() const { return !b.empty(); }
    bool has_zero_order() const { return !c.empty(); }
    void enable_drift();
    void enable_zero_order();
    /// Throws unless every stored c is <= 0.
    void validate() const;

    SymmetricMatrix matrix_at(size_t node) const;
    VecN drift_at(size_t node) const;
    double zero_order_at(size_t node) const { return c.empty() ? 0.0 : c[node]; }
    double drift_magnitude_at(size_t node) const;
};

enum class FieldMode { identity, chi_positive, dual_interior };

inline const char* to_string(FieldMode m) {
    switch (m) {
        case FieldMode::identity: return "identity";
        case FieldMode::chi_positive: return "chi_positive";
        case FieldMode::dual_interior: return "dual_interior";
    }
    return "?";
}

struct FieldOptions {
    double drift_scale = 0.0;     // 0 leaves b absent
    bool with_zero_order = false; // adds a c(x) <= 0 profile
};

/// Deterministic coefficient field: eigenvalue draws under low-order
/// trigonometric modulation, conjugated by a smoothly varying rotation.
/// chi_positive keeps trace/lambda_min under the n(n-1)/(n-k) threshold at
/// every node; dual_interior verifies interior dual-cone membership
/// nodewise and rejects failed draws (error after 10^4 attempts).
SymmetricMatrixField sample_operator_field(uint64_t seed, const GridDomain& domain, int mat_dim,
                                           int k, FieldMode mode, const FieldOptions& opts = {});

/// Disk of the given radius inscribed in a centred square grid of the given
/// spacing; interior nodes are those strictly inside the circle.
GridDomain disk_domain(double radius, double spacing);

/// Smooth seeded test function: a few random trigonometric modes plus a
/// quadratic bump. When `nonpositive_boundary` is set the sample is shifted
/// so every boundary-ring value is <= 0 while the interior max stays > 0.
GridFunction random_smooth_function(uint64_t seed, const GridDomain& domain,
                                    bool nonpositive_boundary);

/// A chosen smooth solution u together with f = Lu evaluated through the
/// discrete operator, so every estimate quantity is forward-computable.
struct ManufacturedProblem {
    SymmetricMatrixField field;
    GridFunction u;
    GridFunction f;
    double boundary_sup = 0.0;
};

ManufacturedProblem make_manufactured_problem(SymmetricMatrixField field, GridFunction u);

}  // namespace garding
