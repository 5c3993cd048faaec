#pragma once

#include "garding/grid.hpp"
#include "garding/rng.hpp"
#include "garding/spectral.hpp"
#include "garding/types.hpp"

namespace garding::reference {

/// Reference implementations used only to cross-check the production paths:
/// direct enumerations and geometric constructions that share no code with
/// the solvers they validate.

/// S_k by explicit subset enumeration (2^n terms).
double esf_enumeration(std::span<const double> values, int k);

struct SliceScan {
    double value = 0.0;
    bool unbounded = false;
    double slice_min = 0.0;
};

/// Dense scan of the S_1 = n slice of the closed cone at the given step
/// (components descending), minimizing the scaled objective; exact modulo
/// the grid resolution. Supports n in {2, 3}, k in [2, n].
SliceScan brute_force_rho_star(const SpectrumVector& lambda, int k, double step = 1e-3);

/// Upper concave hull of the 1D node cloud (x_i, u_i), evaluated at nodes.
std::vector<double> upper_hull_1d(std::span<const double> x, std::span<const double> u);

/// Discrete concave envelope of a 2D grid function: at each node, the
/// minimum over all majorizing planes of their value there (a 3-variable
/// linear program solved by randomized incremental descent).
GridFunction concave_envelope_lp(const GridFunction& u, uint64_t seed = 1);

/// A point on the boundary of the closed Gamma_k cone, found by bisecting
/// along a random outward direction from the diagonal.
SpectrumVector sample_gamma_boundary(int n, int k, Rng& rng);

/// diag(eigs) conjugated by a random orthogonal matrix.
SymmetricMatrix random_conjugation(const VecN& eigenvalues, Rng& rng);

}  // namespace garding::reference
