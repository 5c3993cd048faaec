#pragma once

#include <cstddef>
#include <cstdint>

namespace garding::kernels {

/// Data-parallel inner loops for grid fields: scalar reference kernels and
/// AVX2 variants selected once at startup (override with GARDING_KERNELS=
/// scalar|avx2|auto). Backends may reorder floating-point reductions, so
/// results agree across backends to rounding, bit-exactly within one.
enum class Backend { scalar, avx2 };

Backend active_backend();
const char* backend_name(Backend b);
bool avx2_available();
/// Force a backend (tests use this to cross-check variants). Throws if the
/// requested backend is unavailable on this machine/build.
void set_backend(Backend b);

double sum(const double* x, size_t n);
double max_value(const double* x, size_t n);
double min_value(const double* x, size_t n);

/// Sum over mask-set nodes of |f_i / w_i|^q; pass w = nullptr for weight 1.
/// Integer q in [1, 32] takes the vectorized multiply path, other exponents
/// fall back to the scalar pow loop in every backend.
double masked_pow_sum(const double* f, const double* w, const uint8_t* mask, size_t n, double q);

/// Sum over mask-set nodes of |grad u|^r with central differences; the mask
/// must be clear wherever the stencil would leave the grid.
double masked_gradient_pow_sum_2d(const double* u, const uint8_t* mask, int nx, int ny,
                                  double inv_2h, double r);
double masked_gradient_pow_sum_1d(const double* u, const uint8_t* mask, int n, double inv_2h,
                                  double r);

/// Second-order operator along one interior row segment:
///   out[i] = a11*Dxx + 2*a12*Dxy + a22*Dyy (+ b1*Dx + b2*Dy) (+ c*u).
/// All pointers address column `start` of their row; columns start..start+count-1
/// must have both lateral neighbours in range. b1/b2/c may be null.
void operator_row_2d(const double* row_below, const double* row, const double* row_above,
                     const double* a11, const double* a12, const double* a22, const double* b1,
                     const double* b2, const double* c, double inv_h2, double inv_4h2,
                     double inv_2h, double* out, int count);

}  // namespace garding::kernels
