#pragma once

#include <cstddef>
#include <cstdint>

// Per-backend entry points behind the public dispatch layer. Signatures
// mirror garding/kernels.hpp exactly.

namespace garding::kernels::scalar_impl {
double sum(const double* x, size_t n);
double max_value(const double* x, size_t n);
double min_value(const double* x, size_t n);
double masked_pow_sum(const double* f, const double* w, const uint8_t* mask, size_t n, double q);
double masked_gradient_pow_sum_2d(const double* u, const uint8_t* mask, int nx, int ny,
                                  double inv_2h, double r);
double masked_gradient_pow_sum_1d(const double* u, const uint8_t* mask, int n, double inv_2h,
                                  double r);
void operator_row_2d(const double* row_below, const double* row, const double* row_above,
                     const double* a11, const double* a12, const double* a22, const double* b1,
                     const double* b2, const double* c, double inv_h2, double inv_4h2,
                     double inv_2h, double* out, int count);
}  // namespace garding::kernels::scalar_impl

#if defined(GARDING_HAVE_AVX2)
namespace garding::kernels::avx2_impl {
double sum(const double* x, size_t n);
double max_value(const double* x, size_t n);
double min_value(const double* x, size_t n);
double masked_pow_sum(const double* f, const double* w, const uint8_t* mask, size_t n, double q);
double masked_gradient_pow_sum_2d(const double* u, const uint8_t* mask, int nx, int ny,
                                  double inv_2h, double r);
double masked_gradient_pow_sum_1d(const double* u, const uint8_t* mask, int n, double inv_2h,
                                  double r);
void operator_row_2d(const double* row_below, const double* row, const double* row_above,
                     const double* a11, const double* a12, const double* a22, const double* b1,
                     const double* b2, const double* c, double inv_h2, double inv_4h2,
                     double inv_2h, double* out, int count);
}  // namespace garding::kernels::avx2_impl
#endif

namespace garding::kernels::detail {
/// True when q is an integer in [1, 32]: the exponent range the multiply
/// ladder covers; everything else goes through the scalar pow loop.
bool integer_exponent(double q, int* out);
}  // namespace garding::kernels::detail
