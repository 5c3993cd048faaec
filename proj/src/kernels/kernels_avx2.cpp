#if defined(GARDING_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>
#include <limits>

#include "kernels_impl.hpp"

namespace garding::kernels::avx2_impl {

namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s2 = _mm_add_pd(lo, hi);
    const __m128d s1 = _mm_add_sd(s2, _mm_unpackhi_pd(s2, s2));
    return _mm_cvtsd_f64(s1);
}

inline double hmax(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d m2 = _mm_max_pd(lo, hi);
    const __m128d m1 = _mm_max_sd(m2, _mm_unpackhi_pd(m2, m2));
    return _mm_cvtsd_f64(m1);
}

inline double hmin(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d m2 = _mm_min_pd(lo, hi);
    const __m128d m1 = _mm_min_sd(m2, _mm_unpackhi_pd(m2, m2));
    return _mm_cvtsd_f64(m1);
}

inline __m256d abs_pd(__m256d v) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    return _mm256_andnot_pd(sign, v);
}

inline __m256d pow_int_pd(__m256d x, int e) {
    __m256d acc = _mm256_set1_pd(1.0);
    __m256d base = x;
    while (e > 0) {
        if (e & 1) acc = _mm256_mul_pd(acc, base);
        base = _mm256_mul_pd(base, base);
        e >>= 1;
    }
    return acc;
}

inline double pow_int_scalar(double x, int e) {
    double acc = 1.0;
    double base = x;
    while (e > 0) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

}  // namespace

double sum(const double* x, size_t n) {
    __m256d acc = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    double s = hsum(acc);
    for (; i < n; ++i) s += x[i];
    return s;
}

double max_value(const double* x, size_t n) {
    __m256d acc = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
    size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_max_pd(acc, _mm256_loadu_pd(x + i));
    double m = hmax(acc);
    for (; i < n; ++i) m = m < x[i] ? x[i] : m;
    return m;
}

double min_value(const double* x, size_t n) {
    __m256d acc = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_min_pd(acc, _mm256_loadu_pd(x + i));
    double m = hmin(acc);
    for (; i < n; ++i) m = m > x[i] ? x[i] : m;
    return m;
}

double masked_pow_sum(const double* f, const double* w, const uint8_t* mask, size_t n, double q) {
    int e = 0;
    if (!detail::integer_exponent(q, &e)) {
        // Non-integer exponents share the scalar pow loop.
        return scalar_impl::masked_pow_sum(f, w, mask, n, q);
    }
    __m256d acc = _mm256_setzero_pd();
    const __m256d ones = _mm256_set1_pd(1.0);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const bool full =
            mask == nullptr || (mask[i] && mask[i + 1] && mask[i + 2] && mask[i + 3]);
        if (full) {
            const __m256d fv = _mm256_loadu_pd(f + i);
            const __m256d wv = w != nullptr ? _mm256_loadu_pd(w + i) : ones;
            const __m256d ratio = abs_pd(_mm256_div_pd(fv, wv));
            acc = _mm256_add_pd(acc, pow_int_pd(ratio, e));
        } else {
            double partial = 0.0;
            for (size_t j = i; j < i + 4; ++j) {
                if (!mask[j]) continue;
                const double ratio = std::fabs(w != nullptr ? f[j] / w[j] : f[j]);
                partial += pow_int_scalar(ratio, e);
            }
            acc = _mm256_add_pd(acc, _mm256_set_pd(0.0, 0.0, 0.0, partial));
        }
    }
    double s = hsum(acc);
    for (; i < n; ++i) {
        if (mask != nullptr && !mask[i]) continue;
        const double ratio = std::fabs(w != nullptr ? f[i] / w[i] : f[i]);
        s += pow_int_scalar(ratio, e);
    }
    return s;
}

double masked_gradient_pow_sum_2d(const double* u, const uint8_t* mask, int nx, int ny,
                                  double inv_2h, double r) {
    int e = 0;
    if (!detail::integer_exponent(r, &e))
        return scalar_impl::masked_gradient_pow_sum_2d(u, mask, nx, ny, inv_2h, r);
    const __m256d scale = _mm256_set1_pd(inv_2h);
    __m256d acc = _mm256_setzero_pd();
    double tail = 0.0;
    for (int iy = 1; iy < ny - 1; ++iy) {
        const size_t row = static_cast<size_t>(iy) * nx;
        int ix = 1;
        for (; ix + 4 <= nx - 1; ix += 4) {
            const size_t i = row + ix;
            if (!(mask[i] && mask[i + 1] && mask[i + 2] && mask[i + 3])) {
                for (int j = 0; j < 4; ++j) {
                    const size_t node = i + j;
                    if (!mask[node]) continue;
                    const double gx = (u[node + 1] - u[node - 1]) * inv_2h;
                    const double gy = (u[node + nx] - u[node - nx]) * inv_2h;
                    tail += pow_int_scalar(std::sqrt(gx * gx + gy * gy), e);
                }
                continue;
            }
            const __m256d gx = _mm256_mul_pd(
                _mm256_sub_pd(_mm256_loadu_pd(u + i + 1), _mm256_loadu_pd(u + i - 1)), scale);
            const __m256d gy = _mm256_mul_pd(
                _mm256_sub_pd(_mm256_loadu_pd(u + i + nx), _mm256_loadu_pd(u + i - nx)), scale);
            const __m256d g =
                _mm256_sqrt_pd(_mm256_fmadd_pd(gx, gx, _mm256_mul_pd(gy, gy)));
            acc = _mm256_add_pd(acc, pow_int_pd(g, e));
        }
        for (; ix < nx - 1; ++ix) {
            const size_t i = row + ix;
            if (!mask[i]) continue;
            const double gx = (u[i + 1] - u[i - 1]) * inv_2h;
            const double gy = (u[i + nx] - u[i - nx]) * inv_2h;
            tail += pow_int_scalar(std::sqrt(gx * gx + gy * gy), e);
        }
    }
    return hsum(acc) + tail;
}

double masked_gradient_pow_sum_1d(const double* u, const uint8_t* mask, int n, double inv_2h,
                                  double r) {
    return scalar_impl::masked_gradient_pow_sum_1d(u, mask, n, inv_2h, r);
}

void operator_row_2d(const double* row_below, const double* row, const double* row_above,
                     const double* a11, const double* a12, const double* a22, const double* b1,
                     const double* b2, const double* c, double inv_h2, double inv_4h2,
                     double inv_2h, double* out, int count) {
    const __m256d vih2 = _mm256_set1_pd(inv_h2);
    const __m256d vi4h2 = _mm256_set1_pd(inv_4h2);
    const __m256d vi2h = _mm256_set1_pd(inv_2h);
    const __m256d two = _mm256_set1_pd(2.0);
    int i = 0;
    for (; i + 4 <= count; i += 4) {
        const __m256d uc = _mm256_loadu_pd(row + i);
        const __m256d ul = _mm256_loadu_pd(row + i - 1);
        const __m256d ur = _mm256_loadu_pd(row + i + 1);
        const __m256d ub = _mm256_loadu_pd(row_below + i);
        const __m256d ua = _mm256_loadu_pd(row_above + i);

        const __m256d dxx =
            _mm256_mul_pd(_mm256_sub_pd(_mm256_add_pd(ul, ur), _mm256_mul_pd(two, uc)), vih2);
        const __m256d dyy =
            _mm256_mul_pd(_mm256_sub_pd(_mm256_add_pd(ub, ua), _mm256_mul_pd(two, uc)), vih2);
        const __m256d dxy = _mm256_mul_pd(
            _mm256_sub_pd(
                _mm256_add_pd(_mm256_loadu_pd(row_above + i + 1), _mm256_loadu_pd(row_below + i - 1)),
                _mm256_add_pd(_mm256_loadu_pd(row_above + i - 1), _mm256_loadu_pd(row_below + i + 1))),
            vi4h2);

        __m256d v = _mm256_mul_pd(_mm256_loadu_pd(a11 + i), dxx);
        v = _mm256_fmadd_pd(_mm256_mul_pd(two, _mm256_loadu_pd(a12 + i)), dxy, v);
        v = _mm256_fmadd_pd(_mm256_loadu_pd(a22 + i), dyy, v);
        if (b1 != nullptr) {
            const __m256d dx = _mm256_mul_pd(_mm256_sub_pd(ur, ul), vi2h);
            v = _mm256_fmadd_pd(_mm256_loadu_pd(b1 + i), dx, v);
        }
        if (b2 != nullptr) {
            const __m256d dy = _mm256_mul_pd(_mm256_sub_pd(ua, ub), vi2h);
            v = _mm256_fmadd_pd(_mm256_loadu_pd(b2 + i), dy, v);
        }
        if (c != nullptr) v = _mm256_fmadd_pd(_mm256_loadu_pd(c + i), uc, v);
        _mm256_storeu_pd(out + i, v);
    }
    if (i < count)
        scalar_impl::operator_row_2d(row_below + i, row + i, row_above + i, a11 + i, a12 + i,
                                     a22 + i, b1 != nullptr ? b1 + i : nullptr,
                                     b2 != nullptr ? b2 + i : nullptr,
                                     c != nullptr ? c + i : nullptr, inv_h2, inv_4h2, inv_2h,
                                     out + i, count - i);
}

}  // namespace garding::kernels::avx2_impl

#endif  // GARDING_HAVE_AVX2
