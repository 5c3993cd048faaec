#include <cmath>
#include <limits>

#include "kernels_impl.hpp"

namespace garding::kernels {

namespace detail {

bool integer_exponent(double q, int* out) {
    const double rounded = std::round(q);
    if (std::fabs(q - rounded) > 1e-12) return false;
    if (rounded < 1.0 || rounded > 32.0) return false;
    *out = static_cast<int>(rounded);
    return true;
}

}  // namespace detail

namespace scalar_impl {

namespace {

double pow_int(double x, int e) {
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
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) s += x[i];
    return s;
}

double max_value(const double* x, size_t n) {
    double m = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < n; ++i) m = m < x[i] ? x[i] : m;
    return m;
}

double min_value(const double* x, size_t n) {
    double m = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < n; ++i) m = m > x[i] ? x[i] : m;
    return m;
}

double masked_pow_sum(const double* f, const double* w, const uint8_t* mask, size_t n, double q) {
    int e = 0;
    const bool int_q = detail::integer_exponent(q, &e);
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) {
        if (mask != nullptr && !mask[i]) continue;
        const double ratio = std::fabs(w != nullptr ? f[i] / w[i] : f[i]);
        s += int_q ? pow_int(ratio, e) : std::pow(ratio, q);
    }
    return s;
}

double masked_gradient_pow_sum_2d(const double* u, const uint8_t* mask, int nx, int ny,
                                  double inv_2h, double r) {
    int e = 0;
    const bool int_r = detail::integer_exponent(r, &e);
    double s = 0.0;
    for (int iy = 1; iy < ny - 1; ++iy) {
        const size_t row = static_cast<size_t>(iy) * nx;
        for (int ix = 1; ix < nx - 1; ++ix) {
            const size_t i = row + ix;
            if (!mask[i]) continue;
            const double gx = (u[i + 1] - u[i - 1]) * inv_2h;
            const double gy = (u[i + nx] - u[i - nx]) * inv_2h;
            const double g = std::sqrt(gx * gx + gy * gy);
            s += int_r ? pow_int(g, e) : std::pow(g, r);
        }
    }
    return s;
}

double masked_gradient_pow_sum_1d(const double* u, const uint8_t* mask, int n, double inv_2h,
                                  double r) {
    int e = 0;
    const bool int_r = detail::integer_exponent(r, &e);
    double s = 0.0;
    for (int i = 1; i < n - 1; ++i) {
        if (!mask[i]) continue;
        const double g = std::fabs((u[i + 1] - u[i - 1]) * inv_2h);
        s += int_r ? pow_int(g, e) : std::pow(g, r);
    }
    return s;
}

void operator_row_2d(const double* row_below, const double* row, const double* row_above,
                     const double* a11, const double* a12, const double* a22, const double* b1,
                     const double* b2, const double* c, double inv_h2, double inv_4h2,
                     double inv_2h, double* out, int count) {
    for (int i = 0; i < count; ++i) {
        const double dxx = (row[i - 1] - 2.0 * row[i] + row[i + 1]) * inv_h2;
        const double dyy = (row_below[i] - 2.0 * row[i] + row_above[i]) * inv_h2;
        const double dxy =
            (row_above[i + 1] + row_below[i - 1] - row_above[i - 1] - row_below[i + 1]) * inv_4h2;
        double v = a11[i] * dxx + 2.0 * a12[i] * dxy + a22[i] * dyy;
        if (b1 != nullptr) v += b1[i] * (row[i + 1] - row[i - 1]) * inv_2h;
        if (b2 != nullptr) v += b2[i] * (row_above[i] - row_below[i]) * inv_2h;
        if (c != nullptr) v += c[i] * row[i];
        out[i] = v;
    }
}

}  // namespace scalar_impl
}  // namespace garding::kernels
