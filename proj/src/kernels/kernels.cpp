#include "garding/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "kernels_impl.hpp"

namespace garding::kernels {

namespace {

struct Vtable {
    double (*sum)(const double*, size_t);
    double (*max_value)(const double*, size_t);
    double (*min_value)(const double*, size_t);
    double (*masked_pow_sum)(const double*, const double*, const uint8_t*, size_t, double);
    double (*masked_gradient_pow_sum_2d)(const double*, const uint8_t*, int, int, double, double);
    double (*masked_gradient_pow_sum_1d)(const double*, const uint8_t*, int, double, double);
    void (*operator_row_2d)(const double*, const double*, const double*, const double*,
                            const double*, const double*, const double*, const double*,
                            const double*, double, double, double, double*, int);
};

constexpr Vtable kScalar{
    scalar_impl::sum,
    scalar_impl::max_value,
    scalar_impl::min_value,
    scalar_impl::masked_pow_sum,
    scalar_impl::masked_gradient_pow_sum_2d,
    scalar_impl::masked_gradient_pow_sum_1d,
    scalar_impl::operator_row_2d,
};

#if defined(GARDING_HAVE_AVX2)
constexpr Vtable kAvx2{
    avx2_impl::sum,
    avx2_impl::max_value,
    avx2_impl::min_value,
    avx2_impl::masked_pow_sum,
    avx2_impl::masked_gradient_pow_sum_2d,
    avx2_impl::masked_gradient_pow_sum_1d,
    avx2_impl::operator_row_2d,
};
#endif

bool cpu_has_avx2() {
#if defined(GARDING_HAVE_AVX2) && defined(__GNUC__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

struct Dispatch {
    Backend backend = Backend::scalar;
    const Vtable* table = &kScalar;

    Dispatch() {
        bool want_avx2 = cpu_has_avx2();
        if (const char* env = std::getenv("GARDING_KERNELS")) {
            if (std::strcmp(env, "scalar") == 0) want_avx2 = false;
            else if (std::strcmp(env, "avx2") == 0 && !cpu_has_avx2())
                throw std::runtime_error("GARDING_KERNELS=avx2 requested but unavailable");
            else if (std::strcmp(env, "avx2") == 0) want_avx2 = true;
        }
        select(want_avx2 ? Backend::avx2 : Backend::scalar);
    }

    void select(Backend b) {
        if (b == Backend::avx2) {
#if defined(GARDING_HAVE_AVX2)
            if (!cpu_has_avx2()) throw std::runtime_error("AVX2 kernels unavailable on this CPU");
            backend = Backend::avx2;
            table = &kAvx2;
            return;
#else
            throw std::runtime_error("AVX2 kernels were not built");
#endif
        }
        backend = Backend::scalar;
        table = &kScalar;
    }
};

Dispatch& dispatch() {
    static Dispatch d;
    return d;
}

}  // namespace

Backend active_backend() { return dispatch().backend; }

const char* backend_name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

bool avx2_available() { return cpu_has_avx2(); }

void set_backend(Backend b) { dispatch().select(b); }

double sum(const double* x, size_t n) { return dispatch().table->sum(x, n); }
double max_value(const double* x, size_t n) { return dispatch().table->max_value(x, n); }
double min_value(const double* x, size_t n) { return dispatch().table->min_value(x, n); }

double masked_pow_sum(const double* f, const double* w, const uint8_t* mask, size_t n, double q) {
    return dispatch().table->masked_pow_sum(f, w, mask, n, q);
}

double masked_gradient_pow_sum_2d(const double* u, const uint8_t* mask, int nx, int ny,
                                  double inv_2h, double r) {
    return dispatch().table->masked_gradient_pow_sum_2d(u, mask, nx, ny, inv_2h, r);
}

double masked_gradient_pow_sum_1d(const double* u, const uint8_t* mask, int n, double inv_2h,
                                  double r) {
    return dispatch().table->masked_gradient_pow_sum_1d(u, mask, n, inv_2h, r);
}

void operator_row_2d(const double* row_below, const double* row, const double* row_above,
                     const double* a11, const double* a12, const double* a22, const double* b1,
                     const double* b2, const double* c, double inv_h2, double inv_4h2,
                     double inv_2h, double* out, int count) {
    dispatch().table->operator_row_2d(row_below, row, row_above, a11, a12, a22, b1, b2, c, inv_h2,
                                      inv_4h2, inv_2h, out, count);
}

}  // namespace garding::kernels
