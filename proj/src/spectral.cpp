#include "garding/spectral.hpp"

namespace garding {

namespace {

double off_diagonal_sq(const double* a, int n) {
    double s = 0.0;
    for (int p = 0; p < n; ++p)
        for (int q = p + 1; q < n; ++q) s += a[p * kMaxDim + q] * a[p * kMaxDim + q];
    return s;
}

}  // namespace

SpectralDecomposition eigen_decompose(const SymmetricMatrix& input) {
    if (!input.all_finite()) throw std::domain_error("eigen_decompose: non-finite entries");
    const int n = input.dim();

    // Dense working copies, fixed stride for the rotation kernels.
    double a[kMaxDim * kMaxDim] = {0.0};
    double q[kMaxDim * kMaxDim] = {0.0};
    for (int i = 0; i < n; ++i) {
        q[i * kMaxDim + i] = 1.0;
        for (int j = 0; j < n; ++j) a[i * kMaxDim + j] = input(i, j);
    }

    double diag_scale = 0.0;
    for (int i = 0; i < n; ++i) diag_scale += a[i * kMaxDim + i] * a[i * kMaxDim + i];
    diag_scale = std::max(diag_scale, 1e-300);

    constexpr int kMaxSweeps = 64;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        if (off_diagonal_sq(a, n) <= 1e-28 * (diag_scale + off_diagonal_sq(a, n))) break;
        for (int p = 0; p < n; ++p) {
            for (int r = p + 1; r < n; ++r) {
                const double apr = a[p * kMaxDim + r];
                if (std::fabs(apr) <= 1e-300) continue;
                const double theta = (a[r * kMaxDim + r] - a[p * kMaxDim + p]) / (2.0 * apr);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                const double app = a[p * kMaxDim + p];
                const double arr = a[r * kMaxDim + r];
                a[p * kMaxDim + p] = app - t * apr;
                a[r * kMaxDim + r] = arr + t * apr;
                a[p * kMaxDim + r] = 0.0;
                a[r * kMaxDim + p] = 0.0;
                for (int i = 0; i < n; ++i) {
                    if (i != p && i != r) {
                        const double aip = a[i * kMaxDim + p];
                        const double air = a[i * kMaxDim + r];
                        a[i * kMaxDim + p] = a[p * kMaxDim + i] = aip - s * (air + tau * aip);
                        a[i * kMaxDim + r] = a[r * kMaxDim + i] = air + s * (aip - tau * air);
                    }
                    const double qip = q[i * kMaxDim + p];
                    const double qir = q[i * kMaxDim + r];
                    q[i * kMaxDim + p] = qip - s * (qir + tau * qip);
                    q[i * kMaxDim + r] = qir + s * (qip - tau * qir);
                }
            }
        }
    }

    // Ascending eigenvalue order, eigenvector columns permuted alongside.
    std::array<int, kMaxDim> perm{};
    for (int i = 0; i < n; ++i) perm[static_cast<size_t>(i)] = i;
    std::stable_sort(perm.begin(), perm.begin() + n, [&](int x, int y) {
        return a[x * kMaxDim + x] < a[y * kMaxDim + y];
    });

    VecN evals(n);
    std::array<double, kMaxDim * kMaxDim> qsorted{};
    for (int col = 0; col < n; ++col) {
        const int src = perm[static_cast<size_t>(col)];
        evals[col] = a[src * kMaxDim + src];
        int dominant = 0;
        double dominant_abs = -1.0;
        for (int row = 0; row < n; ++row) {
            const double value = q[row * kMaxDim + src];
            if (std::fabs(value) > dominant_abs) {
                dominant_abs = std::fabs(value);
                dominant = row;
            }
        }
        const double sign = q[dominant * kMaxDim + src] < 0.0 ? -1.0 : 1.0;
        for (int row = 0; row < n; ++row)
            qsorted[static_cast<size_t>(row) * n + col] = sign * q[row * kMaxDim + src];
    }

    SpectralDecomposition out{SpectrumVector(evals), n, qsorted};
    return out;
}

ConeLabel matrix_cone_membership(const SymmetricMatrix& a, int k, double tol) {
    const SpectralDecomposition d = eigen_decompose(a);
    return gamma_k_membership(d.eigenvalues, k, tol);
}

TraceExtremes trace_and_extremes(const SymmetricMatrix& a) {
    const SpectralDecomposition d = eigen_decompose(a);
    return TraceExtremes{a.trace(), d.eigenvalues.min(), d.eigenvalues.max()};
}

}  // namespace garding
