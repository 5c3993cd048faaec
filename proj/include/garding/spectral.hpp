#pragma once

#include "garding/sym_poly.hpp"
#include "garding/types.hpp"

namespace garding {

/// Dense symmetric matrix, n <= kMaxDim, stored as the packed upper
/// triangle (row-major). Mutation through set() keeps symmetry exact.
class SymmetricMatrix {
  public:
    explicit SymmetricMatrix(int dim) : n_(dim) {
        if (dim < 1 || dim > kMaxDim)
            throw std::invalid_argument("SymmetricMatrix: dimension out of range");
        packed_.fill(0.0);
    }

    static SymmetricMatrix identity(int dim) {
        SymmetricMatrix a(dim);
        for (int i = 0; i < dim; ++i) a.set(i, i, 1.0);
        return a;
    }
    static SymmetricMatrix diagonal(const VecN& d) {
        SymmetricMatrix a(d.n);
        for (int i = 0; i < d.n; ++i) a.set(i, i, d[i]);
        return a;
    }

    int dim() const { return n_; }

    double operator()(int i, int j) const { return packed_[pack_index(i, j)]; }
    void set(int i, int j, double value) { packed_[pack_index(i, j)] = value; }

    double trace() const {
        double t = 0.0;
        for (int i = 0; i < n_; ++i) t += (*this)(i, i);
        return t;
    }
    double max_abs_entry() const {
        double m = 0.0;
        const size_t count = static_cast<size_t>(n_) * (n_ + 1) / 2;
        for (size_t idx = 0; idx < count; ++idx) m = std::max(m, std::fabs(packed_[idx]));
        return m;
    }
    bool all_finite() const {
        const size_t count = static_cast<size_t>(n_) * (n_ + 1) / 2;
        for (size_t idx = 0; idx < count; ++idx)
            if (!std::isfinite(packed_[idx])) return false;
        return true;
    }

    std::span<const double> packed() const {
        return {packed_.data(), static_cast<size_t>(n_) * (n_ + 1) / 2};
    }
    std::span<double> packed_mut() {
        return {packed_.data(), static_cast<size_t>(n_) * (n_ + 1) / 2};
    }

  private:
    size_t pack_index(int i, int j) const {
        if (i < 0 || j < 0 || i >= n_ || j >= n_)
            throw std::out_of_range("SymmetricMatrix: index out of range");
        if (i > j) std::swap(i, j);
        // Row-major upper triangle: row i starts at i*n - i(i-1)/2.
        return static_cast<size_t>(i) * n_ - static_cast<size_t>(i) * (i - 1) / 2 +
               static_cast<size_t>(j - i);
    }

    int n_;
    std::array<double, kMaxDim*(kMaxDim + 1) / 2> packed_;
};

/// Eigensystem with eigenvalues ascending and eigenvectors as columns of
/// an orthogonal matrix (column i pairs with eigenvalue i).
struct SpectralDecomposition {
    SpectrumVector eigenvalues;
    int n = 0;
    std::array<double, kMaxDim * kMaxDim> q{};  // row-major

    double q_at(int row, int col) const { return q[static_cast<size_t>(row) * n + col]; }
};

/// Cyclic-sweep Jacobi diagonalization; unconditional convergence on
/// symmetric input and bit-reproducible for a fixed sweep order.
/// Eigenvector columns are sign-normalized (largest-magnitude entry > 0).
SpectralDecomposition eigen_decompose(const SymmetricMatrix& a);

/// Gamma_k label of a matrix through its spectrum.
ConeLabel matrix_cone_membership(const SymmetricMatrix& a, int k, double tol = kMembershipTol);

struct TraceExtremes {
    double trace = 0.0;
    double lambda_min = 0.0;
    double lambda_max = 0.0;
};

TraceExtremes trace_and_extremes(const SymmetricMatrix& a);

}  // namespace garding
