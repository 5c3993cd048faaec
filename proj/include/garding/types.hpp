#pragma once

#include <array>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace garding {

/// Largest supported eigenvalue-vector / matrix dimension.
inline constexpr int kMaxDim = 8;

/// Default relative tolerance for cone membership labels.
inline constexpr double kMembershipTol = 1e-6;

/// Default absolute tolerance target for dual-function values.
inline constexpr double kValueTol = 1e-8;

enum class Membership { interior, boundary, outside };

inline const char* to_string(Membership m) {
    switch (m) {
        case Membership::interior: return "interior";
        case Membership::boundary: return "boundary";
        case Membership::outside: return "outside";
    }
    return "?";
}

/// Fixed-capacity real n-tuple (n <= kMaxDim). No ordering invariant;
/// used for dual vectors, eigenvalue workspaces and matrix diagonals.
struct VecN {
    int n = 0;
    std::array<double, kMaxDim> v{};

    VecN() = default;
    explicit VecN(int dim) : n(dim) {
        if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("VecN: dimension out of range");
    }
    VecN(std::initializer_list<double> vals) : n(static_cast<int>(vals.size())) {
        if (n < 1 || n > kMaxDim) throw std::invalid_argument("VecN: dimension out of range");
        std::copy(vals.begin(), vals.end(), v.begin());
    }
    static VecN from(std::span<const double> vals) {
        VecN r(static_cast<int>(vals.size()));
        std::copy(vals.begin(), vals.end(), r.v.begin());
        return r;
    }
    static VecN constant(int dim, double value) {
        VecN r(dim);
        r.v.fill(0.0);
        std::fill_n(r.v.begin(), dim, value);
        return r;
    }

    int size() const { return n; }
    double& operator[](int i) { return v[static_cast<size_t>(i)]; }
    double operator[](int i) const { return v[static_cast<size_t>(i)]; }
    std::span<const double> span() const { return {v.data(), static_cast<size_t>(n)}; }

    bool all_finite() const {
        for (int i = 0; i < n; ++i)
            if (!std::isfinite(v[static_cast<size_t>(i)])) return false;
        return true;
    }
};

inline double dot(const VecN& a, const VecN& b) {
    double s = 0.0;
    for (int i = 0; i < a.n; ++i) s += a[i] * b[i];
    return s;
}

inline double sum(const VecN& a) {
    double s = 0.0;
    for (int i = 0; i < a.n; ++i) s += a[i];
    return s;
}

inline double min_component(const VecN& a) {
    double m = a[0];
    for (int i = 1; i < a.n; ++i) m = std::min(m, a[i]);
    return m;
}

inline double max_component(const VecN& a) {
    double m = a[0];
    for (int i = 1; i < a.n; ++i) m = std::max(m, a[i]);
    return m;
}

inline double max_abs(const VecN& a) {
    double m = 0.0;
    for (int i = 0; i < a.n; ++i) m = std::max(m, std::fabs(a[i]));
    return m;
}

inline double norm2(const VecN& a) {
    double s = 0.0;
    for (int i = 0; i < a.n; ++i) s += a[i] * a[i];
    return std::sqrt(s);
}

/// Ordered eigenvalue tuple: components stored in non-decreasing order,
/// 2 <= n <= kMaxDim. Construction sorts; NaNs (if any) sort last so the
/// order stays a strict weak ordering.
class SpectrumVector {
  public:
    explicit SpectrumVector(VecN values) : vals_(values) {
        if (vals_.n < 2) throw std::invalid_argument("SpectrumVector: dimension must be >= 2");
        sort_ascending();
    }
    SpectrumVector(std::initializer_list<double> values) : SpectrumVector(VecN(values)) {}
    static SpectrumVector from(std::span<const double> values) {
        return SpectrumVector(VecN::from(values));
    }

    int dim() const { return vals_.n; }
    double operator[](int i) const { return vals_[i]; }
    const VecN& raw() const { return vals_; }
    std::span<const double> span() const { return vals_.span(); }

    double min() const { return vals_[0]; }
    double max() const { return vals_[vals_.n - 1]; }
    bool all_finite() const { return vals_.all_finite(); }

  private:
    void sort_ascending() {
        auto* b = vals_.v.data();
        std::sort(b, b + vals_.n, [](double x, double y) {
            if (std::isnan(x)) return false;
            if (std::isnan(y)) return true;
            return x < y;
        });
    }
    VecN vals_;
};

/// Cone-membership verdict for one index k, together with the relative
/// tolerance the label was decided under.
struct ConeLabel {
    int k = 0;
    Membership membership = Membership::outside;
    double tol = 0.0;
};

/// Exact binomial coefficient as a double (n <= kMaxDim keeps it exact).
inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 0; i < k; ++i) r = r * static_cast<double>(n - i) / static_cast<double>(i + 1);
    return std::round(r);
}

}  // namespace garding
