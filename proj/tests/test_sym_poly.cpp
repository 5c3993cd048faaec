#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "garding/reference.hpp"
#include "garding/rng.hpp"
#include "garding/sym_poly.hpp"

using namespace garding;

TEST_CASE("elementary symmetric values") {
    CHECK(elementary_symmetric(SpectrumVector{1, 1, 1}, 2) == doctest::Approx(3.0));
    CHECK(elementary_symmetric(SpectrumVector{1, 2, 3}, 2) == doctest::Approx(11.0));
    CHECK(elementary_symmetric(SpectrumVector{1, 2, 3}, 0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(elementary_symmetric(SpectrumVector{1, 2, 3}, 4), std::domain_error);
    CHECK_THROWS_AS(elementary_symmetric(SpectrumVector{1, 2, 3}, -1), std::domain_error);
}

TEST_CASE("recurrence matches subset enumeration exactly") {
    Rng rng(42);
    for (int n = 2; n <= 5; ++n) {
        for (int rep = 0; rep < 200; ++rep) {
            VecN v(n);
            for (int i = 0; i < n; ++i) v[i] = 4.0 * rng.normal();
            for (int k = 0; k <= n; ++k) {
                const double fast = elementary_symmetric(v.span(), k);
                const double slow = reference::esf_enumeration(v.span(), k);
                CHECK(fast == doctest::Approx(slow).epsilon(1e-13));
            }
        }
    }
}

TEST_CASE("permutation invariance and homogeneity") {
    Rng rng(7);
    for (int rep = 0; rep < 100; ++rep) {
        const int n = rng.uniform_int(2, 8);
        VecN v(n);
        for (int i = 0; i < n; ++i) v[i] = rng.normal();
        VecN shuffled = v;
        for (int i = n - 1; i > 0; --i) std::swap(shuffled[i], shuffled[rng.uniform_int(0, i)]);
        const int k = rng.uniform_int(1, n);
        // SpectrumVector sorts, so equal multisets give bit-equal values.
        CHECK(elementary_symmetric(SpectrumVector(v), k) ==
              elementary_symmetric(SpectrumVector(shuffled), k));

        const double t = std::exp(rng.normal());
        VecN scaled(n);
        for (int i = 0; i < n; ++i) scaled[i] = t * v[i];
        const double lhs = elementary_symmetric(scaled.span(), k);
        const double rhs = std::pow(t, k) * elementary_symmetric(v.span(), k);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("normalized symmetric mean") {
    CHECK(rho_k(SpectrumVector{1, 1, 1}, 1) == doctest::Approx(1.0));
    CHECK(rho_k(SpectrumVector{1, 1, 1}, 2) == doctest::Approx(1.0));
    CHECK(rho_k(SpectrumVector{1, 1, 1}, 3) == doctest::Approx(1.0));
    CHECK(rho_k(SpectrumVector{1, 2, 3}, 1) == doctest::Approx(2.0));
    CHECK(rho_k(SpectrumVector{1, 1, 2}, 2) == doctest::Approx(std::sqrt(5.0 / 3.0)));
    CHECK_THROWS_AS(rho_k(SpectrumVector{-1, 1, 1}, 2), std::domain_error);
}

TEST_CASE("Maclaurin chain on random interior spectra") {
    Rng rng(11);
    int checked = 0;
    while (checked < 200) {
        const int n = rng.uniform_int(2, 8);
        const int k = rng.uniform_int(2, n);
        VecN v(n);
        for (int i = 0; i < n; ++i) v[i] = rng.normal() + 1.5;
        const SpectrumVector lambda(v);
        if (gamma_k_membership(lambda, k).membership != Membership::interior) continue;
        double prev = rho_k(lambda, 1);
        for (int j = 2; j <= k; ++j) {
            const double current = rho_k(lambda, j);
            CHECK(current <= prev * (1.0 + 1e-12));
            prev = current;
        }
        ++checked;
    }
}

TEST_CASE("cone membership labels") {
    CHECK(gamma_k_membership(SpectrumVector{1, 1, 1}, 3).membership == Membership::interior);
    CHECK(gamma_k_membership(SpectrumVector{-1, 1, 1}, 2).membership == Membership::outside);
    CHECK(gamma_k_membership(SpectrumVector{-1, 1, 1}, 1).membership == Membership::interior);
    CHECK(gamma_k_membership(SpectrumVector{-1, 2, 2}, 2).membership == Membership::boundary);

    // The degree-j scale keeps up-scaled interior points interior; below the
    // unit floor the label may soften to boundary but never flips outside.
    Rng rng(3);
    for (int rep = 0; rep < 50; ++rep) {
        const int n = rng.uniform_int(2, 6);
        VecN v(n);
        for (int i = 0; i < n; ++i) v[i] = 1.0 + 0.5 * rng.uniform();
        const int k = rng.uniform_int(1, n);
        for (const double t : {1.0, 1e3, 1e6}) {
            VecN scaled(n);
            for (int i = 0; i < n; ++i) scaled[i] = t * v[i];
            CHECK(gamma_k_membership(SpectrumVector(scaled), k).membership ==
                  Membership::interior);
        }
        VecN tiny(n);
        for (int i = 0; i < n; ++i) tiny[i] = 1e-6 * v[i];
        CHECK(gamma_k_membership(SpectrumVector(tiny), k).membership != Membership::outside);
    }
}

TEST_CASE("nesting of the primal cones") {
    Rng rng(5);
    int checked = 0;
    while (checked < 100) {
        const int n = rng.uniform_int(2, 8);
        const int k = rng.uniform_int(2, n);
        VecN v(n);
        for (int i = 0; i < n; ++i) v[i] = rng.normal() + 1.0;
        const SpectrumVector lambda(v);
        if (gamma_k_membership(lambda, k).membership != Membership::interior) continue;
        for (int l = 1; l <= k; ++l)
            CHECK(gamma_k_membership(lambda, l).membership == Membership::interior);
        ++checked;
    }
}

TEST_CASE("fundamental inequality values and boundary behaviour") {
    CHECK(fundamental_inequality(SpectrumVector{1, 1, 1}, 2) == doctest::Approx(6.0));
    // mu = (-0.4, 1, 3): S_1 = 3.6, S_2 = 1.4 puts it inside Gamma_2.
    const SpectrumVector mu{-0.4, 1.0, 3.0};
    CHECK(elementary_symmetric(mu, 2) == doctest::Approx(1.4));
    CHECK(gamma_k_membership(mu, 2).membership == Membership::interior);
    CHECK(fundamental_inequality(mu, 2) == doctest::Approx(2.4));

    Rng rng(17);
    for (int rep = 0; rep < 200; ++rep) {
        const int n = rng.uniform_int(2, 6);
        const int k = rng.uniform_int(2, n);
        const SpectrumVector boundary = reference::sample_gamma_boundary(n, k, rng);
        CHECK(fundamental_inequality(boundary, k) >= -1e-9 * (1.0 + max_abs(boundary.raw())));
    }
}

TEST_CASE("slice component bounds") {
    const SliceBounds b33 = gamma_k_slice_bounds(3, 3);
    CHECK(b33.lower == doctest::Approx(0.0));
    CHECK(b33.upper == doctest::Approx(3.0));
    const SliceBounds b32 = gamma_k_slice_bounds(3, 2);
    CHECK(b32.lower == doctest::Approx(-1.0));
    CHECK(b32.upper == doctest::Approx(5.0));
    const SliceBounds b42 = gamma_k_slice_bounds(4, 2);
    CHECK(b42.lower == doctest::Approx(-2.0));
    CHECK(b42.upper == doctest::Approx(10.0));
    CHECK_THROWS_AS(gamma_k_slice_bounds(3, 1), std::domain_error);

    // Every boundary sample rescaled onto the slice respects the bounds.
    Rng rng(23);
    for (int rep = 0; rep < 100; ++rep) {
        const int n = rng.uniform_int(2, 6);
        const int k = rng.uniform_int(2, n);
        const SpectrumVector pt = reference::sample_gamma_boundary(n, k, rng);
        const double s1 = elementary_symmetric(pt, 1);
        if (s1 < 1e-6) continue;
        const SliceBounds bounds = gamma_k_slice_bounds(n, k);
        for (int i = 0; i < n; ++i) {
            const double scaled = pt[i] * n / s1;
            CHECK(scaled >= bounds.lower - 1e-9);
            CHECK(scaled <= bounds.upper + 1e-9);
        }
    }
}
