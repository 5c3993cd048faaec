#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "garding/dual_cone.hpp"
#include "garding/reference.hpp"
#include "garding/rng.hpp"
#include "garding/sym_poly.hpp"

using namespace garding;

namespace {

SpectrumVector interior_sample(Rng& rng, int n, int k) {
    for (;;) {
        VecN v(n);
        for (int i = 0; i < n; ++i) v[i] = std::exp(0.8 * rng.normal());
        double mean = 0.0;
        for (int i = 0; i < n; ++i) mean += v[i];
        mean /= n;
        for (double s = 1.0; s > 1e-3; s *= 0.5) {
            VecN mixed(n);
            for (int i = 0; i < n; ++i) mixed[i] = (1.0 - s) * mean + s * v[i];
            const SpectrumVector lambda(mixed);
            const DualEvalResult r = rho_star(lambda, k, kValueTol);
            if (r.status != DualStatus::unbounded_below &&
                r.value > 1e-2 * norm2(lambda.raw()))
                return lambda;
        }
    }
}

}  // namespace

TEST_CASE("dual value closed forms") {
    // k = n: geometric mean of the components.
    const DualEvalResult det3 = rho_star(SpectrumVector{1, 2, 3}, 3);
    CHECK(det3.value == doctest::Approx(std::pow(6.0, 1.0 / 3.0)).epsilon(1e-6));
    CHECK(det3.value == doctest::Approx(1.817121).epsilon(1e-5));

    // k = 1: finite exactly on the non-negative diagonal ray.
    const DualEvalResult off_ray = rho_star(SpectrumVector{1, 2, 3}, 1);
    CHECK(off_ray.status == DualStatus::unbounded_below);
    CHECK(off_ray.has_certificate);
    CHECK(sum(off_ray.certificate) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(dot(SpectrumVector{1, 2, 3}.raw(), off_ray.certificate) < 0.0);

    const DualEvalResult on_ray = rho_star(SpectrumVector{2, 2, 2}, 1);
    CHECK(on_ray.status == DualStatus::optimal);
    CHECK(on_ray.value == doctest::Approx(2.0));

    // Equality ray for the intermediate index.
    const DualEvalResult ray = rho_star(SpectrumVector{1, 1, 2}, 2);
    CHECK(ray.value == doctest::Approx(2.0 / 3.0 * std::sqrt(3.0)).epsilon(1e-6));
    CHECK(ray.value == doctest::Approx(1.154701).epsilon(1e-5));

    // Symmetric point: the slice-grid oracle pins the value at 1.
    const DualEvalResult ones = rho_star(SpectrumVector{1, 1, 1}, 2);
    CHECK(ones.value == doctest::Approx(1.0).epsilon(1e-6));
    const reference::SliceScan scan = reference::brute_force_rho_star(SpectrumVector{1, 1, 1}, 2);
    CHECK(scan.value == doctest::Approx(1.0).epsilon(5e-3));
}

TEST_CASE("optimal mu contract") {
    Rng rng(1);
    for (int rep = 0; rep < 40; ++rep) {
        const int n = rng.uniform_int(2, 5);
        const int k = rng.uniform_int(2, n);
        const SpectrumVector lambda = interior_sample(rng, n, k);
        const DualEvalResult r = rho_star(lambda, k, kValueTol);
        REQUIRE(r.has_mu);
        // Feasibility at the evaluation tolerance.
        const double sk = elementary_symmetric(r.optimal_mu.span(), k);
        CHECK(sk >= binomial(n, k) * (1.0 - 1e-8));
        for (int j = 1; j <= k; ++j)
            CHECK(elementary_symmetric(r.optimal_mu.span(), j) > 0.0);
        // Descending representative, value consistent with the pairing.
        for (int i = 0; i + 1 < n; ++i) CHECK(r.optimal_mu[i] >= r.optimal_mu[i + 1] - 1e-9);
        const double paired = dot(lambda.raw(), r.optimal_mu) / n;
        CHECK(paired == doctest::Approx(r.value).epsilon(1e-8));
        CHECK(r.duality_gap <= 10.0 * kValueTol * norm2(lambda.raw()));
    }
}

TEST_CASE("status taxonomy") {
    VecN nan_vec{1.0, 2.0};
    nan_vec[0] = std::numeric_limits<double>::quiet_NaN();
    CHECK(rho_star(SpectrumVector(nan_vec), 1).status == DualStatus::infeasible_input);
    CHECK(rho_star(SpectrumVector{-1, -1, -1}, 1).status == DualStatus::unbounded_below);

    // Boundary optimum: the sharp-ray optimizer has zero components.
    const DualEvalResult ray = rho_star(SpectrumVector{1, 1, 2}, 2);
    CHECK(ray.status == DualStatus::boundary_optimal);
    REQUIRE(ray.has_mu);
    CHECK(ray.optimal_mu[2] == doctest::Approx(0.0).scale(1.0).epsilon(1e-4));

    CHECK_THROWS_AS(rho_star(SpectrumVector{1, 2, 3}, 0), std::domain_error);
    CHECK_THROWS_AS(rho_star(SpectrumVector{1, 2, 3}, 4), std::domain_error);
    CHECK_THROWS_AS(rho_star(SpectrumVector{1, 2, 3}, 2, 1.0), std::invalid_argument);
}

TEST_CASE("sharp upper bound and its witness") {
    CHECK(rho_star_upper_bound(SpectrumVector{1, 1, 2}, 2) == doctest::Approx(1.154701).epsilon(1e-5));
    CHECK(rho_star_upper_bound(SpectrumVector{2, 3, 4}, 1) == doctest::Approx(2.0));
    CHECK(rho_star_upper_bound(SpectrumVector{1, 2, 3}, 3) ==
          doctest::Approx(std::pow(6.0, 1.0 / 3.0)));
    CHECK_THROWS_AS(rho_star_upper_bound(SpectrumVector{-1, 1, 1}, 2), std::domain_error);

    // Witness: S_k(mu) = binom(n,k) and the pairing equals the bound.
    {
        const SpectrumVector lambda{1, 1, 2};
        const VecN mu = rho_star_upper_bound_witness(lambda, 2);
        CHECK(mu[0] == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
        CHECK(mu[1] == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
        CHECK(mu[2] == 0.0);
        CHECK(elementary_symmetric(mu.span(), 2) == doctest::Approx(3.0).epsilon(1e-12));
        CHECK(dot(lambda.raw(), mu) / 3.0 ==
              doctest::Approx(rho_star_upper_bound(lambda, 2)).epsilon(1e-12));
    }
    {
        const SpectrumVector lambda{1, 2, 3};
        const VecN mu = rho_star_upper_bound_witness(lambda, 3);
        CHECK(elementary_symmetric(mu.span(), 3) == doctest::Approx(1.0).epsilon(1e-12));
    }
    {
        const SpectrumVector lambda{2, 2};
        const VecN mu = rho_star_upper_bound_witness(lambda, 1);
        CHECK(mu[0] == doctest::Approx(2.0));
        CHECK(mu[1] == 0.0);
    }

    Rng rng(9);
    for (int rep = 0; rep < 100; ++rep) {
        const int n = rng.uniform_int(2, 5);
        const int k = rng.uniform_int(1, n);
        const SpectrumVector lambda =
            k == 1 ? SpectrumVector(VecN::constant(n, std::exp(rng.normal())))
                   : interior_sample(rng, n, k);
        const VecN mu = rho_star_upper_bound_witness(lambda, k);
        CHECK(elementary_symmetric(mu.span(), k) ==
              doctest::Approx(binomial(n, k)).epsilon(1e-12));
        const double paired = dot(lambda.raw(), mu) / n;
        CHECK(paired == doctest::Approx(rho_star_upper_bound(lambda, k)).epsilon(1e-12));
        const DualEvalResult r = rho_star(lambda, k, kValueTol);
        CHECK(r.value <= rho_star_upper_bound(lambda, k) + 1e-6 * norm2(lambda.raw()));
    }
}

TEST_CASE("dual membership labels") {
    CHECK(dual_cone_membership(SpectrumVector{1, 1, 1}, 1).membership == Membership::interior);
    CHECK(dual_cone_membership(SpectrumVector{1, 1, 1}, 2).membership == Membership::interior);
    CHECK(dual_cone_membership(SpectrumVector{1, 1, 1}, 3).membership == Membership::interior);
    CHECK(dual_cone_membership(SpectrumVector{1, 2, 3}, 1).membership == Membership::outside);
    CHECK(dual_cone_membership(SpectrumVector{0, 1, 1}, 3).membership == Membership::boundary);
    CHECK(dual_cone_membership(SpectrumVector{-1, 1, 1}, 3).membership == Membership::outside);
    CHECK(dual_cone_membership(SpectrumVector{0, 0, 0}, 2).membership == Membership::boundary);
}

TEST_CASE("oracle equivalence on a fixed panel") {
    Rng rng(31);
    for (int n = 2; n <= 3; ++n) {
        for (int k = 2; k <= n; ++k) {
            for (int rep = 0; rep < 10; ++rep) {
                SpectrumVector lambda = interior_sample(rng, n, k);
                const double scale = norm2(lambda.raw());
                VecN unit(n);
                for (int i = 0; i < n; ++i) unit[i] = lambda[i] / scale;
                const SpectrumVector normalized(unit);
                const DualEvalResult r = rho_star(normalized, k, kValueTol);
                const reference::SliceScan scan =
                    reference::brute_force_rho_star(normalized, k, 1e-3);
                REQUIRE_FALSE(scan.unbounded);
                CHECK(std::fabs(r.value - scan.value) <= 5e-3);
            }
        }
    }
}

TEST_CASE("slice minimum drives unboundedness") {
    Rng rng(77);
    for (int rep = 0; rep < 50; ++rep) {
        const int n = rng.uniform_int(2, 5);
        const int k = rng.uniform_int(2, n);
        VecN v(n);
        for (int i = 0; i < n; ++i) v[i] = rng.normal();
        v[0] = -std::fabs(v[0]) - 1.0;  // clearly outside the positive orthant
        const SpectrumVector lambda(v);
        const DualEvalResult r = rho_star(lambda, k, kValueTol);
        if (r.status == DualStatus::unbounded_below) {
            REQUIRE(r.has_certificate);
            CHECK(sum(r.certificate) == doctest::Approx(n).epsilon(1e-10));
            CHECK(dot(lambda.raw(), r.certificate) < 0.0);
            // The certificate sits in the closed cone.
            for (int j = 1; j <= k; ++j)
                CHECK(elementary_symmetric(r.certificate.span(), j) >= -1e-10);
            CHECK(dual_cone_membership(lambda, k).membership == Membership::outside);
        }
    }
}
