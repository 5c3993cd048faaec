#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "garding/dual_cone.hpp"
#include "garding/ellipticity.hpp"
#include "garding/reference.hpp"
#include "garding/rng.hpp"

using namespace garding;

TEST_CASE("ellipticity margin values") {
    CHECK(chi(3, 2, 4.0) == doctest::Approx(0.5));
    CHECK(chi(3, 2, 6.0) == doctest::Approx(0.0));
    CHECK(chi(3, 3, 9.0) == doctest::Approx(2.0 / 3.0));
    CHECK_THROWS_AS(chi(3, 2, 0.0), std::domain_error);
    CHECK_THROWS_AS(chi(3, 2, -1.0), std::domain_error);
}

TEST_CASE("explicit lower bound and its side condition") {
    const SpectrumVector lambda{1, 1, 1};
    {
        const RhoStarLowerBound lb = rho_star_lower_bound(lambda, 2, 5.6);
        CHECK(lb.bound == doctest::Approx(0.4 / 3.0).epsilon(1e-9));
        CHECK(lb.valid);
    }
    {
        const RhoStarLowerBound lb = rho_star_lower_bound(lambda, 2, 4.0);
        CHECK_FALSE(lb.valid);  // chi*a0 = 2 > 1/2
        CHECK(lb.bound == doctest::Approx(2.0 / 3.0));
    }
    {
        const RhoStarLowerBound lb = rho_star_lower_bound(lambda, 2, 6.0);
        CHECK(lb.bound == doctest::Approx(0.0));
        CHECK_FALSE(lb.valid);
    }
    CHECK_THROWS_AS(rho_star_lower_bound(lambda, 1, 4.0), std::domain_error);
    CHECK_THROWS_AS(rho_star_lower_bound(SpectrumVector{-1, 1, 1}, 2, 4.0), std::domain_error);
}

TEST_CASE("chi positivity places spectra inside the dual cone") {
    Rng rng(13);
    int valid_cases = 0;
    for (int rep = 0; rep < 200; ++rep) {
        const int n = rng.uniform_int(2, 5);
        const int k = rng.uniform_int(2, n);
        const double threshold =
            k == n ? 4.0 * n : static_cast<double>(n) * (n - 1) / (n - k);
        const double a0_target = n + (threshold - n) * rng.uniform(0.2, 0.98);
        const double lmin = std::exp(0.5 * rng.normal());
        VecN eig(n);
        eig[0] = lmin;
        for (int i = 1; i < n; ++i)
            eig[i] = lmin * (1.0 + (a0_target - n) / (n - 1) * rng.uniform(0.85, 1.0));
        const SymmetricMatrix a = reference::random_conjugation(eig, rng);
        const SpectralDecomposition dec = eigen_decompose(a);
        const double a0 = a.trace() / dec.eigenvalues.min();
        const double margin = chi(n, k, a0);
        if (!(margin > 0.0)) continue;
        CHECK(dual_cone_membership(dec.eigenvalues, k).membership == Membership::interior);

        const RhoStarLowerBound lb = rho_star_lower_bound(dec.eigenvalues, k, a0);
        if (lb.valid) {
            ++valid_cases;
            const double value = rho_star(dec.eigenvalues, k, kValueTol).value;
            CHECK(value >= lb.bound - 1e-6 * norm2(dec.eigenvalues.raw()));
        }
    }
    CHECK(valid_cases > 0);
}

TEST_CASE("profile of the constant identity field") {
    const GridDomain d = GridDomain::rect(9, 9, 0.125);
    const SymmetricMatrixField field =
        SymmetricMatrixField::constant(d, SymmetricMatrix::identity(3));
    const EllipticityProfile prof = ellipticity_profile(field, 2);
    CHECK(prof.a0 == doctest::Approx(3.0).epsilon(1e-8));
    CHECK(prof.a_k == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(prof.chi == doctest::Approx(chi(3, 2, 3.0)).epsilon(1e-8));
    CHECK(prof.observed_ratio == doctest::Approx(1.0).epsilon(1e-8));
    // The printed refined constant (3/2)^2 / 3 = 0.75 undercuts the observed
    // ratio 1 here, while the crude form holds with equality.
    CHECK(prof.ratio_bound == doctest::Approx(0.75).epsilon(1e-6));
    CHECK_FALSE(prof.refined_holds);
    CHECK(prof.crude_ratio_bound == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(prof.crude_holds);
    CHECK(prof.nodes_outside_dual_cone == 0);
}

TEST_CASE("profile of the constant diag(1,1,2) field") {
    const GridDomain d = GridDomain::rect(7, 7, 0.25);
    const SymmetricMatrixField field =
        SymmetricMatrixField::constant(d, SymmetricMatrix::diagonal(VecN{1, 1, 2}));
    const EllipticityProfile prof = ellipticity_profile(field, 2);
    CHECK(prof.a0 == doctest::Approx(4.0).epsilon(1e-8));
    CHECK(prof.a_k == doctest::Approx(2.0 / 1.154701).epsilon(1e-5));
    CHECK(prof.a_k == doctest::Approx(1.73205).epsilon(1e-4));
}

TEST_CASE("ratio inequality derivable from the sharp bound") {
    // lambda_max/lambda_min <= (k/n)^k * binom(n,k) * a_k^k follows from the
    // sharp upper bound; random fields must satisfy it.
    Rng rng(29);
    for (int rep = 0; rep < 25; ++rep) {
        const GridDomain d = GridDomain::rect(5, 5, 0.25);
        const int n = rng.uniform_int(2, 4);
        const int k = rng.uniform_int(2, n);
        VecN eig(n);
        eig[0] = rng.uniform(0.5, 1.0);
        for (int i = 1; i < n; ++i) eig[i] = eig[0] * rng.uniform(1.0, 3.0);
        const SymmetricMatrixField field =
            SymmetricMatrixField::constant(d, reference::random_conjugation(eig, rng));
        const EllipticityProfile prof = ellipticity_profile(field, k);
        if (prof.nodes_outside_dual_cone > 0) continue;
        const double derivable =
            std::pow(static_cast<double>(k) / n, k) * binomial(n, k) * prof.crude_ratio_bound;
        CHECK(prof.observed_ratio <= derivable * (1.0 + 1e-6));
    }
}

TEST_CASE("profile rejects non-elliptic nodes") {
    const GridDomain d = GridDomain::rect(5, 5, 0.25);
    const SymmetricMatrixField field =
        SymmetricMatrixField::constant(d, SymmetricMatrix::diagonal(VecN{-1.0, 1.0}));
    CHECK_THROWS_AS(ellipticity_profile(field, 2), std::domain_error);
}

TEST_CASE("chi positivity confirmed nodewise on a sampled field") {
    const GridDomain d = GridDomain::rect(7, 7, 0.25);
    const SymmetricMatrixField field =
        sample_operator_field(99, d, 3, 2, FieldMode::chi_positive);
    for (size_t node = 0; node < d.node_count(); ++node) {
        if (!d.is_interior(node)) continue;
        const SpectralDecomposition dec = eigen_decompose(field.matrix_at(node));
        const double a0 = field.matrix_at(node).trace() / dec.eigenvalues.min();
        CHECK(chi(3, 2, a0) > 0.0);
        CHECK(dual_cone_membership(dec.eigenvalues, 2).membership == Membership::interior);
    }
}
