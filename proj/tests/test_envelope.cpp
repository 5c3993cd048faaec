#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "garding/envelope.hpp"
#include "garding/field.hpp"
#include "garding/reference.hpp"
#include "garding/rng.hpp"

using namespace garding;

TEST_CASE("k-convexity of model Hessians") {
    const GridDomain d = GridDomain::rect(17, 17, 1.0 / 16);

    const GridFunction bowl =
        GridFunction::sample(d, [](double x, double y) { return 0.5 * (x * x + y * y); });
    for (const int k : {1, 2}) {
        const auto mask = k_convexity_mask(bowl, k);
        for (size_t i = 0; i < mask.size(); ++i)
            if (d.is_interior(i)) CHECK(mask[i] == 1);
    }

    const GridFunction saddle =
        GridFunction::sample(d, [](double x, double y) { return x * x - y * y; });
    const auto saddle_k1 = k_convexity_mask(saddle, 1);
    const auto saddle_k2 = k_convexity_mask(saddle, 2);
    for (size_t i = 0; i < d.node_count(); ++i) {
        if (!d.is_interior(i)) continue;
        CHECK(saddle_k1[i] == 1);  // harmonic: on the boundary of the half-space cone
        CHECK(saddle_k2[i] == 0);  // negative determinant
    }

    const GridFunction cap =
        GridFunction::sample(d, [](double x, double y) { return -0.5 * (x * x + y * y); });
    for (const int k : {1, 2}) {
        const auto mask = k_convexity_mask(cap, k);
        for (size_t i = 0; i < d.node_count(); ++i)
            if (d.is_interior(i)) CHECK(mask[i] == 0);
    }
}

TEST_CASE("already concave input is its own envelope") {
    const GridDomain d = disk_domain(1.0, 1.0 / 16);
    const double center = (d.nx() - 1) / 2.0 * d.spacing();
    const GridFunction u = GridFunction::sample(d, [&](double x, double y) {
        const double dx = x - center;
        const double dy = y - center;
        return 1.0 - dx * dx - dy * dy;
    });
    const ContactSetResult result = upper_k_envelope(u, 2, 1e-9, 30000);
    CHECK(result.converged);
    size_t contact_nodes = 0;
    for (size_t i = 0; i < d.node_count(); ++i) {
        if (!d.is_interior(i)) continue;
        CHECK(std::fabs(result.envelope.values[i] - u.values[i]) <= 1e-6);
        contact_nodes += result.contact[i];
    }
    CHECK(contact_nodes == d.interior_count());
}

TEST_CASE("1D spike produces the linear tent") {
    const GridDomain d = GridDomain::line(33, 1.0 / 32);
    std::vector<double> vals(d.node_count(), 0.0);
    const int spike = 12;
    vals[static_cast<size_t>(spike)] = 1.0;
    const GridFunction u(d, vals);

    const ContactSetResult result = upper_k_envelope(u, 1, 1e-10, 60000);
    CHECK(result.converged);

    std::vector<double> xs(d.node_count());
    for (size_t i = 0; i < xs.size(); ++i) xs[i] = static_cast<double>(i) * d.spacing();
    const std::vector<double> oracle = reference::upper_hull_1d(xs, u.values);
    for (size_t i = 0; i < xs.size(); ++i)
        CHECK(std::fabs(result.envelope.values[i] - oracle[i]) <= 1e-6);
    // Contact only at the spike (and the pinned boundary stays at zero).
    CHECK(result.contact[spike] == 1);
    CHECK(result.envelope.values[0] == 0.0);
    CHECK(result.envelope.values[d.node_count() - 1] == 0.0);
}

TEST_CASE("2D envelope agrees with the hull oracle") {
    // Wiggles windowed to vanish at the rectangle edge keep the boundary
    // restriction concave, where the pinned envelope and the free hull of
    // the node cloud coincide.
    const GridDomain d = GridDomain::rect(33, 33, 1.0 / 32);
    for (int rep = 0; rep < 4; ++rep) {
        Rng rng(1000 + rep);
        const double cx = rng.uniform(0.4, 0.6);
        const double cy = rng.uniform(0.4, 0.6);
        const double bowl = rng.uniform(1.0, 2.0);
        const double amp = rng.uniform(0.2, 0.5);
        const double fx = rng.uniform_int(1, 2);
        const double fy = rng.uniform_int(0, 2);
        const double phase = rng.uniform(0.0, 6.28);
        const GridFunction u = GridFunction::sample(d, [&](double x, double y) {
            const double win = 16.0 * x * (1.0 - x) * y * (1.0 - y);
            return -bowl * ((x - cx) * (x - cx) + (y - cy) * (y - cy)) +
                   amp * win * win * std::sin(6.2831853 * (fx * x + fy * y) + phase);
        });
        const double osc = u.osc();
        const ContactSetResult env = upper_k_envelope(u, 2, 1e-9, 40000);
        CHECK(env.converged);
        const GridFunction oracle = reference::concave_envelope_lp(u, 123 + rep);
        double worst = 0.0;
        for (size_t i = 0; i < d.node_count(); ++i)
            if (d.is_interior(i))
                worst = std::max(worst, std::fabs(env.envelope.values[i] - oracle.values[i]));
        CHECK(worst <= 5e-3 * osc);
    }
}

TEST_CASE("envelope invariants") {
    const GridDomain d = GridDomain::rect(25, 25, 1.0 / 24);
    const GridFunction u = random_smooth_function(7, d, false);
    const double osc = std::max(u.osc(), 1e-12);

    for (const int k : {1, 2}) {
        const ContactSetResult env = upper_k_envelope(u, k, 1e-9, 40000);
        CHECK(env.converged);

        // Majorant.
        for (size_t i = 0; i < d.node_count(); ++i)
            CHECK(env.envelope.values[i] >= u.values[i] - 1e-12 * osc);

        // Negated envelope passes the k-convexity test on contact nodes
        // (checked where the whole stencil lies in the contact set, so the
        // obstacle itself carries the curvature).
        GridFunction neg = env.envelope;
        for (auto& v : neg.values) v = -v;
        const auto cone_ok = k_convexity_mask(neg, k, 1e-5);
        for (int iy = 1; iy + 1 < d.ny(); ++iy) {
            for (int ix = 1; ix + 1 < d.nx(); ++ix) {
                const size_t i = d.index(ix, iy);
                if (!d.is_interior(i) || !env.contact[i]) continue;
                bool surrounded = true;
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        const size_t j = d.index(ix + dx, iy + dy);
                        if (d.is_interior(j) && !env.contact[j]) surrounded = false;
                    }
                if (surrounded) CHECK(cone_ok[i] == 1);
            }
        }

        // Idempotence.
        const ContactSetResult env2 = upper_k_envelope(env.envelope, k, 1e-9, 40000);
        for (size_t i = 0; i < d.node_count(); ++i)
            CHECK(std::fabs(env2.envelope.values[i] - env.envelope.values[i]) <= 2e-6 * osc);

        // Monotone in the obstacle.
        GridFunction larger = u;
        for (auto& v : larger.values) v += 0.05 * osc;
        const ContactSetResult env_larger = upper_k_envelope(larger, k, 1e-9, 40000);
        for (size_t i = 0; i < d.node_count(); ++i)
            if (d.is_interior(i))
                CHECK(env.envelope.values[i] <=
                      env_larger.envelope.values[i] + 1e-6 * osc);

        // Translation equivariance.
        GridFunction shifted = u;
        for (auto& v : shifted.values) v += 1.25;
        const ContactSetResult env_shift = upper_k_envelope(shifted, k, 1e-9, 40000);
        for (size_t i = 0; i < d.node_count(); ++i)
            CHECK(std::fabs(env_shift.envelope.values[i] - env.envelope.values[i] - 1.25) <=
                  1e-9 * std::max(1.0, osc));
    }
}

TEST_CASE("envelope flags non-convergence") {
    const GridDomain d = GridDomain::rect(17, 17, 1.0 / 16);
    const GridFunction u = random_smooth_function(3, d, false);
    const ContactSetResult result = upper_k_envelope(u, 2, 1e-12, 3);
    CHECK_FALSE(result.converged);
    CHECK(result.iterations == 3);
}

TEST_CASE("gradient norm check") {
    const GridDomain d = GridDomain::rect(33, 33, 1.0 / 32);

    const GridFunction constant = GridFunction::sample(d, [](double, double) { return 1.0; });
    const GradientCheck flat = gradient_norm_check(constant, 2, 2.0, 0.25);
    CHECK(flat.lhs == doctest::Approx(0.0));
    CHECK(flat.required_c == doctest::Approx(0.0));

    // Linear ramps have unit gradient: the discrete norm is |Omega'|^(1/r).
    const GridFunction ramp = GridFunction::sample(d, [](double x, double) { return x; });
    const GradientCheck linear = gradient_norm_check(ramp, 2, 1.0, 0.25);
    const double cell = d.spacing() * d.spacing();
    CHECK(linear.lhs ==
          doctest::Approx(static_cast<double>(linear.omega_prime_count) * cell).epsilon(1e-12));
    CHECK(linear.rhs_factor == doctest::Approx(d.diam() * 1.0).epsilon(1e-12));

    CHECK_THROWS_AS(gradient_norm_check(ramp, 1, 2.0, 0.25), std::domain_error);   // r >= nk/(n-k)
    CHECK_THROWS_AS(gradient_norm_check(ramp, 2, 2.0, 0.6), std::domain_error);    // kappa range
    CHECK_THROWS_AS(gradient_norm_check(ramp, 2, 2.0, 0.49), std::domain_error);   // empty core
}

TEST_CASE("gradient check is mesh stable") {
    std::vector<double> cs;
    for (const double h : {1.0 / 16, 1.0 / 32, 1.0 / 64}) {
        const int nodes = static_cast<int>(std::lround(1.0 / h)) + 1;
        const GridDomain d = GridDomain::rect(nodes, nodes, h);
        const GridFunction v = GridFunction::sample(d, [](double x, double y) {
            return (x - 0.4) * (x - 0.4) + 0.7 * (y - 0.6) * (y - 0.6);
        });
        cs.push_back(gradient_norm_check(v, 2, 2.0, 0.25).required_c);
    }
    const double lo = *std::min_element(cs.begin(), cs.end());
    const double hi = *std::max_element(cs.begin(), cs.end());
    CHECK((hi - lo) / lo < 0.2);
}
