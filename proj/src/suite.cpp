#include "garding/suite.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <iterator>
#include <sstream>
#include <thread>

#include "garding/abp.hpp"
#include "garding/dual_cone.hpp"
#include "garding/ellipticity.hpp"
#include "garding/envelope.hpp"
#include "garding/field.hpp"
#include "garding/kernels.hpp"
#include "garding/reference.hpp"
#include "garding/rng.hpp"
#include "garding/sym_poly.hpp"

namespace garding::suite {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), pattern, a, b, c);
    return buf;
}

SpectrumVector positive_spectrum(Rng& rng, int n) {
    VecN v(n);
    for (int i = 0; i < n; ++i) v[i] = std::exp(0.8 * rng.normal());
    return SpectrumVector(v);
}

/// Interior point of the dual cone for index k, with enough margin that
/// axis perturbations of 1e-4*|lambda| stay interior.
SpectrumVector interior_dual_sample(Rng& rng, int n, int k) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        const SpectrumVector base = positive_spectrum(rng, n);
        double mean = 0.0;
        for (int i = 0; i < n; ++i) mean += base[i];
        mean /= n;
        for (double s = 1.0; s > 1e-3; s *= 0.5) {
            VecN mixed(n);
            for (int i = 0; i < n; ++i) mixed[i] = (1.0 - s) * mean + s * base[i];
            const SpectrumVector lambda(mixed);
            const double scale = norm2(lambda.raw());
            const DualEvalResult r = rho_star(lambda, k, kValueTol);
            if (r.status != DualStatus::unbounded_below && r.value > 1e-2 * scale &&
                (k == 1 || r.slice_min > 1e-2 * scale)) {
                const double grow = std::exp(rng.uniform(-1.0, 1.0));
                VecN out(n);
                for (int i = 0; i < n; ++i) out[i] = grow * lambda[i];
                return SpectrumVector(out);
            }
        }
    }
    throw std::runtime_error("interior_dual_sample: sampling failed");
}

// ---------------------------------------------------------------------------
// Criterion bodies. Each returns pass/fail plus a one-line detail.
// ---------------------------------------------------------------------------

using Body = bool (*)(uint64_t, std::string&);

bool c1_dual_identity_top_index(uint64_t seed, std::string& detail) {
    Rng rng(seed);
    double worst = 0.0;
    for (int n = 2; n <= 5; ++n) {
        for (int rep = 0; rep < 50; ++rep) {
            const SpectrumVector lambda = positive_spectrum(rng, n);
            const DualEvalResult r = rho_star(lambda, n, kValueTol);
            if (r.status == DualStatus::unbounded_below ||
                r.status == DualStatus::infeasible_input) {
                detail = "solver reported failure on a positive spectrum";
                return false;
            }
            double log_det = 0.0;
            for (int i = 0; i < n; ++i) log_det += std::log(lambda[i]);
            const double expected = std::exp(log_det / n);
            const double dev = std::fabs(r.value - expected) / norm2(lambda.raw());
            worst = std::max(worst, dev);
        }
    }
    detail = fmt("max |rho*_n - det^(1/n)| / |lambda| = %.3g (allowed 1e-6)", worst);
    return worst <= 1e-6;
}

bool c2_dual_identity_bottom_index(uint64_t seed, std::string& detail) {
    Rng rng(seed);
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const int n = rng.uniform_int(2, 5);
        const double c = std::exp(2.0 * rng.normal());
        const SpectrumVector lambda(VecN::constant(n, c));
        const DualEvalResult r = rho_star(lambda, 1, kValueTol);
        if (r.status != DualStatus::optimal) {
            detail = "diagonal ray did not evaluate as optimal";
            return false;
        }
        worst = std::max(worst, std::fabs(r.value - c));
    }
    for (int rep = 0; rep < 100; ++rep) {
        const int n = rng.uniform_int(2, 5);
        VecN v(n);
        for (int i = 0; i < n; ++i) v[i] = rng.normal();
        v[0] += 2.0;  // keep it clearly off-ray
        const SpectrumVector lambda(v);
        const DualEvalResult r = rho_star(lambda, 1, kValueTol);
        if (r.status != DualStatus::unbounded_below || !r.has_certificate) {
            detail = "off-ray input not reported unbounded with a certificate";
            return false;
        }
        const double s1 = sum(r.certificate);
        const double pairing = dot(lambda.raw(), r.certificate);
        if (std::fabs(s1 - n) > 1e-12 * n || !(pairing < 0.0)) {
            detail = fmt("invalid certificate: S_1 - n = %.3g, pairing = %.3g", s1 - n, pairing);
            return false;
        }
    }
    // Negative diagonal ray is also unbounded (the dual ray is one-sided).
    const DualEvalResult neg = rho_star(SpectrumVector(VecN::constant(3, -1.0)), 1, kValueTol);
    if (neg.status != DualStatus::unbounded_below) {
        detail = "negative diagonal ray must be unbounded";
        return false;
    }
    detail = fmt("ray deviation max %.3g (allowed 1e-10), certificates valid", worst);
    return worst <= 1e-10;
}

bool c3_upper_bound_sharpness(uint64_t seed, std::string& detail) {
    Rng rng(seed);
    double worst_slack = -kInf;
    double worst_ray = 0.0;
    for (int n = 2; n <= 5; ++n) {
        for (int k = 1; k <= n; ++k) {
            const int samples = 500;
            for (int rep = 0; rep < samples; ++rep) {
                SpectrumVector lambda = k == 1
                                            ? SpectrumVector(VecN::constant(
                                                  n, std::exp(rng.normal())))
                                            : interior_dual_sample(rng, n, k);
                const double scale = norm2(lambda.raw());
                const DualEvalResult r = rho_star(lambda, k, kValueTol);
                const double ub = rho_star_upper_bound(lambda, k);
                const double slack = (r.value - ub) / scale;
                worst_slack = std::max(worst_slack, slack);
                if (slack > 1e-6) {
                    detail = fmt("bound violated by %.3g at n=%g k=%g", slack, n, k);
                    return false;
                }
            }
            // Equality ray: 1 for the first k components, k beyond.
            VecN ray(n);
            for (int i = 0; i < n; ++i) ray[i] = i < k ? 1.0 : static_cast<double>(k);
            const SpectrumVector lambda(ray);
            const DualEvalResult r = rho_star(lambda, k, kValueTol);
            const double ub = rho_star_upper_bound(lambda, k);
            const double rel = std::fabs(r.value - ub) / ub;
            worst_ray = std::max(worst_ray, rel);
        }
    }
    detail = fmt("max bound slack %.3g, max ray gap %.3g rel (allowed 1e-5)", worst_slack,
                 worst_ray);
    return worst_ray <= 1e-5;
}

bool c4_oracle_equivalence(uint64_t seed, std::string& detail) {
    Rng rng(seed);
    double worst = 0.0;
    for (int n = 2; n <= 3; ++n) {
        for (int k = 2; k <= n; ++k) {
            for (int rep = 0; rep < 50; ++rep) {
                SpectrumVector lambda = interior_dual_sample(rng, n, k);
                const double scale = norm2(lambda.raw());
                VecN unit(n);
                for (int i = 0; i < n; ++i) unit[i] = lambda[i] / scale;
                const SpectrumVector normalized(unit);

                const DualEvalResult r = rho_star(normalized, k, kValueTol);
                const reference::SliceScan scan =
                    reference::brute_force_rho_star(normalized, k, 1e-3);
                if (scan.unbounded || r.status == DualStatus::unbounded_below) {
                    detail = "interior sample classified unbounded";
                    return false;
                }
                worst = std::max(worst, std::fabs(scan.value - r.value));
            }
            // Mixed-sign inputs: both routes must agree on unboundedness.
            for (int rep = 0; rep < 10; ++rep) {
                VecN v(n);
                for (int i = 0; i < n; ++i) v[i] = rng.normal();
                v[0] = -std::fabs(v[0]) - 0.5;
                const SpectrumVector lambda(v);
                const double scale = norm2(lambda.raw());
                VecN unit(n);
                for (int i = 0; i < n; ++i) unit[i] = lambda[i] / scale;
                const SpectrumVector normalized(unit);
                const reference::SliceScan scan =
                    reference::brute_force_rho_star(normalized, k, 1e-3);
                if (scan.slice_min > -5e-3 && scan.slice_min < 5e-3) continue;  // near-boundary
                const DualEvalResult r = rho_star(normalized, k, kValueTol);
                const bool solver_unbounded = r.status == DualStatus::unbounded_below;
                if (solver_unbounded != scan.unbounded) {
                    detail = fmt("unboundedness disagreement at n=%g k=%g (slice min %.3g)",
                                 n, k, scan.slice_min);
                    return false;
                }
            }
        }
    }
    // k = 1 has no compact slice: the analytic characterization stands in.
    for (int rep = 0; rep < 50; ++rep) {
        const int n = rng.uniform_int(2, 3);
        const double c = std::exp(rng.normal());
        const DualEvalResult r = rho_star(SpectrumVector(VecN::constant(n, c)), 1, kValueTol);
        worst = std::max(worst, std::fabs(r.value - c));
    }
    detail = fmt("max |solver - slice scan| = %.3g (allowed 5e-3)", worst);
    return worst <= 5e-3;
}

bool c5_dual_properties(uint64_t seed, std::string& detail) {
    Rng rng(seed);

    // Monotonicity in the cone index.
    for (int rep = 0; rep < 200; ++rep) {
        const int n = rng.uniform_int(2, 5);
        const int k = rng.uniform_int(2, n);
        const int l = rng.uniform_int(1, k);
        const SpectrumVector lambda = interior_dual_sample(rng, n, k);
        const double scale = norm2(lambda.raw());
        const DualEvalResult rk = rho_star(lambda, k, kValueTol);
        const DualEvalResult rl = rho_star(lambda, l, kValueTol);
        const double value_l = rl.status == DualStatus::unbounded_below ? -kInf : rl.value;
        if (!(rk.value >= value_l - 1e-7 * scale)) {
            detail = fmt("monotonicity violated: k-value %.6g below l-value %.6g", rk.value,
                         value_l);
            return false;
        }
        // Nesting: interior for k implies interior for every l >= k.
        for (int above = k; above <= n; ++above) {
            if (dual_cone_membership(lambda, above).membership != Membership::interior) {
                detail = "nesting violated: interior sample left the larger cone";
                return false;
            }
        }
    }

    // Concavity along midpoints.
    for (int rep = 0; rep < 200; ++rep) {
        const int n = rng.uniform_int(2, 5);
        const int k = rng.uniform_int(2, n);
        const SpectrumVector a = interior_dual_sample(rng, n, k);
        const SpectrumVector b = interior_dual_sample(rng, n, k);
        VecN mid(n);
        for (int i = 0; i < n; ++i) mid[i] = 0.5 * (a[i] + b[i]);
        const SpectrumVector m(mid);
        const double scale = std::max(norm2(a.raw()), norm2(b.raw()));
        const double va = rho_star(a, k, kValueTol).value;
        const double vb = rho_star(b, k, kValueTol).value;
        const double vm = rho_star(m, k, kValueTol).value;
        if (!(vm >= 0.5 * (va + vb) - 1e-6 * scale)) {
            detail = fmt("concavity violated by %.3g", 0.5 * (va + vb) - vm);
            return false;
        }
    }

    // Positive homogeneity.
    for (int rep = 0; rep < 200; ++rep) {
        const int n = rng.uniform_int(2, 5);
        const int k = rng.uniform_int(2, n);
        const SpectrumVector lambda = interior_dual_sample(rng, n, k);
        const double base = rho_star(lambda, k, kValueTol).value;
        for (const double t : {0.1, 3.0, 10.0}) {
            VecN scaled(n);
            for (int i = 0; i < n; ++i) scaled[i] = t * lambda[i];
            const double vt = rho_star(SpectrumVector(scaled), k, kValueTol).value;
            if (std::fabs(vt - t * base) > 1e-7 * t * norm2(lambda.raw())) {
                detail = fmt("homogeneity violated at t=%g: %.3g vs %.3g", t, vt, t * base);
                return false;
            }
        }
    }

    // Permutation invariance and the openness probe.
    int openness_checks = 0;
    for (int rep = 0; rep < 200; ++rep) {
        const int n = rng.uniform_int(2, 5);
        const int k = rng.uniform_int(2, n);
        const SpectrumVector lambda = interior_dual_sample(rng, n, k);
        VecN shuffled = lambda.raw();
        for (int i = n - 1; i > 0; --i) std::swap(shuffled[i], shuffled[rng.uniform_int(0, i)]);
        const double v1 = rho_star(lambda, k, kValueTol).value;
        const double v2 = rho_star(SpectrumVector(shuffled), k, kValueTol).value;
        if (v1 != v2) {
            detail = "permutation invariance violated";
            return false;
        }
        if (rep < 40) {
            const double eps = 1e-4 * norm2(lambda.raw());
            for (int i = 0; i < n; ++i) {
                for (const double sgn : {1.0, -1.0}) {
                    VecN pert = lambda.raw();
                    pert[i] += sgn * eps;
                    if (dual_cone_membership(SpectrumVector(pert), k).membership !=
                        Membership::interior) {
                        detail = "openness probe failed";
                        return false;
                    }
                    ++openness_checks;
                }
            }
        }
    }
    detail = fmt("monotonicity/concavity/homogeneity/permutation passed; %g openness probes",
                 openness_checks);
    return true;
}

bool c6_pucci_pipeline(uint64_t seed, std::string& detail) {
    Rng rng(seed);
    int side_condition_cases = 0;
    double worst_gap = 0.0;
    for (int rep = 0; rep < 200; ++rep) {
        const int n = rng.uniform_int(3, 5);
        const int k = rng.uniform_int(2, n);
        const double threshold =
            k == n ? 4.0 * n : static_cast<double>(n) * (n - 1) / (n - k);
        // Half the draws sit close under the chi > 0 threshold so the
        // side condition chi*a0 <= (k-1)/(n-1) gets exercised.
        const double closeness = (rep % 2 == 0) ? rng.uniform(0.9, 0.995) : rng.uniform(0.3, 0.85);
        const double a0_target = n + (threshold - n) * closeness;

        const double lmin = std::exp(0.5 * rng.normal());
        VecN eig(n);
        eig[0] = lmin;
        double trace = lmin;
        for (int i = 1; i < n; ++i) {
            eig[i] = lmin * (1.0 + (a0_target - n) / (n - 1) * rng.uniform(0.9, 1.0));
            trace += eig[i];
        }
        const SymmetricMatrix a = reference::random_conjugation(eig, rng);
        const SpectralDecomposition dec = eigen_decompose(a);
        const double a0 = dec.eigenvalues.min() > 0.0
                              ? a.trace() / dec.eigenvalues.min()
                              : kInf;
        const double margin = chi(n, k, a0);
        if (!(margin > 0.0)) continue;  // conjugation rounding pushed it over

        if (dual_cone_membership(dec.eigenvalues, k).membership != Membership::interior) {
            detail = fmt("chi=%.3g > 0 but membership not interior (n=%g k=%g)", margin, n, k);
            return false;
        }
        const RhoStarLowerBound lb = rho_star_lower_bound(dec.eigenvalues, k, a0);
        if (lb.valid) {
            ++side_condition_cases;
            const double value = rho_star(dec.eigenvalues, k, kValueTol).value;
            const double gap = lb.bound - value;  // must be <= tolerance
            worst_gap = std::max(worst_gap, gap / norm2(dec.eigenvalues.raw()));
            if (gap > 1e-6 * norm2(dec.eigenvalues.raw())) {
                detail = fmt("lower bound violated by %.3g (n=%g k=%g)", gap, n, k);
                return false;
            }
        }
    }
    detail = fmt("200 chi>0 fields interior; %g side-condition cases, worst bound slack %.3g",
                 side_condition_cases, worst_gap);
    return side_condition_cases > 0;
}

bool c7_gronwall(uint64_t seed, std::string& detail) {
    (void)seed;
    for (int ai = 1; ai <= 20; ++ai) {
        const double alpha = 0.1 * ai;
        for (int n = 1; n <= 20; ++n) {
            const GronwallCheck chk = gronwall_recurrence_check(alpha, 1.0, n);
            if (!chk.holds) {
                detail = fmt("recurrence bound violated at alpha=%g N=%g", alpha, n);
                return false;
            }
            const double rel =
                std::fabs(chk.sequence_sum - chk.closed_form_sum) /
                std::max(1e-300, std::fabs(chk.closed_form_sum));
            if (rel > 1e-12) {
                detail = fmt("sum identity off by %.3g rel at alpha=%g N=%g", rel, alpha, n);
                return false;
            }
        }
    }
    const double finite = gronwall_factor(1.0, 1.0, 10.0);
    if (std::fabs(finite - 1.86797) > 1e-5) {
        detail = fmt("factor(1,1,10) = %.7g, expected 1.86797 +- 1e-5", finite);
        return false;
    }
    const double limit = gronwall_factor(1.0, 1.0, kInf);
    const double at_million = gronwall_factor(1.0, 1.0, 1e6);
    const double rel = std::fabs(at_million - limit) / limit;
    // Decreasing in N toward the limit.
    double prev = kInf;
    for (const double n : {2.0, 5.0, 10.0, 100.0, 1e4, 1e6}) {
        const double v = gronwall_factor(1.0, 1.0, n);
        if (v > prev + 1e-12) {
            detail = "factor not decreasing in N";
            return false;
        }
        prev = v;
    }
    detail = fmt("factor(1,1,10)=%.6f; |f(1e6)-f(inf)|/f(inf)=%.3g (allowed 1e-6)", finite, rel);
    return rel <= 1e-6 && std::fabs(limit - 1.718281828459045) < 1e-12;
}

GridFunction hull_friendly_function(uint64_t seed, const GridDomain& d) {
    // Random smooth modes under an interior window, riding a concave bowl.
    // The window kills the wiggles near the rectangle edge, which keeps the
    // boundary restriction concave; there the free hull of the node cloud
    // and the boundary-pinned envelope describe the same object.
    Rng rng(seed);
    struct Mode {
        double amp, fx, fy, phase;
    };
    std::vector<Mode> modes;
    for (int i = 0; i < 3; ++i)
        modes.push_back({0.5 * rng.uniform(0.3, 1.0), static_cast<double>(rng.uniform_int(1, 2)),
                         static_cast<double>(rng.uniform_int(0, 2)), rng.uniform(0.0, 6.2831853)});
    const double cx = rng.uniform(0.4, 0.6);
    const double cy = rng.uniform(0.4, 0.6);
    const double bowl = rng.uniform(1.0, 2.0);
    const double lx = (d.nx() - 1) * d.spacing();
    const double ly = (d.ny() - 1) * d.spacing();
    return GridFunction::sample(d, [&](double x, double y) {
        const double xn = x / lx;
        const double yn = y / ly;
        const double win = 16.0 * xn * (1.0 - xn) * yn * (1.0 - yn);
        double v = -bowl * ((xn - cx) * (xn - cx) + (yn - cy) * (yn - cy));
        for (const auto& m : modes)
            v += m.amp * win * win * std::sin(6.2831853 * (m.fx * xn + m.fy * yn) + m.phase);
        return v;
    });
}

bool c8_envelope_hull(uint64_t seed, std::string& detail) {
    const GridDomain d = GridDomain::rect(65, 65, 1.0 / 64.0);
    double worst = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
        const GridFunction u = hull_friendly_function(seed + static_cast<uint64_t>(rep), d);
        const double osc = u.osc();
        const ContactSetResult env = upper_k_envelope(u, 2, 1e-9, 30000);
        if (!env.converged) {
            detail = fmt("envelope sweep did not converge on sample %g", rep);
            return false;
        }
        // Majorant, exact by construction of the sweep.
        for (size_t i = 0; i < u.values.size(); ++i) {
            if (env.envelope.values[i] < u.values[i] - 1e-12 * std::max(1.0, osc)) {
                detail = "majorant property violated";
                return false;
            }
        }
        const GridFunction oracle =
            reference::concave_envelope_lp(u, seed + static_cast<uint64_t>(rep));
        double diff = 0.0;
        for (size_t i = 0; i < u.values.size(); ++i)
            if (d.is_interior(i))
                diff = std::max(diff, std::fabs(env.envelope.values[i] - oracle.values[i]));
        worst = std::max(worst, diff / osc);
        if (diff > 5e-3 * osc) {
            detail = fmt("hull disagreement %.3g * osc on sample %g (allowed 5e-3)", diff / osc,
                         rep);
            return false;
        }
        // Idempotence within tolerance.
        const ContactSetResult env2 = upper_k_envelope(env.envelope, 2, 1e-9, 30000);
        double drift = 0.0;
        for (size_t i = 0; i < u.values.size(); ++i)
            drift = std::max(drift, std::fabs(env2.envelope.values[i] - env.envelope.values[i]));
        if (drift > 1e-6 * osc) {
            detail = fmt("idempotence drift %.3g * osc", drift / osc);
            return false;
        }
    }
    detail = fmt("max hull deviation %.3g * osc over 20 samples (allowed 5e-3)", worst);
    return true;
}

ManufacturedProblem disk_paraboloid_problem(double h) {
    const GridDomain d = disk_domain(1.0, h);
    const double center = (d.nx() - 1) / 2.0 * h;
    GridFunction u = GridFunction::sample(d, [&](double x, double y) {
        const double dx = x - center;
        const double dy = y - center;
        return 1.0 - dx * dx - dy * dy;
    });
    SymmetricMatrixField field = SymmetricMatrixField::constant(d, SymmetricMatrix::identity(2));
    return make_manufactured_problem(std::move(field), std::move(u));
}

// Caps calibrated on the seeded battery (observed max plus a 2x margin);
// a regression beyond them means the estimate machinery changed.
constexpr double kRequiredCapK2 = 0.12;
constexpr double kRequiredCapK1 = 0.15;
constexpr double kDriftC0 = 1.0;
constexpr double kDriftCap = 0.35;

bool c9_abp_reports(uint64_t seed, std::string& detail) {
    // Mesh study on the unit-disk paraboloid.
    std::vector<double> cs;
    for (const double h : {1.0 / 16, 1.0 / 32, 1.0 / 64}) {
        const ManufacturedProblem problem = disk_paraboloid_problem(h);
        ReportParams params;
        params.q = 2.0;
        params.p = 4.0;
        const EstimateReport rep = make_estimate_report(problem, TheoremId::eq_1_8, 2, params);
        if (std::fabs(rep.lhs - 1.0) > 2.0 * h) {
            detail = fmt("paraboloid lhs %.4f outside 1 +- 2h at h=%.4f", rep.lhs, h);
            return false;
        }
        cs.push_back(rep.required_c);
    }
    const double cmin = *std::min_element(cs.begin(), cs.end());
    const double cmax = *std::max_element(cs.begin(), cs.end());
    if ((cmax - cmin) / cmin > 0.20) {
        detail = fmt("paraboloid required_C varies %.1f%% across refinements",
                     100.0 * (cmax - cmin) / cmin);
        return false;
    }

    // Seeded drift-free batteries, one bound per configuration.
    const GridDomain d = disk_domain(1.0, 1.0 / 16);
    double max_c_k2 = 0.0;
    double max_c_k1 = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        const uint64_t s = seed + 1000 + static_cast<uint64_t>(rep);
        {
            SymmetricMatrixField field =
                sample_operator_field(s, d, 2, 2, FieldMode::chi_positive);
            GridFunction u = random_smooth_function(s ^ 0xabcdULL, d, true);
            const ManufacturedProblem problem =
                make_manufactured_problem(std::move(field), std::move(u));
            ReportParams params;
            const EstimateReport r = make_estimate_report(problem, TheoremId::eq_1_8, 2, params);
            max_c_k2 = std::max(max_c_k2, r.required_c);
        }
        {
            SymmetricMatrixField field =
                sample_operator_field(s ^ 0x77ULL, d, 2, 1, FieldMode::dual_interior);
            GridFunction u = random_smooth_function(s ^ 0x1234ULL, d, true);
            const ManufacturedProblem problem =
                make_manufactured_problem(std::move(field), std::move(u));
            ReportParams params;
            const EstimateReport r = make_estimate_report(problem, TheoremId::eq_1_8, 1, params);
            max_c_k1 = std::max(max_c_k1, r.required_c);
        }
    }
    if (max_c_k2 > kRequiredCapK2 || max_c_k1 > kRequiredCapK1) {
        detail = fmt("required_C exceeded its configuration cap: k2 %.3g, k1 %.3g", max_c_k2,
                     max_c_k1);
        return false;
    }

    // Drift sweep under the exponential with one calibrated constant.
    const double h = 1.0 / 16;
    const GridDomain dd = disk_domain(1.0, h);
    const double center = (dd.nx() - 1) / 2.0 * h;
    double max_drift_c = 0.0;
    for (const double t : {0.0, 0.5, 1.0, 2.0, 4.0}) {
        SymmetricMatrixField field =
            SymmetricMatrixField::constant(dd, SymmetricMatrix::identity(2));
        if (t > 0.0) {
            field.enable_drift();
            for (int iy = 0; iy < dd.ny(); ++iy)
                for (int ix = 0; ix < dd.nx(); ++ix) {
                    const size_t node = dd.index(ix, iy);
                    field.b[0][node] = -t * (ix * h - center);
                    field.b[1][node] = -t * (iy * h - center);
                }
        }
        GridFunction u = GridFunction::sample(dd, [&](double x, double y) {
            const double dx = x - center;
            const double dy = y - center;
            return 1.0 - dx * dx - dy * dy;
        });
        const ManufacturedProblem problem =
            make_manufactured_problem(std::move(field), std::move(u));
        ReportParams params;
        params.c0 = kDriftC0;
        const EstimateReport r = make_estimate_report(problem, TheoremId::eq_2_10, 2, params);
        max_drift_c = std::max(max_drift_c, r.required_c);
    }
    if (max_drift_c > kDriftCap) {
        detail = fmt("drift sweep required_C %.3g exceeds calibrated cap %.3g", max_drift_c,
                     kDriftCap);
        return false;
    }

    detail = fmt("mesh variation %.1f%%; caps: k2 %.3g, k1 %.3g", 100.0 * (cmax - cmin) / cmin,
                 max_c_k2, max_c_k1) +
             fmt(", drift max %.3g", max_drift_c);
    return true;
}

bool c10_gradient_estimate(uint64_t seed, std::string& detail) {
    Rng rng(seed);
    double worst_variation = 0.0;
    for (int fn = 0; fn < 10; ++fn) {
        const bool convex = fn < 5;
        const int k = convex ? 2 : 1;
        const double r = convex ? 2.0 : 1.5;

        const double ax = rng.uniform(0.2, 0.8);
        const double ay = rng.uniform(0.2, 0.8);
        const double amp = rng.uniform(0.5, 2.0);
        const double wx = rng.uniform(-1.5, 1.5);
        const double wy = rng.uniform(-1.5, 1.5);
        const double expamp = rng.uniform(0.1, 0.5);
        const double harmamp = convex ? 0.0 : rng.uniform(0.2, 1.0);

        std::vector<double> cvals;
        for (const double h : {1.0 / 16, 1.0 / 32, 1.0 / 64}) {
            const int nodes = static_cast<int>(std::lround(1.0 / h)) + 1;
            const GridDomain d = GridDomain::rect(nodes, nodes, h);
            const GridFunction v = GridFunction::sample(d, [&](double x, double y) {
                double value = amp * ((x - ax) * (x - ax) + (y - ay) * (y - ay)) +
                               expamp * std::exp(wx * x + wy * y);
                if (!convex) value += harmamp * (x * x - y * y);
                return value;
            });
            const std::vector<uint8_t> mask = k_convexity_mask(v, k);
            for (size_t i = 0; i < mask.size(); ++i)
                if (d.is_interior(i) && !mask[i]) {
                    detail = fmt("sampled function not %g-convex at h=%.4f", k, h);
                    return false;
                }
            const GradientCheck chk = gradient_norm_check(v, k, r, 0.25);
            cvals.push_back(chk.required_c);
        }
        const double lo = *std::min_element(cvals.begin(), cvals.end());
        const double hi = *std::max_element(cvals.begin(), cvals.end());
        const double variation = (hi - lo) / lo;
        worst_variation = std::max(worst_variation, variation);
        if (variation > 0.20) {
            detail = fmt("required_C varies %.1f%% across refinements (fn %g)", 100.0 * variation,
                         fn);
            return false;
        }
    }
    detail = fmt("max refinement variation %.1f%% over 10 functions (allowed 20%%)",
                 100.0 * worst_variation);
    return true;
}

bool c11_determinism(uint64_t seed, std::string& detail) {
    const std::string first = report_battery_json(seed).dump(2);
    const std::string second = report_battery_json(seed).dump(2);
    if (first != second) {
        detail = "repeated battery runs differ byte-wise";
        return false;
    }
    detail = fmt("battery artifact stable across reruns (%g bytes)",
                 static_cast<double>(first.size()));
    return true;
}

struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    Body body;
};

constexpr Criterion kCriteria[] = {
    {1, "dual identity at the top index", 30.0, c1_dual_identity_top_index},
    {2, "dual identity at index one", 5.0, c2_dual_identity_bottom_index},
    {3, "sharp upper bound and equality ray", 120.0, c3_upper_bound_sharpness},
    {4, "solver vs slice-scan oracle", 300.0, c4_oracle_equivalence},
    {5, "dual function properties", 120.0, c5_dual_properties},
    {6, "chi pipeline and explicit lower bound", 120.0, c6_pucci_pipeline},
    {7, "discrete Gronwall algebra", 10.0, c7_gronwall},
    {8, "envelope vs hull oracle", 300.0, c8_envelope_hull},
    {9, "estimate reports", 600.0, c9_abp_reports},
    {10, "interior gradient estimate", 180.0, c10_gradient_estimate},
    {11, "byte-identical reports", 60.0, c11_determinism},
};

}  // namespace

std::vector<CriterionResult> run_acceptance(uint64_t seed, int threads) {
    const int count = static_cast<int>(std::size(kCriteria));
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min(threads, count));

    std::vector<CriterionResult> results(static_cast<size_t>(count));
    std::atomic<int> next{0};
    auto worker = [&]() {
        while (true) {
            const int idx = next.fetch_add(1);
            if (idx >= count) return;
            const Criterion& c = kCriteria[idx];
            CriterionResult r;
            r.id = c.id;
            r.name = c.name;
            r.budget_seconds = c.budget_seconds;
            const auto start = std::chrono::steady_clock::now();
            try {
                r.passed = c.body(seed + static_cast<uint64_t>(c.id) * 0x100ULL, r.detail);
            } catch (const std::exception& e) {
                r.passed = false;
                r.detail = std::string("exception: ") + e.what();
            }
            r.seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            if (r.passed && r.seconds > r.budget_seconds) {
                r.passed = false;
                r.detail += fmt(" [runtime %.1fs over budget %.0fs]", r.seconds, r.budget_seconds);
            }
            results[static_cast<size_t>(idx)] = std::move(r);
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return results;
}

json summary_json(const std::vector<CriterionResult>& results, uint64_t seed,
                  bool with_timestamp) {
    json j;
    j["seed"] = seed;
    j["kernel_backend"] = kernels::backend_name(kernels::active_backend());
    if (with_timestamp) j["timestamp"] = iso_timestamp_utc();
    json list = json::array();
    bool all = true;
    for (const auto& r : results) {
        json e;
        e["id"] = r.id;
        e["name"] = r.name;
        e["passed"] = r.passed;
        e["detail"] = r.detail;
        e["seconds"] = r.seconds;
        e["budget_seconds"] = r.budget_seconds;
        list.push_back(std::move(e));
        all = all && r.passed;
    }
    j["criteria"] = std::move(list);
    j["all_passed"] = all;
    return j;
}

json report_battery_json(uint64_t seed) {
    json j;
    j["seed"] = seed;
    j["kernel_backend"] = kernels::backend_name(kernels::active_backend());

    // Dual-function table.
    Rng rng(seed);
    json duals = json::array();
    for (int rep = 0; rep < 12; ++rep) {
        const int n = rng.uniform_int(2, 5);
        const int k = rng.uniform_int(1, n);
        VecN v(n);
        for (int i = 0; i < n; ++i) v[i] = std::exp(0.6 * rng.normal());
        const SpectrumVector lambda(v);
        json entry;
        entry["n"] = n;
        entry["k"] = k;
        entry["lambda"] = std::vector<double>(v.v.begin(), v.v.begin() + n);
        entry["result"] = to_json(rho_star(lambda, k, kValueTol));
        duals.push_back(std::move(entry));
    }
    j["rho_star"] = std::move(duals);

    // Estimate reports: paraboloid mesh study, a seeded mini battery, and
    // the drift sweep.
    std::vector<EstimateReport> reports;
    for (const double h : {1.0 / 16, 1.0 / 32}) {
        const ManufacturedProblem problem = disk_paraboloid_problem(h);
        ReportParams params;
        reports.push_back(make_estimate_report(problem, TheoremId::eq_1_8, 2, params));
    }
    const GridDomain d = disk_domain(1.0, 1.0 / 16);
    for (int rep = 0; rep < 10; ++rep) {
        const uint64_t s = seed + 500 + static_cast<uint64_t>(rep);
        SymmetricMatrixField field = sample_operator_field(s, d, 2, 2, FieldMode::chi_positive);
        GridFunction u = random_smooth_function(s ^ 0x55aaULL, d, true);
        const ManufacturedProblem problem =
            make_manufactured_problem(std::move(field), std::move(u));
        ReportParams params;
        reports.push_back(make_estimate_report(problem, TheoremId::eq_1_8, 2, params));
        reports.push_back(make_estimate_report(problem, TheoremId::eq_1_9, 2, params));
        reports.push_back(make_estimate_report(problem, TheoremId::eq_2_12, 2, params));
    }
    {
        const double h = 1.0 / 16;
        const GridDomain dd = disk_domain(1.0, h);
        const double center = (dd.nx() - 1) / 2.0 * h;
        for (const double t : {0.0, 1.0, 2.0}) {
            SymmetricMatrixField field =
                SymmetricMatrixField::constant(dd, SymmetricMatrix::identity(2));
            if (t > 0.0) {
                field.enable_drift();
                for (int iy = 0; iy < dd.ny(); ++iy)
                    for (int ix = 0; ix < dd.nx(); ++ix) {
                        const size_t node = dd.index(ix, iy);
                        field.b[0][node] = -t * (ix * h - center);
                        field.b[1][node] = -t * (iy * h - center);
                    }
            }
            GridFunction u = GridFunction::sample(dd, [&](double x, double y) {
                const double dx = x - center;
                const double dy = y - center;
                return 1.0 - dx * dx - dy * dy;
            });
            const ManufacturedProblem problem =
                make_manufactured_problem(std::move(field), std::move(u));
            ReportParams params;
            params.c0 = kDriftC0;
            reports.push_back(make_estimate_report(problem, TheoremId::eq_2_10, 2, params));
        }
    }
    json rj = json::array();
    for (const auto& r : reports) rj.push_back(to_json(r));
    j["reports"] = std::move(rj);
    j["reports_csv"] = reports_to_csv(reports);

    // Gronwall amplification table.
    json gron = json::array();
    for (const double theta : {0.5, 1.0, 2.0}) {
        for (const double n : {10.0, 100.0, kInf}) {
            json e;
            e["theta"] = theta;
            e["q"] = 1.0;
            if (std::isinf(n))
                e["N"] = "inf";
            else
                e["N"] = n;
            e["factor"] = gronwall_factor(theta, 1.0, n);
            gron.push_back(std::move(e));
        }
    }
    j["gronwall"] = std::move(gron);
    return j;
}

std::string iso_timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[40];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace garding::suite
