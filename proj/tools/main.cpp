// garding: Garding k-cone calculus and maximum-principle verification CLI.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>

#include "garding/abp.hpp"
#include "garding/dual_cone.hpp"
#include "garding/ellipticity.hpp"
#include "garding/envelope.hpp"
#include "garding/json_io.hpp"
#include "garding/suite.hpp"
#include "garding/sym_poly.hpp"

namespace {

using garding::json;

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 2;
constexpr int kExitHypothesis = 3;
constexpr int kExitNoConvergence = 4;

struct GlobalConfig {
    double tol = garding::kValueTol;
    uint64_t seed = 0;
    bool seed_set = false;
    std::string config_path;
    std::string output_path;
    std::string format = "json";
    bool strict = false;
};

uint64_t effective_seed(const GlobalConfig& g) {
    if (g.seed_set) return g.seed;
    if (const char* env = std::getenv("GARDING_SEED")) return std::strtoull(env, nullptr, 10);
    return 20240808ULL;
}

void emit(const GlobalConfig& g, const json& j, const std::string& csv = "") {
    const std::string text = (g.format == "csv" && !csv.empty()) ? csv : j.dump(2) + "\n";
    if (g.output_path.empty())
        std::cout << text;
    else
        garding::save_text_file(g.output_path, text);
}

int fail(int code, const std::string& kind, const std::string& message,
         const json& extra = json::object()) {
    json err;
    err["error"]["kind"] = kind;
    err["error"]["message"] = message;
    for (auto it = extra.begin(); it != extra.end(); ++it) err["error"][it.key()] = it.value();
    std::cerr << err.dump(2) << "\n";
    return code;
}

std::vector<double> parse_lambda(const std::string& csv) {
    std::vector<double> values;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        values.push_back(std::stod(item));
    }
    if (values.size() < 2) throw std::invalid_argument("need at least two eigenvalues");
    return values;
}

json hypothesis_failures(const garding::EstimateReport& rep) {
    json names = json::array();
    for (const auto& f : rep.flags)
        if (!f.ok) names.push_back(f.name);
    return names;
}

// Flags override values read from --config JSON; keys resolve against the
// active subcommand first, then the global options.
void merge_config_file(GlobalConfig& g, CLI::App& app, CLI::App* sub) {
    if (g.config_path.empty()) return;
    const json cfg = garding::load_json_file(g.config_path);
    for (const auto& [key, value] : cfg.items()) {
        CLI::Option* opt = sub != nullptr ? sub->get_option_no_throw("--" + key) : nullptr;
        if (opt == nullptr) opt = app.get_option_no_throw("--" + key);
        if (opt == nullptr || opt->count() > 0) continue;  // flag wins
        if (value.is_number_integer()) {
            opt->add_result(std::to_string(value.get<long long>()));
        } else if (value.is_number()) {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", value.get<double>());
            opt->add_result(buf);
        } else if (value.is_string())
            opt->add_result(value.get<std::string>());
        else if (value.is_boolean() && value.get<bool>())
            opt->add_result("1");
        opt->run_callback();
    }
}

int require_present(const std::initializer_list<std::pair<const char*, bool>>& fields) {
    for (const auto& [name, present] : fields)
        if (!present)
            return fail(kExitBadInput, "argument_error",
                        std::string("missing required parameter: ") + name);
    return -1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Garding k-cone calculus and maximum-principle verification"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand name

    GlobalConfig g;
    app.add_option("--tol", g.tol, "value tolerance (default 1e-8)");
    auto* seed_opt = app.add_option("--seed", g.seed, "seed (fallback: GARDING_SEED env)");
    app.add_option("--config", g.config_path, "JSON config file; flags override");
    app.add_option("--output", g.output_path, "output path (default stdout)");
    app.add_option("--format", g.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_flag("--strict", g.strict, "hypothesis violations become exit code 3");

    std::string lambda_csv;
    int k = 0;
    bool k_set = false;

    auto* rho = app.add_subcommand("rho-star", "evaluate the dual function rho*_k");
    rho->add_option("--lambda", lambda_csv, "eigenvalues, comma separated");
    rho->add_option("--k", k, "cone index");

    auto* membership = app.add_subcommand("membership", "cone labels across k = 1..n");
    membership->add_option("--lambda", lambda_csv, "eigenvalues, comma separated");
    auto* mem_k = membership->add_option("--k", k, "single index instead of the full range");

    auto* sharp = app.add_subcommand("sharpness", "sweep the equality ray of the sharp bound");
    int sharp_n = 3;
    int sharp_samples = 9;
    sharp->add_option("--n", sharp_n, "dimension");
    sharp->add_option("--k", k, "cone index");
    sharp->add_option("--samples", sharp_samples, "ray sweep sample count");

    auto* chi_cmd = app.add_subcommand("chi", "tabulate the ellipticity margin and lower bound");
    int chi_n = 3;
    double a0_lo = 0.0, a0_hi = 0.0;
    int a0_steps = 10;
    chi_cmd->add_option("--n", chi_n, "dimension");
    chi_cmd->add_option("--k", k, "cone index");
    chi_cmd->add_option("--a0-min", a0_lo, "a0 range start");
    chi_cmd->add_option("--a0-max", a0_hi, "a0 range end");
    chi_cmd->add_option("--steps", a0_steps, "table rows");

    auto* env_cmd = app.add_subcommand("envelope", "upper k-envelope of a grid function");
    std::string input_path;
    double env_tol = 1e-8;
    int env_max_iter = 40000;
    env_cmd->add_option("--input", input_path, "GridFunction JSON");
    env_cmd->add_option("--k", k, "cone index");
    env_cmd->add_option("--envelope-tol", env_tol, "sweep termination tolerance");
    env_cmd->add_option("--max-iter", env_max_iter, "sweep cap");

    auto* abp_cmd = app.add_subcommand("abp", "seeded estimate-report battery");
    int abp_count = 10;
    double abp_h = 1.0 / 16;
    double abp_p = 4.0, abp_q = 2.0, abp_c0 = 1.0;
    std::string abp_theorem = "T1.1/Eq1.8";
    bool abp_chi_sub = false;
    std::string abp_input;
    abp_cmd->add_option("--k", k, "cone index");
    abp_cmd->add_option("--count", abp_count, "number of seeded problems");
    abp_cmd->add_option("--spacing", abp_h, "grid spacing");
    abp_cmd->add_option("--p", abp_p, "drift norm exponent");
    abp_cmd->add_option("--q", abp_q, "source norm exponent");
    abp_cmd->add_option("--c0", abp_c0, "calibrated drift constant");
    abp_cmd->add_option("--theorem", abp_theorem, "T1.1/Eq1.8 | T1.2/Eq1.9 | Eq2.10 | Eq2.12");
    abp_cmd->add_flag("--chi-substitution", abp_chi_sub, "weight by lambda_min*chi*a0");
    abp_cmd->add_option("--input", abp_input, "problem bundle JSON instead of seeded fields");

    auto* gron = app.add_subcommand("gronwall", "drift amplification factors");
    double g_theta = 1.0, g_q = 1.0;
    std::string g_n = "inf";
    gron->add_option("--theta", g_theta, "theta >= 0");
    gron->add_option("--q", g_q, "norm exponent");
    gron->add_option("--N", g_n, "iteration count or 'inf'");

    auto* suite_cmd = app.add_subcommand("suite", "full acceptance battery");
    int suite_threads = 0;
    suite_cmd->add_option("--threads", suite_threads, "worker threads (0 = auto)");

    try {
        app.parse(argc, argv);
        merge_config_file(g, app,
                          app.get_subcommands().empty() ? nullptr : app.get_subcommands().front());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        return fail(kExitBadInput, "argument_error", e.what());
    } catch (const std::exception& e) {
        return fail(kExitBadInput, "config_error", e.what());
    }
    k_set = mem_k->count() > 0;
    g.seed_set = seed_opt->count() > 0;

    try {
        if (rho->parsed()) {
            if (const int rc = require_present({{"lambda", rho->count("--lambda") > 0},
                                                {"k", rho->count("--k") > 0}});
                rc >= 0)
                return rc;
            const auto values = parse_lambda(lambda_csv);
            const garding::SpectrumVector lambda = garding::SpectrumVector::from(values);
            const garding::DualEvalResult r = garding::rho_star(lambda, k, g.tol);
            json out = garding::to_json(r);
            out["n"] = lambda.dim();
            out["k"] = k;
            emit(g, out);
            if (r.status != garding::DualStatus::unbounded_below && r.duality_gap > 10.0 * g.tol)
                return fail(kExitNoConvergence, "no_convergence",
                            "duality gap above tolerance",
                            {{"duality_gap", r.duality_gap}, {"tol", g.tol}});
            return kExitOk;
        }

        if (membership->parsed()) {
            if (const int rc =
                    require_present({{"lambda", membership->count("--lambda") > 0}});
                rc >= 0)
                return rc;
            const auto values = parse_lambda(lambda_csv);
            const garding::SpectrumVector lambda = garding::SpectrumVector::from(values);
            const int n = lambda.dim();
            json rows = json::array();
            const int k_lo = k_set ? k : 1;
            const int k_hi = k_set ? k : n;
            for (int idx = k_lo; idx <= k_hi; ++idx) {
                json row;
                row["k"] = idx;
                row["gamma"] = garding::to_json(garding::gamma_k_membership(lambda, idx));
                row["gamma_dual"] = garding::to_json(garding::dual_cone_membership(lambda, idx));
                rows.push_back(std::move(row));
            }
            json out;
            out["lambda"] = values;
            out["labels"] = std::move(rows);
            emit(g, out);
            return kExitOk;
        }

        if (sharp->parsed()) {
            if (const int rc = require_present({{"n", sharp->count("--n") > 0},
                                                {"k", sharp->count("--k") > 0}});
                rc >= 0)
                return rc;
            if (k < 1 || k > sharp_n)
                return fail(kExitBadInput, "argument_error", "k out of range for n");
            json rows = json::array();
            for (int s = 0; s < sharp_samples; ++s) {
                const double t = std::pow(10.0, -1.0 + 2.0 * s / std::max(1, sharp_samples - 1));
                garding::VecN v(sharp_n);
                for (int i = 0; i < sharp_n; ++i)
                    v[i] = t * (i < k ? 1.0 : static_cast<double>(k));
                const garding::SpectrumVector lambda(v);
                const garding::DualEvalResult r = garding::rho_star(lambda, k, g.tol);
                const double ub = garding::rho_star_upper_bound(lambda, k);
                json row;
                row["t"] = t;
                row["rho_star"] = r.value;
                row["upper_bound"] = ub;
                row["gap"] = ub - r.value;
                row["tol"] = g.tol;
                rows.push_back(std::move(row));
            }
            json out;
            out["n"] = sharp_n;
            out["k"] = k;
            out["ray"] = rows;
            emit(g, out);
            return kExitOk;
        }

        if (chi_cmd->parsed()) {
            if (const int rc = require_present({{"n", chi_cmd->count("--n") > 0},
                                                {"k", chi_cmd->count("--k") > 0},
                                                {"a0-min", chi_cmd->count("--a0-min") > 0},
                                                {"a0-max", chi_cmd->count("--a0-max") > 0}});
                rc >= 0)
                return rc;
            if (!(a0_lo > 0.0) || !(a0_hi >= a0_lo) || a0_steps < 1)
                return fail(kExitBadInput, "argument_error", "bad a0 range");
            json rows = json::array();
            for (int s = 0; s < a0_steps; ++s) {
                const double a0 =
                    a0_lo + (a0_hi - a0_lo) * s / std::max(1, a0_steps - 1);
                const double margin = garding::chi(chi_n, k, a0);
                json row;
                row["a0"] = a0;
                row["chi"] = margin;
                row["tol"] = 0.0;  // closed-form arithmetic
                row["in_dual_cone"] = margin > 0.0;
                if (k >= 2) {
                    row["lower_bound_coeff"] = margin * a0 / (chi_n * (k - 1));
                    row["side_condition"] =
                        margin > 0.0 && margin * a0 <= static_cast<double>(k - 1) / (chi_n - 1);
                }
                rows.push_back(std::move(row));
            }
            json out;
            out["n"] = chi_n;
            out["k"] = k;
            out["table"] = rows;
            emit(g, out);
            return kExitOk;
        }

        if (env_cmd->parsed()) {
            if (const int rc = require_present({{"input", env_cmd->count("--input") > 0},
                                                {"k", env_cmd->count("--k") > 0}});
                rc >= 0)
                return rc;
            json input;
            try {
                input = garding::load_json_file(input_path);
            } catch (const std::exception& e) {
                return fail(kExitBadInput, "unreadable_input", e.what());
            }
            const garding::GridFunction u = garding::grid_function_from_json(input);
            const garding::ContactSetResult result =
                garding::upper_k_envelope(u, k, env_tol, env_max_iter);
            emit(g, garding::to_json(result));
            if (!result.converged)
                return fail(kExitNoConvergence, "no_convergence",
                            "envelope sweep hit the iteration cap",
                            {{"iterations", result.iterations},
                             {"final_update", result.final_update}});
            return kExitOk;
        }

        if (abp_cmd->parsed()) {
            if (const int rc = require_present({{"k", abp_cmd->count("--k") > 0}}); rc >= 0)
                return rc;
            const uint64_t seed = effective_seed(g);
            garding::ReportParams params;
            params.p = abp_p;
            params.q = abp_q;
            params.c0 = abp_c0;
            params.chi_substitution = abp_chi_sub;
            params.value_tol = g.tol;
            const garding::TheoremId id = garding::theorem_from_string(abp_theorem);

            std::vector<garding::EstimateReport> reports;
            if (!abp_input.empty()) {
                json input;
                try {
                    input = garding::load_json_file(abp_input);
                } catch (const std::exception& e) {
                    return fail(kExitBadInput, "unreadable_input", e.what());
                }
                const garding::ManufacturedProblem problem = garding::problem_from_json(input);
                reports.push_back(garding::make_estimate_report(problem, id, k, params));
            } else {
                const garding::GridDomain domain = garding::disk_domain(1.0, abp_h);
                for (int rep = 0; rep < abp_count; ++rep) {
                    const uint64_t s = seed + static_cast<uint64_t>(rep);
                    garding::SymmetricMatrixField field = garding::sample_operator_field(
                        s, domain, 2, k,
                        k == 1 ? garding::FieldMode::dual_interior
                               : garding::FieldMode::chi_positive);
                    garding::GridFunction u =
                        garding::random_smooth_function(s ^ 0x9e3779b9ULL, domain, true);
                    const garding::ManufacturedProblem problem =
                        garding::make_manufactured_problem(std::move(field), std::move(u));
                    reports.push_back(garding::make_estimate_report(problem, id, k, params));
                }
            }

            json out;
            out["seed"] = seed;
            out["theorem_id"] = garding::to_string(id);
            json rows = json::array();
            for (const auto& r : reports) rows.push_back(garding::to_json(r));
            out["reports"] = std::move(rows);
            emit(g, out, garding::reports_to_csv(reports));
            if (g.strict) {
                for (const auto& r : reports) {
                    if (!r.hypotheses_ok())
                        return fail(kExitHypothesis, "hypothesis_violation",
                                    "estimate hypotheses violated",
                                    {{"violated", hypothesis_failures(r)}});
                }
            }
            return kExitOk;
        }

        if (gron->parsed()) {
            if (const int rc = require_present({{"theta", gron->count("--theta") > 0}}); rc >= 0)
                return rc;
            const double n_steps = (g_n == "inf" || g_n == "INF")
                                       ? std::numeric_limits<double>::infinity()
                                       : std::stod(g_n);
            json out;
            out["theta"] = g_theta;
            out["q"] = g_q;
            out["N"] = g_n;
            out["factor"] = garding::gronwall_factor(g_theta, g_q, n_steps);
            out["tol"] = 0.0;  // closed form
            emit(g, out);
            return kExitOk;
        }

        if (suite_cmd->parsed()) {
            const uint64_t seed = effective_seed(g);
            const auto results = garding::suite::run_acceptance(seed, suite_threads);
            json out = garding::suite::summary_json(results, seed, true);
            out["battery"] = garding::suite::report_battery_json(seed);
            emit(g, out);
            bool all = true;
            for (const auto& r : results) {
                std::cerr << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << ": " << r.name << " ("
                          << r.detail << ")\n";
                all = all && r.passed;
            }
            return all ? kExitOk : 1;
        }
    } catch (const std::domain_error& e) {
        return fail(g.strict ? kExitHypothesis : kExitBadInput, "domain_error", e.what());
    } catch (const std::invalid_argument& e) {
        return fail(kExitBadInput, "argument_error", e.what());
    } catch (const std::runtime_error& e) {
        return fail(kExitNoConvergence, "runtime_error", e.what());
    }
    return kExitBadInput;
}
