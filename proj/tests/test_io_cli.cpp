#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "garding/json_io.hpp"
#include "garding/suite.hpp"

using namespace garding;

namespace {

std::string run_cli(const std::string& args, int* exit_code) {
    const char* cli = std::getenv("GARDING_CLI_PATH");
    REQUIRE(cli != nullptr);
    const std::string cmd = std::string(cli) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, got);
    const int status = pclose(pipe);
    *exit_code = WEXITSTATUS(status);
    return out;
}

}  // namespace

TEST_CASE("grid function round trip") {
    const GridDomain d = disk_domain(0.5, 0.125);
    const GridFunction u = random_smooth_function(5, d, false);
    const json j = to_json(u);
    const GridFunction back = grid_function_from_json(j);
    CHECK(back.domain.same_layout(u.domain));
    CHECK(back.values == u.values);  // bit-exact through the JSON layer
}

TEST_CASE("problem bundle round trip") {
    const GridDomain d = disk_domain(0.5, 0.125);
    FieldOptions opts;
    opts.drift_scale = 0.5;
    opts.with_zero_order = true;
    SymmetricMatrixField field = sample_operator_field(11, d, 2, 2, FieldMode::chi_positive, opts);
    GridFunction u = random_smooth_function(6, d, true);
    const ManufacturedProblem problem = make_manufactured_problem(std::move(field), std::move(u));

    const json j = to_json(problem);
    const ManufacturedProblem back = problem_from_json(j);
    CHECK(back.u.values == problem.u.values);
    CHECK(back.f.values == problem.f.values);  // f is recomputed and must agree
    for (size_t t = 0; t < problem.field.a.size(); ++t)
        CHECK(back.field.a[t] == problem.field.a[t]);
    CHECK(back.field.c == problem.field.c);
}

TEST_CASE("report csv schema is frozen") {
    EstimateReport rep;
    rep.id = TheoremId::eq_1_8;
    rep.n = 2;
    rep.k = 2;
    rep.p = 4;
    rep.q = 2;
    rep.h = 0.0625;
    rep.lhs = 1.0;
    rep.geometry_factor = 2.0;
    rep.source_norm = 7.0;
    rep.required_c = 0.07;
    rep.flags.push_back({"p_exponent", true});
    const std::string csv = reports_to_csv({rep});
    CHECK(csv.find("# garding report csv v1") == 0);
    CHECK(csv.find("theorem_id,n,k,p,q,h,lhs,geometry_factor,drift_factor,source_norm,"
                   "required_C,hypotheses_ok,chi_substitution,tol") != std::string::npos);
    CHECK(csv.find("T1.1/Eq1.8,2,2,4,2,0.0625,1,2,1,7,0.07") != std::string::npos);
}

TEST_CASE("battery json is deterministic and carries tolerances") {
    const json a = suite::report_battery_json(404);
    const json b = suite::report_battery_json(404);
    CHECK(a.dump() == b.dump());
    for (const auto& entry : a.at("rho_star")) CHECK(entry.at("result").contains("tol"));
    for (const auto& entry : a.at("reports")) CHECK(entry.contains("tol"));
}

TEST_CASE("cli rho-star and gronwall values") {
    int code = 0;
    const std::string out = run_cli("rho-star --lambda 1,2,3 --k 3", &code);
    CHECK(code == 0);
    const json j = json::parse(out);
    CHECK(j.at("status").get<std::string>() == "optimal");
    CHECK(j.at("value").get<double>() == doctest::Approx(1.817121).epsilon(1e-5));

    const std::string g = run_cli("gronwall --theta 1 --q 1 --N inf", &code);
    CHECK(code == 0);
    CHECK(json::parse(g).at("factor").get<double>() == doctest::Approx(1.718282).epsilon(1e-6));

    const std::string m = run_cli("membership --lambda 1,2,3 --k 1", &code);
    CHECK(code == 0);
    const json mj = json::parse(m);
    CHECK(mj.at("labels")[0].at("gamma_dual").at("membership").get<std::string>() == "outside");
    CHECK(mj.at("labels")[0].at("gamma").at("membership").get<std::string>() == "interior");
}

TEST_CASE("cli exit codes") {
    int code = 0;
    run_cli("envelope --input /nonexistent.json --k 1", &code);
    CHECK(code == 2);

    // Hypothesis violation in strict mode: q below the table for k = n = 2.
    run_cli("abp --k 2 --q 1.2 --count 1 --spacing 0.125 --strict --seed 7", &code);
    CHECK(code == 3);

    // Same run without strict mode succeeds and reports the cleared flag.
    const std::string out = run_cli("abp --k 2 --q 1.2 --count 1 --spacing 0.125 --seed 7", &code);
    CHECK(code == 0);
    const json j = json::parse(out);
    CHECK_FALSE(j.at("reports")[0].at("hypothesis_flags").at("q_exponent").get<bool>());
}

TEST_CASE("cli determinism with a fixed seed") {
    int code1 = 0, code2 = 0;
    const std::string a = run_cli("abp --k 2 --count 3 --spacing 0.125 --seed 99 --format csv", &code1);
    const std::string b = run_cli("abp --k 2 --count 3 --spacing 0.125 --seed 99 --format csv", &code2);
    CHECK(code1 == 0);
    CHECK(code2 == 0);
    CHECK(a == b);
    CHECK(!a.empty());
}

TEST_CASE("cli envelope round trip") {
    const GridDomain d = GridDomain::rect(9, 9, 0.125);
    const GridFunction u = random_smooth_function(77, d, false);
    const std::string path = "/tmp/garding_test_grid.json";
    save_text_file(path, to_json(u).dump());

    int code = 0;
    const std::string out = run_cli("envelope --input " + path + " --k 2", &code);
    CHECK(code == 0);
    const json j = json::parse(out);
    const GridFunction env = grid_function_from_json(j.at("envelope"));
    for (size_t i = 0; i < u.values.size(); ++i)
        CHECK(env.values[i] >= u.values[i] - 1e-9);
    std::remove(path.c_str());
}
