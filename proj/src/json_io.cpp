#include "garding/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace garding {

namespace {

json domain_to_json(const GridDomain& d) {
    json j;
    if (d.dim() == 1)
        j["shape"] = {d.nx()};
    else
        j["shape"] = {d.ny(), d.nx()};
    j["spacing"] = d.spacing();
    j["mask"] = json::array();
    for (const uint8_t m : d.interior_mask()) j["mask"].push_back(m ? 1 : 0);
    return j;
}

GridDomain domain_from_json(const json& j) {
    const auto shape = j.at("shape").get<std::vector<int>>();
    const double spacing = j.at("spacing").get<double>();
    const auto mask_int = j.at("mask").get<std::vector<int>>();
    std::vector<uint8_t> mask(mask_int.size());
    for (size_t i = 0; i < mask.size(); ++i) mask[i] = mask_int[i] ? 1 : 0;
    if (shape.size() == 1) return GridDomain::line(shape[0], spacing, std::move(mask));
    if (shape.size() == 2) return GridDomain::rect(shape[0], shape[1], spacing, std::move(mask));
    throw std::runtime_error("grid schema: shape must have 1 or 2 axes");
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

json to_json(const GridFunction& u) {
    json j = domain_to_json(u.domain);
    j["values"] = u.values;
    return j;
}

GridFunction grid_function_from_json(const json& j) {
    GridDomain d = domain_from_json(j);
    auto values = j.at("values").get<std::vector<double>>();
    return GridFunction(std::move(d), std::move(values));
}

json to_json(const ManufacturedProblem& problem) {
    const SymmetricMatrixField& field = problem.field;
    json j;
    j["domain"] = domain_to_json(field.domain);
    j["mat_dim"] = field.mat_dim;

    // Row-major per node, packed upper triangle per node.
    const size_t comps = field.a.size();
    json a = json::array();
    for (size_t node = 0; node < field.domain.node_count(); ++node) {
        json entry = json::array();
        for (size_t t = 0; t < comps; ++t) entry.push_back(field.a[t][node]);
        a.push_back(std::move(entry));
    }
    j["A"] = std::move(a);

    if (field.has_drift()) {
        json b = json::array();
        for (size_t node = 0; node < field.domain.node_count(); ++node) {
            json entry = json::array();
            for (size_t t = 0; t < field.b.size(); ++t) entry.push_back(field.b[t][node]);
            b.push_back(std::move(entry));
        }
        j["b"] = std::move(b);
    } else {
        j["b"] = nullptr;
    }
    j["c"] = field.has_zero_order() ? json(field.c) : json(nullptr);
    j["u"] = problem.u.values;
    return j;
}

ManufacturedProblem problem_from_json(const json& j) {
    GridDomain d = domain_from_json(j.at("domain"));
    const int mat_dim = j.at("mat_dim").get<int>();
    SymmetricMatrixField field(d, mat_dim);

    const auto& a = j.at("A");
    if (a.size() != d.node_count()) throw std::runtime_error("problem schema: A size mismatch");
    for (size_t node = 0; node < d.node_count(); ++node) {
        const auto& entry = a[node];
        if (entry.size() != field.a.size())
            throw std::runtime_error("problem schema: A entry size mismatch");
        for (size_t t = 0; t < field.a.size(); ++t) field.a[t][node] = entry[t].get<double>();
    }
    if (j.contains("b") && !j.at("b").is_null()) {
        field.enable_drift();
        const auto& b = j.at("b");
        if (b.size() != d.node_count()) throw std::runtime_error("problem schema: b size mismatch");
        for (size_t node = 0; node < d.node_count(); ++node)
            for (size_t t = 0; t < field.b.size(); ++t)
                field.b[t][node] = b[node][t].get<double>();
    }
    if (j.contains("c") && !j.at("c").is_null()) {
        field.enable_zero_order();
        const auto c = j.at("c").get<std::vector<double>>();
        if (c.size() != d.node_count()) throw std::runtime_error("problem schema: c size mismatch");
        field.c = c;
    }
    auto u_values = j.at("u").get<std::vector<double>>();
    GridFunction u(d, std::move(u_values));
    return make_manufactured_problem(std::move(field), std::move(u));
}

json to_json(const ContactSetResult& result) {
    json j;
    j["envelope"] = to_json(result.envelope);
    j["contact_mask"] = json::array();
    for (const uint8_t m : result.contact) j["contact_mask"].push_back(m ? 1 : 0);
    j["tol_used"] = result.tol_used;
    j["converged"] = result.converged;
    j["iterations"] = result.iterations;
    j["final_update"] = result.final_update;
    return j;
}

json to_json(const EstimateReport& report) {
    json j;
    j["theorem_id"] = to_string(report.id);
    j["n"] = report.n;
    j["k"] = report.k;
    j["p"] = report.p;
    j["q"] = report.q;
    j["h"] = report.h;
    j["lhs"] = report.lhs;
    j["geometry_factor"] = report.geometry_factor;
    j["drift_factor"] = report.drift_factor;
    j["source_norm"] = report.source_norm;
    j["required_C"] = report.required_c;
    json flags;
    for (const auto& f : report.flags) flags[f.name] = f.ok;
    j["hypothesis_flags"] = std::move(flags);
    j["chi_substitution"] = report.chi_substitution;
    j["tol"] = report.tol;
    return j;
}

json to_json(const DualEvalResult& result) {
    json j;
    j["status"] = to_string(result.status);
    if (std::isfinite(result.value))
        j["value"] = result.value;
    else
        j["value"] = nullptr;
    if (result.has_mu) j["optimal_mu"] = std::vector<double>(
        result.optimal_mu.v.begin(), result.optimal_mu.v.begin() + result.optimal_mu.n);
    if (result.has_certificate)
        j["certificate"] = std::vector<double>(result.certificate.v.begin(),
                                               result.certificate.v.begin() + result.certificate.n);
    j["iterations"] = result.iterations;
    j["kkt_residual"] = result.kkt_residual;
    j["duality_gap_estimate"] = result.duality_gap;
    if (std::isfinite(result.slice_min)) j["slice_min"] = result.slice_min;
    j["tol"] = result.tol;
    return j;
}

json to_json(const ConeLabel& label) {
    json j;
    j["k"] = label.k;
    j["membership"] = to_string(label.membership);
    j["tol"] = label.tol;
    return j;
}

std::string reports_to_csv(const std::vector<EstimateReport>& reports) {
    std::ostringstream out;
    out << "# garding report csv v1\n";
    out << "theorem_id,n,k,p,q,h,lhs,geometry_factor,drift_factor,source_norm,required_C,"
           "hypotheses_ok,chi_substitution,tol\n";
    for (const auto& r : reports) {
        out << to_string(r.id) << ',' << r.n << ',' << r.k << ',' << format_double(r.p) << ','
            << format_double(r.q) << ',' << format_double(r.h) << ',' << format_double(r.lhs)
            << ',' << format_double(r.geometry_factor) << ',' << format_double(r.drift_factor)
            << ',' << format_double(r.source_norm) << ',' << format_double(r.required_c) << ','
            << (r.hypotheses_ok() ? 1 : 0) << ',' << (r.chi_substitution ? 1 : 0) << ','
            << format_double(r.tol) << '\n';
    }
    return out.str();
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open input file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::runtime_error("cannot parse JSON from " + path + ": " + e.what());
    }
    return j;
}

void save_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << text;
}

}  // namespace garding
