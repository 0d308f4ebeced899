#pragma once

// JSON import/export.  Documents carry bases and states with complex entries
// encoded as [re, im]; exact-arithmetic data rides along in metadata as
// integer coordinate vectors so a reader can reconstruct ring elements
// losslessly.  Schema is versioned and import validates shape and norms;
// whether the content is orthogonal or unbiased is the verifier's business,
// not the parser's.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mub/constellation.hpp"
#include "mub/constructions.hpp"
#include "mub/search.hpp"
#include "mub/theorem1.hpp"
#include "mub/verify.hpp"

namespace mub {

using json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "1";

inline json to_json(cx z) { return json::array({z.real(), z.imag()}); }

inline cx complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw std::invalid_argument("complex entry must be a [re, im] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline json to_json(const StateVector& v) {
    json a = json::array();
    for (const auto& z : v.amps) a.push_back(to_json(z));
    return a;
}

inline StateVector state_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument("state must be a non-empty array");
    StateVector v(static_cast<int>(j.size()));
    for (std::size_t k = 0; k < j.size(); ++k) v.amps[k] = complex_from_json(j[k]);
    return v;
}

inline json to_json(const Basis& b) {
    json cols = json::array();
    for (const auto& c : b.columns) cols.push_back(to_json(c));
    return cols;
}

inline json to_json(const Cyclotomic& x) {
    json num = json::array();
    for (auto c : x.coords()) num.push_back(c);
    return json{{"num", num}, {"den", x.denominator()}};
}

inline Cyclotomic cyclotomic_from_json(const json& j) {
    if (!j.is_object() || !j.contains("num") || !j.contains("den") || !j["num"].is_array() || j["num"].size() != 8)
        throw std::invalid_argument("exact entry must be {num: [8 ints], den: int}");
    std::array<std::int64_t, 8> coords{};
    for (std::size_t k = 0; k < 8; ++k) coords[k] = j["num"][k].get<std::int64_t>();
    return Cyclotomic::from_parts(coords, j["den"].get<std::int64_t>());
}

inline json to_json(const ExactVector& v) {
    json a = json::array();
    for (const auto& x : v.amps) a.push_back(to_json(x));
    return a;
}

inline json to_json(const ExactBasis& b) {
    json cols = json::array();
    for (const auto& c : b.columns) cols.push_back(to_json(c));
    return cols;
}

// Interchange document: a bag of bases and states of one dimension.
struct Document {
    int dim = 6;
    std::vector<Basis> bases;
    std::vector<StateVector> states;
    json metadata = json::object();
};

inline json to_json(const Document& d) {
    json out;
    out["schema_version"] = kSchemaVersion;
    out["dim"] = d.dim;
    out["bases"] = json::array();
    for (const auto& b : d.bases) out["bases"].push_back(to_json(b));
    out["states"] = json::array();
    for (const auto& s : d.states) out["states"].push_back(to_json(s));
    out["metadata"] = d.metadata;
    return out;
}

inline Document document_from_json(const json& j, double norm_tol = 1e-6) {
    if (!j.is_object()) throw std::invalid_argument("document must be a JSON object");
    if (!j.contains("schema_version") || j["schema_version"] != kSchemaVersion)
        throw std::invalid_argument("unsupported schema_version");
    if (!j.contains("dim") || !j["dim"].is_number_integer()) throw std::invalid_argument("missing dim");

    Document d;
    d.dim = j["dim"].get<int>();
    if (d.dim < 1 || d.dim > 64) throw std::invalid_argument("dim out of range");

    auto check_state = [&](const StateVector& v) {
        if (v.dim() != d.dim) throw std::invalid_argument("state dimension does not match document dim");
        if (std::abs(norm_sq(v) - 1.0) > norm_tol) throw std::invalid_argument("state is not normalized");
    };

    for (const auto& jb : j.value("bases", json::array())) {
        if (!jb.is_array() || static_cast<int>(jb.size()) != d.dim)
            throw std::invalid_argument("basis must have dim columns");
        Basis b;
        b.dim = d.dim;
        for (const auto& jc : jb) {
            auto col = state_from_json(jc);
            check_state(col);
            b.columns.push_back(std::move(col));
        }
        d.bases.push_back(std::move(b));
    }
    for (const auto& js : j.value("states", json::array())) {
        auto s = state_from_json(js);
        check_state(s);
        d.states.push_back(std::move(s));
    }
    d.metadata = j.value("metadata", json::object());
    return d;
}

inline void write_document(const Document& d, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << to_json(d).dump(2) << "\n";
}

inline Document read_document(const std::string& path, double norm_tol = 1e-6) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    json j;
    in >> j;
    return document_from_json(j, norm_tol);
}

// Result serializers used by the command line layer.

inline json to_json(const MuReport& r) {
    json j;
    j["pass"] = r.pass;
    j["worst_deviation"] = r.worst_deviation;
    j["mode"] = r.mode == Mode::Exact ? "exact" : "float";
    if (r.offender) j["offender"] = json::array({(*r.offender)[0], (*r.offender)[1], (*r.offender)[2], (*r.offender)[3]});
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

inline json finite_or_null(double v) {
    if (std::isfinite(v)) return json(v);
    return json(nullptr);
}

inline json to_json(const Solution& s) {
    return json{{"state", to_json(s.psi)},
                {"residual", s.residual},
                {"restart_index", s.restart_index},
                {"cluster_size", s.cluster_size}};
}

inline json to_json(const SearchResult& r) {
    json j;
    j["cluster_count"] = r.cluster_count;
    j["success_count"] = r.success_count;
    j["best_failed_residual"] = finite_or_null(r.best_failed_residual);
    j["wall_seconds"] = r.wall_seconds;
    j["config"] = json{{"restarts", r.config.restarts},
                       {"seed", r.config.seed},
                       {"max_iterations", r.config.max_iterations},
                       {"grad_tol", r.config.grad_tol},
                       {"success_residual", r.config.success_residual},
                       {"cluster_distance", r.config.cluster_distance}};
    j["solutions"] = json::array();
    for (const auto& s : r.solutions) j["solutions"].push_back(to_json(s));
    return j;
}

inline json to_json(const PhaseSequence& p) {
    return json{{"angles", p.angles},
                {"offset", p.offset},
                {"orientation", p.orientation},
                {"fit_error", p.fit_error},
                {"lattice_sum", to_json(p.lattice_sum)}};
}

inline json to_json(const ViolationReport& v) {
    return json{{"candidate", v.candidate_id},
                {"deviation", v.deviation},
                {"row0_deviation", v.row0_deviation},
                {"max_deviation", v.max_deviation},
                {"violated", v.violated},
                {"nu", to_json(v.nu)}};
}

inline json to_json(const Theorem1Report& r) {
    json j;
    j["triple"] = r.triple_id == TripleId::T0 ? "T0" : "T1";
    j["triple_valid"] = to_json(r.triple_valid);
    j["c3_count"] = r.c3_count;
    j["c3_matches_construction"] = r.c3_matches_construction;
    j["all_candidates_entangled"] = r.all_candidates_entangled;
    j["all_violated"] = r.all_violated;
    j["violations"] = json::array();
    for (const auto& v : r.violations) j["violations"].push_back(to_json(v));
    j["search"] = to_json(r.search);
    j["verdict"] = r.verdict;
    j["pass"] = r.pass;
    return j;
}

inline json to_json(const FeasibilityReport& f) {
    return json{{"a_powers", f.a_powers},
                {"b_powers", f.b_powers},
                {"grid_floor", f.grid_floor},
                {"floor_t", f.floor_t},
                {"floor_s", f.floor_s},
                {"residual_at_floor", f.residual_at_floor},
                {"dual_route_disagreement", f.dual_route_disagreement},
                {"analytic_product_only", f.analytic_product_only},
                {"product_only", f.product_only},
                {"feasible_region", f.feasible_region}};
}

inline json to_json(const Theorem2Report& r) {
    json j;
    j["constellations_valid"] = r.constellations_valid;
    j["s1_instances"] = r.s1_instances;
    j["s1_samples_per_instance"] = r.s1_samples_per_instance;
    j["s1_all_product"] = r.s1_all_product;
    j["s2"] = json::array();
    for (const auto& f : r.s2) j["s2"].push_back(to_json(f));
    j["min_grid_floor"] = r.min_grid_floor;
    j["max_grid_floor"] = r.max_grid_floor;
    j["max_dual_route_disagreement"] = r.max_dual_route_disagreement;
    j["s2_all_product_only"] = r.s2_all_product_only;
    j["p0_admissible"] = r.p0_admissible;
    j["p2_admissible"] = r.p2_admissible;
    j["p3_admissible"] = r.p3_admissible;
    j["p1_generic_admissible"] = r.p1_generic_admissible;
    j["param_samples"] = r.param_samples;
    j["verdict"] = r.verdict;
    j["pass"] = r.pass;
    return j;
}

// Convenience: document for a product basis list, exact coordinates riding in
// metadata when the exact construction is supplied.
template <std::size_t N>
Document document_for(const std::array<ProductBasis, N>& bases, const std::array<ExactProductBasis, N>* exact = nullptr,
                      const std::string& name = "") {
    Document d;
    d.dim = 6;
    for (const auto& pb : bases) d.bases.push_back(pb.as_basis());
    if (!name.empty()) d.metadata["name"] = name;
    if (exact) {
        json ex = json::array();
        for (const auto& pb : *exact) {
            json cols = json::array();
            for (const auto& c : pb.cols) cols.push_back(to_json(c.column));
            ex.push_back(cols);
        }
        d.metadata["exact_bases"] = ex;
    }
    return d;
}

}  // namespace mub
