#pragma once

// Command line front end.  run() is in-process testable: it takes the
// argument vector (without the program name) and the two output streams, and
// returns the process exit code.  Exit 0 means the verdict matched the
// command's expectation, 1 means a verification or reproduction failed, and
// 2 means the input was invalid.

#include <cstdlib>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "mub/mub.hpp"

namespace mub::cli {

inline constexpr const char* kToolVersion = "1.0.0";

inline int worker_threads() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* e = std::getenv("MUB_LAB_THREADS")) {
        const int cap = std::atoi(e);
        if (cap >= 1) hw = std::min(hw, cap);
    }
    return hw;
}

namespace detail {

struct Common {
    double tol = 1e-10;
    std::string mode = "float";
    std::uint64_t seed = 1;
    int restarts = 0;  // 0 = command default
    bool as_json = false;
    std::string out_path;
};

struct LineReport {
    std::vector<std::pair<std::string, std::string>> lines;
    void add(const std::string& k, const std::string& v) { lines.emplace_back(k, v); }
    void add(const std::string& k, double v) {
        std::ostringstream s;
        s.precision(12);
        s << v;
        lines.emplace_back(k, s.str());
    }
    void add(const std::string& k, std::int64_t v) { lines.emplace_back(k, std::to_string(v)); }
};

// Print the report (human or JSON), write --out if requested, return code.
inline int finish(std::ostream& out, const Common& c, const std::string& command, const std::string& verdict,
                  bool pass, const LineReport& human, const json& payload, const std::optional<Document>& doc) {
    if (!c.out_path.empty()) {
        if (doc) {
            write_document(*doc, c.out_path);
        } else {
            std::ofstream f(c.out_path);
            if (!f) throw std::runtime_error("cannot open for writing: " + c.out_path);
            json rep{{"tool", "mublab"},     {"version", kToolVersion}, {"command", command},
                     {"seed", c.seed},       {"mode", c.mode},          {"verdict", verdict},
                     {"payload", payload}};
            f << rep.dump(2) << "\n";
        }
    }
    if (c.as_json) {
        json rep{{"tool", "mublab"},     {"version", kToolVersion}, {"command", command},
                 {"seed", c.seed},       {"mode", c.mode},          {"verdict", verdict},
                 {"payload", payload}};
        out << rep.dump(2) << "\n";
    } else {
        for (const auto& [k, v] : human.lines) out << k << ": " << v << "\n";
        out << "verdict: " << verdict << "\n";
    }
    return pass ? 0 : 1;
}

inline void attach_common(CLI::App* sub, Common& c, bool with_seed = false, bool with_restarts = false) {
    sub->add_option("--tol", c.tol, "verification tolerance")->check(CLI::PositiveNumber);
    sub->add_flag("--json", c.as_json, "machine-readable report on stdout");
    sub->add_option("--out", c.out_path, "write the result document to this path");
    if (with_seed) sub->add_option("--seed", c.seed, "random seed");
    if (with_restarts) sub->add_option("--restarts", c.restarts, "number of random restarts")->check(CLI::PositiveNumber);
}

inline TripleId parse_triple(const std::string& s) { return s == "T1" ? TripleId::T1 : TripleId::T0; }

inline PairId parse_pair(const std::string& s) {
    if (s == "P1") return PairId::P1;
    if (s == "P2") return PairId::P2;
    if (s == "P3") return PairId::P3;
    return PairId::P0;
}

inline std::string offender_text(const MuReport& r) {
    if (!r.offender) return "none";
    const auto& o = *r.offender;
    std::ostringstream s;
    s << "(" << o[0] << ", " << o[1] << ", " << o[2] << ", " << o[3] << ")";
    return s.str();
}

// construct/export handlers; export_mode requires --out and is otherwise the
// same command.

inline int do_basis(std::ostream& out, const Common& c, const std::string& cmd, int dim, const std::string& label) {
    const BasisId id{dim, label.empty() ? 'z' : label[0]};
    const Basis b = mu_basis(id);
    MuReport rep;
    Document doc;
    doc.dim = dim;
    doc.bases.push_back(b);
    doc.metadata["name"] = "basis " + std::to_string(dim) + label;
    if (c.mode == "exact") {
        const ExactBasis eb = mu_basis<Cyclotomic>(id);
        rep = is_orthonormal(eb, Tolerance(c.tol));
        doc.metadata["exact_basis"] = to_json(eb);
    } else {
        rep = is_orthonormal(b, Tolerance(c.tol));
    }
    LineReport h;
    h.add("dim", static_cast<std::int64_t>(dim));
    h.add("label", label);
    h.add("mode", c.mode);
    h.add("worst_deviation", rep.worst_deviation);
    json payload{{"validation", to_json(rep)}, {"document", to_json(doc)}};
    return finish(out, c, cmd, rep.pass ? "valid" : "invalid", rep.pass, h, payload, doc);
}

inline int do_triple(std::ostream& out, const Common& c, const std::string& cmd, const std::string& which) {
    const TripleId id = parse_triple(which);
    const auto t = triple(id);
    MuReport rep;
    std::optional<std::array<ExactProductBasis, 3>> exact;
    if (c.mode == "exact") {
        exact = triple<Cyclotomic>(id);
        rep = validate_triple(*exact, Tolerance(c.tol));
    } else {
        rep = validate_triple(t, Tolerance(c.tol));
    }
    Document doc = document_for(t, exact ? &*exact : nullptr, "triple " + which);
    LineReport h;
    h.add("triple", which);
    h.add("mode", c.mode);
    h.add("worst_deviation", rep.worst_deviation);
    json payload{{"validation", to_json(rep)}, {"document", to_json(doc)}};
    return finish(out, c, cmd, rep.pass ? "valid" : "invalid", rep.pass, h, payload, doc);
}

inline int do_pair(std::ostream& out, const Common& c, const std::string& cmd, const std::string& which,
                   const ParamSet& params) {
    const PairId id = parse_pair(which);
    const auto p = pair_family<cx>(id, params);
    MuReport rep;
    std::optional<std::array<ExactProductBasis, 2>> exact;
    if (c.mode == "exact") {
        exact = pair_family<Cyclotomic>(id, params);
        rep = validate_pair(*exact, Tolerance(c.tol));
    } else {
        rep = validate_pair(p, Tolerance(c.tol));
    }
    Document doc = document_for(p, exact ? &*exact : nullptr, "pair " + which);
    LineReport h;
    h.add("pair", which);
    h.add("mode", c.mode);
    h.add("worst_deviation", rep.worst_deviation);
    json payload{{"validation", to_json(rep)}, {"document", to_json(doc)}};
    return finish(out, c, cmd, rep.pass ? "valid" : "invalid", rep.pass, h, payload, doc);
}

inline int do_constellation(std::ostream& out, const Common& c, const std::string& cmd, const std::string& shape,
                            const QutritChoices& q) {
    const auto cons = constellation_554<cx>(shape == "S2" ? ConstellationShape::S2 : ConstellationShape::S1, q);
    const MuReport rep = validate_constellation(cons, Tolerance(c.tol));
    Document doc;
    doc.dim = 6;
    for (const auto& pb : cons.bases) doc.bases.push_back(pb.as_basis());
    for (const auto& e : cons.extra) doc.states.push_back(e.column);
    doc.metadata["name"] = cons.description;
    LineReport h;
    h.add("shape", shape);
    h.add("description", cons.description);
    h.add("worst_deviation", rep.worst_deviation);
    json payload{{"validation", to_json(rep)}, {"document", to_json(doc)}};
    return finish(out, c, cmd, rep.pass ? "valid" : "invalid", rep.pass, h, payload, doc);
}

inline int do_verify(std::ostream& out, const Common& c, const std::string& cmd, const std::string& file,
                     bool verbose) {
    const Document doc = read_document(file);
    const Tolerance tol(c.tol);
    bool pass = true;
    MuReport worst;
    worst.worst_deviation = -1.0;
    std::string worst_what = "none";
    LineReport h;
    h.add("file", file);
    h.add("bases", static_cast<std::int64_t>(doc.bases.size()));
    h.add("states", static_cast<std::int64_t>(doc.states.size()));

    json checks = json::array();
    auto note = [&](const std::string& what, const MuReport& r) {
        pass = pass && r.pass;
        if (r.worst_deviation > worst.worst_deviation) {
            worst = r;
            worst_what = what;
        }
        json jc = to_json(r);
        jc["check"] = what;
        checks.push_back(jc);
        if (verbose) h.add(what, r.worst_deviation);
    };

    for (std::size_t i = 0; i < doc.bases.size(); ++i)
        note("orthonormal basis " + std::to_string(i), is_orthonormal(doc.bases[i], tol));
    for (std::size_t i = 0; i < doc.bases.size(); ++i)
        for (std::size_t j = i + 1; j < doc.bases.size(); ++j)
            note("mu bases " + std::to_string(i) + "," + std::to_string(j), are_mu(doc.bases[i], doc.bases[j], tol));
    for (std::size_t s = 0; s < doc.states.size(); ++s)
        note("state " + std::to_string(s) + " mu to bases", vector_mu_to_bases(doc.states[s], doc.bases, tol));

    h.add("worst_check", worst_what);
    h.add("worst_deviation", worst.worst_deviation);
    h.add("worst_offender", offender_text(worst));
    json payload{{"checks", checks}, {"pass", pass}};
    return finish(out, c, cmd, pass ? "pass" : "fail", pass, h, payload, std::nullopt);
}

inline int do_search(std::ostream& out, const Common& c, const std::string& cmd, const std::string& triple_name,
                     const std::string& pair_name, const ParamSet& params) {
    SearchConfig cfg;
    cfg.restarts = c.restarts > 0 ? c.restarts : 1000;
    cfg.seed = c.seed;
    std::vector<StateVector> cols;
    std::string target;
    if (!triple_name.empty()) {
        cols = constraint_columns(triple(parse_triple(triple_name)));
        target = "triple " + triple_name;
    } else {
        cols = constraint_columns(pair_family<cx>(parse_pair(pair_name), params));
        target = "pair " + pair_name;
    }
    const auto res = search(cols, cfg, worker_threads());

    Document doc;
    doc.dim = 6;
    for (const auto& s : res.solutions) doc.states.push_back(s.psi);
    doc.metadata["name"] = "search solutions over " + target;
    doc.metadata["search"] = to_json(res);

    LineReport h;
    h.add("target", target);
    h.add("seed", static_cast<std::int64_t>(cfg.seed));
    h.add("restarts", static_cast<std::int64_t>(cfg.restarts));
    h.add("clusters", static_cast<std::int64_t>(res.cluster_count));
    h.add("successes", static_cast<std::int64_t>(res.success_count));
    if (std::isfinite(res.best_failed_residual)) h.add("best_failed_residual", res.best_failed_residual);
    h.add("wall_seconds", res.wall_seconds);
    return finish(out, c, cmd, "completed", true, h, to_json(res), doc);
}

inline int do_theorem1(std::ostream& out, const Common& c, const std::string& cmd, const std::string& which,
                       int resolution) {
    SearchConfig cfg;
    cfg.restarts = c.restarts > 0 ? c.restarts : 1000;
    cfg.seed = c.seed;
    const auto rep = theorem1_pipeline(parse_triple(which), cfg, worker_threads(), resolution);
    LineReport h;
    h.add("triple", which);
    h.add("seed", static_cast<std::int64_t>(cfg.seed));
    h.add("triple_valid", rep.triple_valid.pass ? "yes" : "no");
    h.add("c3_vectors", static_cast<std::int64_t>(rep.c3_count));
    h.add("candidates", static_cast<std::int64_t>(rep.violations.size()));
    h.add("all_violated", rep.all_violated ? "yes" : "no");
    h.add("search_clusters", static_cast<std::int64_t>(rep.search.cluster_count));
    if (std::isfinite(rep.search.best_failed_residual)) h.add("search_floor", rep.search.best_failed_residual);
    return finish(out, c, cmd, rep.verdict, rep.pass, h, to_json(rep), std::nullopt);
}

inline int do_theorem2(std::ostream& out, const Common& c, const std::string& cmd, int samples) {
    const auto rep = theorem2_pipeline(samples, 5, c.seed);
    LineReport h;
    h.add("seed", static_cast<std::int64_t>(c.seed));
    h.add("s1_instances", static_cast<std::int64_t>(rep.s1_instances));
    h.add("s1_all_product", rep.s1_all_product ? "yes" : "no");
    h.add("s2_pairs", static_cast<std::int64_t>(rep.s2.size()));
    h.add("min_grid_floor", rep.min_grid_floor);
    h.add("p0_admissible", static_cast<std::int64_t>(rep.p0_admissible));
    h.add("p2_admissible", static_cast<std::int64_t>(rep.p2_admissible));
    h.add("p3_admissible", static_cast<std::int64_t>(rep.p3_admissible));
    return finish(out, c, cmd, rep.verdict, rep.pass, h, to_json(rep), std::nullopt);
}

inline int do_grassl48(std::ostream& out, const Common& c, const std::string& cmd) {
    SearchConfig cfg;
    cfg.restarts = c.restarts > 0 ? c.restarts : 100000;
    cfg.seed = c.seed;
    cfg.keep_raw = true;
    const auto res = search(constraint_columns(pair_family<cx>(PairId::P0)), cfg, worker_threads());

    // stability of the clustering across thresholds
    const int at_low = static_cast<int>(cluster_solutions(res.raw, 1e-7).size());
    const int at_high = static_cast<int>(cluster_solutions(res.raw, 1e-4).size());
    const bool stable = at_low == res.cluster_count && at_high == res.cluster_count;
    const bool pass = res.cluster_count == 48 && stable;

    LineReport h;
    h.add("seed", static_cast<std::int64_t>(cfg.seed));
    h.add("restarts", static_cast<std::int64_t>(cfg.restarts));
    h.add("successes", static_cast<std::int64_t>(res.success_count));
    h.add("clusters", static_cast<std::int64_t>(res.cluster_count));
    h.add("clusters_at_1e-7", static_cast<std::int64_t>(at_low));
    h.add("clusters_at_1e-4", static_cast<std::int64_t>(at_high));
    h.add("wall_seconds", res.wall_seconds);

    json payload = to_json(res);
    payload["clusters_at_1e-7"] = at_low;
    payload["clusters_at_1e-4"] = at_high;
    const std::string verdict = std::to_string(res.cluster_count) + " clusters";
    return finish(out, c, cmd, verdict, pass, h, payload, std::nullopt);
}

inline int do_c3six(std::ostream& out, const Common& c, const std::string& cmd, int resolution) {
    const auto found = enumerate_c3_mu_to_zx(resolution);
    std::vector<StateVector> expect;
    for (char tag : {'y', 'w'})
        for (const auto& col : mu_basis({3, tag}).columns) expect.push_back(canonicalize(col));
    bool match = found.size() == expect.size();
    for (const auto& v : found) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& e : expect) best = std::min(best, canonical_distance(v, e));
        match = match && best < 1e-8;
    }
    const bool pass = found.size() == 6 && match;

    Document doc;
    doc.dim = 3;
    for (const auto& v : found) doc.states.push_back(v);
    doc.metadata["name"] = "qutrit vectors unbiased to z and x";

    LineReport h;
    h.add("seed", static_cast<std::int64_t>(c.seed));
    h.add("resolution", static_cast<std::int64_t>(resolution));
    h.add("count", static_cast<std::int64_t>(found.size()));
    h.add("matches_construction", match ? "yes" : "no");
    json payload{{"count", found.size()}, {"matches_construction", match}, {"document", to_json(doc)}};
    const std::string verdict = std::to_string(found.size()) + " vectors";
    return finish(out, c, cmd, verdict, pass, h, payload, doc);
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    using namespace detail;
    CLI::App app{"construct, verify, and search mutually unbiased product bases in dimension six"};
    app.require_subcommand(1);

    // construct / export
    struct BuildOpts {
        Common common;
        int dim = 3;
        std::string label = "z";
        std::string triple_name = "T0";
        std::string pair_name = "P0";
        std::string shape = "S1";
        ParamSet params;
        QutritChoices choices;
        std::string a_basis = "y", b_basis = "w";
    };
    auto add_build_tree = [&](CLI::App* root, BuildOpts& o, bool require_out) {
        root->require_subcommand(1);
        auto* sb = root->add_subcommand("basis", "one mutually unbiased eigenbasis");
        sb->add_option("--dim", o.dim, "factor dimension")->check(CLI::IsMember({2, 3}));
        sb->add_option("--label", o.label, "basis label")->check(CLI::IsMember({"z", "x", "y", "w"}));
        auto* st = root->add_subcommand("triple", "a product triple");
        st->add_option("--triple", o.triple_name, "which triple")->check(CLI::IsMember({"T0", "T1"}));
        auto* sp = root->add_subcommand("pair", "a product pair family member");
        sp->add_option("--pair", o.pair_name, "which pair family")->check(CLI::IsMember({"P0", "P1", "P2", "P3"}));
        sp->add_option("--xi", o.params.xi, "first phase of the second-member rotation");
        sp->add_option("--eta", o.params.eta, "second phase of the second-member rotation");
        sp->add_option("--zeta", o.params.zeta, "first qutrit phase");
        sp->add_option("--chi", o.params.chi, "second qutrit phase");
        sp->add_option("--sigma", o.params.sigma, "first qubit rotation angle in (0, pi)");
        sp->add_option("--tau", o.params.tau, "second qubit rotation angle in (0, pi)");
        auto* sc = root->add_subcommand("constellation", "a {5,5,4} constellation");
        sc->add_option("--shape", o.shape, "S1 or S2")->check(CLI::IsMember({"S1", "S2"}));
        sc->add_option("--a-basis", o.a_basis, "qutrit basis for the A side")->check(CLI::IsMember({"y", "w"}));
        sc->add_option("--b-basis", o.b_basis, "qutrit basis for the B side")->check(CLI::IsMember({"y", "w"}));
        sc->add_option("--a-first", o.choices.a_first)->check(CLI::Range(0, 2));
        sc->add_option("--a-second", o.choices.a_second)->check(CLI::Range(0, 2));
        sc->add_option("--b-index", o.choices.b_index)->check(CLI::Range(0, 2));
        sc->add_option("--b-second", o.choices.b_second)->check(CLI::Range(0, 2));
        for (auto* s : {sb, st, sp, sc}) {
            attach_common(s, o.common);
            s->add_option("--mode", o.common.mode, "arithmetic mode")->check(CLI::IsMember({"float", "exact"}));
            if (require_out) s->get_option("--out")->required();
        }
        return std::array<CLI::App*, 4>{sb, st, sp, sc};
    };

    BuildOpts cons_o, exp_o;
    auto* construct = app.add_subcommand("construct", "build and validate a catalogued object");
    auto cons_leaves = add_build_tree(construct, cons_o, false);
    auto* exporter = app.add_subcommand("export", "build an object and write its document");
    auto exp_leaves = add_build_tree(exporter, exp_o, true);

    // verify
    Common ver_c;
    std::string ver_file;
    bool ver_verbose = false;
    auto* verify = app.add_subcommand("verify", "check a document file for orthonormality and unbiasedness");
    verify->add_option("--file", ver_file, "document to verify")->required();
    verify->add_flag("--verbose", ver_verbose, "print every check, not only the worst");
    attach_common(verify, ver_c);

    // search
    Common sea_c;
    std::string sea_triple, sea_pair = "P0";
    ParamSet sea_params;
    auto* searchc = app.add_subcommand("search", "multi-start feasibility search for an unbiased vector");
    auto* sea_t = searchc->add_option("--triple", sea_triple, "constrain against this triple")
                      ->check(CLI::IsMember({"T0", "T1"}));
    searchc->add_option("--pair", sea_pair, "constrain against this pair")->check(CLI::IsMember({"P0", "P1", "P2", "P3"}))
        ->excludes(sea_t);
    searchc->add_option("--xi", sea_params.xi);
    searchc->add_option("--eta", sea_params.eta);
    attach_common(searchc, sea_c, true, true);

    // reproduce
    Common t1_c, t2_c, g_c, c6_c;
    std::string t1_triple = "T0";
    int t1_resolution = 720, t2_samples = 100, c6_resolution = 720;
    auto* reproduce = app.add_subcommand("reproduce", "rerun one of the finite results end to end");
    reproduce->require_subcommand(1);
    auto* r1 = reproduce->add_subcommand("theorem1", "no vector is unbiased to a product triple");
    r1->add_option("--triple", t1_triple)->check(CLI::IsMember({"T0", "T1"}));
    r1->add_option("--resolution", t1_resolution)->check(CLI::PositiveNumber);
    attach_common(r1, t1_c, true, true);
    auto* r2 = reproduce->add_subcommand("theorem2", "{5,5,4} constellations extend only by product states");
    r2->add_option("--samples", t2_samples)->check(CLI::PositiveNumber);
    attach_common(r2, t2_c, true, false);
    auto* rg = reproduce->add_subcommand("grassl48", "the 48 vectors unbiased to the unparametrized pair");
    attach_common(rg, g_c, true, true);
    auto* rc = reproduce->add_subcommand("c3six", "the six qutrit vectors unbiased to z and x");
    rc->add_option("--resolution", c6_resolution)->check(CLI::PositiveNumber);
    attach_common(rc, c6_c, true, false);

    std::vector<const char*> argv;
    argv.push_back("mublab");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help() << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    std::string cmd;
    for (const auto& a : args) cmd += (cmd.empty() ? "" : " ") + a;

    try {
        auto run_build = [&](BuildOpts& o, const std::array<CLI::App*, 4>& leaves) {
            o.choices.a_basis = o.a_basis[0];
            o.choices.b_basis = o.b_basis[0];
            if (leaves[0]->parsed()) return do_basis(out, o.common, cmd, o.dim, o.label);
            if (leaves[1]->parsed()) return do_triple(out, o.common, cmd, o.triple_name);
            if (leaves[2]->parsed()) return do_pair(out, o.common, cmd, o.pair_name, o.params);
            return do_constellation(out, o.common, cmd, o.shape, o.choices);
        };
        if (construct->parsed()) return run_build(cons_o, cons_leaves);
        if (exporter->parsed()) return run_build(exp_o, exp_leaves);
        if (verify->parsed()) return do_verify(out, ver_c, cmd, ver_file, ver_verbose);
        if (searchc->parsed()) return do_search(out, sea_c, cmd, sea_triple, sea_pair, sea_params);
        if (reproduce->parsed()) {
            if (r1->parsed()) return do_theorem1(out, t1_c, cmd, t1_triple, t1_resolution);
            if (r2->parsed()) return do_theorem2(out, t2_c, cmd, t2_samples);
            if (rg->parsed()) return do_grassl48(out, g_c, cmd);
            return do_c3six(out, c6_c, cmd, c6_resolution);
        }
    } catch (const json::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    err << "error: no command\n";
    return 2;
}

}  // namespace mub::cli
