// Acceptance gate: one line per criterion, nonzero exit if any fails.
// Budgets are wall-clock seconds; every check recomputes from the library,
// no stored fixtures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "mub/cli.hpp"
#include "mub/mub.hpp"

using namespace mub;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        pass = false;
        if (!detail.empty()) detail += "; ";
        detail += why;
    }
    void expect(bool ok, const std::string& why) {
        if (!ok) fail(why);
    }
};

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

// 1. The four qutrit bases are pairwise unbiased: exactly in the ring, and
//    below 1e-12 in floating point.
Outcome exactness() {
    Outcome o;
    const std::array<char, 4> labels{'z', 'x', 'y', 'w'};
    std::vector<ExactBasis> exact;
    std::vector<Basis> approx;
    for (char l : labels) {
        exact.push_back(mu_basis<Cyclotomic>({3, l}));
        approx.push_back(mu_basis({3, l}));
    }
    for (std::size_t i = 0; i < 4; ++i) {
        const auto orth = is_orthonormal(exact[i]);
        o.expect(orth.pass && orth.worst_deviation == 0.0, std::string("exact orthonormality broke for ") + labels[i]);
        for (std::size_t j = i + 1; j < 4; ++j) {
            const auto r = are_mu(exact[i], exact[j]);
            o.expect(r.pass && r.worst_deviation == 0.0,
                     std::string("exact unbiasedness broke for ") + labels[i] + "/" + labels[j]);
            const auto f = are_mu(approx[i], approx[j], Tolerance(1e-12));
            o.expect(f.pass, std::string("float unbiasedness above 1e-12 for ") + labels[i] + "/" + labels[j]);
        }
    }
    return o;
}

// 2. Both product triples pass full validation at 1e-12.
Outcome triples() {
    Outcome o;
    for (auto id : {TripleId::T0, TripleId::T1}) {
        const auto rep = validate_triple(triple(id), Tolerance(1e-12));
        o.expect(rep.pass, std::string("triple ") + (id == TripleId::T0 ? "T0" : "T1") +
                               " deviation " + fmt(rep.worst_deviation));
    }
    return o;
}

// 3. Grid enumeration over C^3 recovers exactly the six catalogue columns.
Outcome enumeration() {
    Outcome o;
    const auto found = enumerate_c3_mu_to_zx(720);
    o.expect(found.size() == 6, "expected 6 vectors, got " + std::to_string(found.size()));
    std::vector<StateVector> expect;
    for (char tag : {'y', 'w'})
        for (const auto& col : mu_basis({3, tag}).columns) expect.push_back(col);
    std::vector<bool> used(expect.size(), false);
    for (const auto& v : found) {
        double best = 1e9;
        std::size_t best_i = 0;
        for (std::size_t i = 0; i < expect.size(); ++i) {
            const double d = canonical_distance(v, expect[i]);
            if (d < best) {
                best = d;
                best_i = i;
            }
        }
        o.expect(best < 1e-8, "vector off catalogue by " + fmt(best));
        o.expect(!used[best_i], "two vectors matched the same column");
        used[best_i] = true;
    }
    return o;
}

// 4. Twelve candidates, all maximally entangled, all violating the flat
//    overlap requirement by at least 0.1 on the second shift row.
Outcome candidates() {
    Outcome o;
    const auto cands = twelve_candidates();
    o.expect(cands.size() == 12, "expected 12 candidates, got " + std::to_string(cands.size()));
    for (const auto& c : cands) {
        const auto s1 = step1_reduced_state(c.psi);
        const double gap = std::abs(s1.schmidt.lambda1 - s1.schmidt.lambda2);
        o.expect(gap < 1e-12, c.id + " coefficient gap " + fmt(gap));
        o.expect(s1.maximally_entangled, c.id + " not maximally entangled");
        const auto v = step3_violation(c);
        o.expect(v.violated && v.max_deviation >= 0.1, c.id + " max deviation " + fmt(v.max_deviation));
    }
    return o;
}

// 5. Ten seeds, a thousand restarts each, against both triples: no solution
//    and a clear residual floor.
Outcome negative_search() {
    Outcome o;
    const int threads = cli::worker_threads();
    for (auto id : {TripleId::T0, TripleId::T1}) {
        const auto cols = constraint_columns(triple(id));
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            SearchConfig cfg;
            cfg.restarts = 1000;
            cfg.seed = seed;
            const auto res = search(cols, cfg, threads);
            const std::string tag =
                std::string(id == TripleId::T0 ? "T0" : "T1") + " seed " + std::to_string(seed);
            o.expect(res.success_count == 0, tag + " found " + std::to_string(res.success_count) + " solutions");
            o.expect(res.best_failed_residual > 1e-4, tag + " floor " + fmt(res.best_failed_residual));
        }
    }
    return o;
}

// 6. The standard product pair admits exactly 48 unbiased vectors, found as
//    stable clusters with residuals at solver precision.
Outcome forty_eight() {
    Outcome o;
    SearchConfig cfg;
    cfg.restarts = 100000;
    cfg.seed = 1;
    cfg.keep_raw = true;
    const auto res = search(constraint_columns(pair_family<cx>(PairId::P0)), cfg, cli::worker_threads());
    o.expect(res.cluster_count == 48, "got " + std::to_string(res.cluster_count) + " clusters");
    for (const auto& s : res.solutions)
        o.expect(s.residual < 1e-16, "cluster residual " + fmt(s.residual));
    const auto tight = cluster_solutions(res.raw, 1e-7);
    const auto loose = cluster_solutions(res.raw, 1e-4);
    o.expect(tight.size() == 48 && loose.size() == 48,
             "threshold sweep gave " + std::to_string(tight.size()) + " and " + std::to_string(loose.size()));
    return o;
}

// 7. Constellation pipeline: every pair is product-only with a positive
//    floor, sampled one-vector extensions are product, and the twisted pair
//    families admit nothing from the product pool.
Outcome constellations() {
    Outcome o;
    const auto rep = theorem2_pipeline(100, 5, 1);
    o.expect(rep.s2.size() == 30, "expected 30 pairs, got " + std::to_string(rep.s2.size()));
    for (const auto& f : rep.s2) {
        o.expect(f.product_only && f.grid_floor > 0.0, "pair floor " + fmt(f.grid_floor));
        o.expect(f.analytic_product_only, "analytic route disagrees");
    }
    o.expect(rep.s1_all_product, "an S1 extension failed the product check");
    o.expect(rep.s1_instances * 100 >= 100, "fewer than 100 S1 samples");
    o.expect(rep.p2_admissible == 0, "P2 admitted " + std::to_string(rep.p2_admissible));
    o.expect(rep.p3_admissible == 0, "P3 admitted " + std::to_string(rep.p3_admissible));
    o.expect(rep.pass && rep.verdict == "excluded", "pipeline verdict " + rep.verdict);
    return o;
}

// 8. Gradient versus central differences, Schmidt reconstruction, and the
//    factorized unbiasedness criterion versus the direct one.
Outcome hygiene() {
    Outcome o;
    const auto cols = constraint_columns(pair_family<cx>(PairId::P0));

    // The analytic gradient lives in the tangent space of the unit sphere, so
    // the finite difference has to stay on the sphere too.
    const auto value_at = [&cols](detail::Reals12 y) {
        detail::renormalize(y);
        return objective(detail::decode(y), cols).value;
    };
    detail::CounterRng rng(99, 0);
    for (int trial = 0; trial < 100; ++trial) {
        detail::Reals12 x{};
        for (std::size_t i = 0; i < 12; i += 2) rng.normal2(x[i], x[i + 1]);
        detail::renormalize(x);
        const auto base = objective(detail::decode(x), cols);
        double num_norm = 0.0, diff_norm = 0.0;
        for (std::size_t i = 0; i < 12; ++i) {
            const double h = 1e-6;
            auto xp = x, xm = x;
            xp[i] += h;
            xm[i] -= h;
            const double fd = (value_at(xp) - value_at(xm)) / (2 * h);
            num_norm += fd * fd;
            const double d = fd - base.gradient[i];
            diff_norm += d * d;
        }
        const double rel = std::sqrt(diff_norm) / std::max(std::sqrt(num_norm), 1e-12);
        o.expect(rel < 1e-6, "gradient mismatch " + fmt(rel));
    }

    detail::CounterRng rng2(7, 1);
    for (int trial = 0; trial < 1000; ++trial) {
        detail::Reals12 x{};
        for (std::size_t i = 0; i < 12; i += 2) rng2.normal2(x[i], x[i + 1]);
        detail::renormalize(x);
        const auto psi = detail::decode(x);
        const auto sd = schmidt(psi);
        const auto back = sd.reconstruct();
        double err = 0.0;
        for (int k = 0; k < 6; ++k) err += std::norm(psi[k] - back[k]);
        o.expect(std::sqrt(err) < 1e-10, "reconstruction error " + fmt(std::sqrt(err)));
    }

    std::vector<ProductBasis> pool;
    for (auto id : {TripleId::T0, TripleId::T1})
        for (const auto& pb : triple(id)) pool.push_back(pb);
    for (const auto& pb : pair_family<cx>(PairId::P0)) pool.push_back(pb);
    for (const auto& pb : pair_family<cx>(PairId::P2)) pool.push_back(pb);
    ParamSet ps;
    ps.sigma = 0.7;
    ps.tau = 1.9;
    ps.zeta = 0.3;
    ps.chi = 4.1;
    for (const auto& pb : pair_family<cx>(PairId::P3, ps)) pool.push_back(pb);

    detail::CounterRng rng3(5, 2);
    int disagreements = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        VecT<cx> phi(2), Phi(3);
        double a, b;
        for (int k = 0; k < 2; ++k) {
            rng3.normal2(a, b);
            phi[k] = {a, b};
        }
        for (int k = 0; k < 3; ++k) {
            rng3.normal2(a, b);
            Phi[k] = {a, b};
        }
        for (auto& z : phi.amps) z /= std::sqrt(norm_sq(phi));
        for (auto& z : Phi.amps) z /= std::sqrt(norm_sq(Phi));
        const auto& pb = pool[static_cast<std::size_t>(rng3.next() % pool.size())];
        const bool fac = product_mu_criterion(phi, Phi, pb, Tolerance(1e-8)).pass;
        const bool dir = product_mu_direct(phi, Phi, pb, Tolerance(1e-8)).pass;
        if (fac != dir) ++disagreements;
    }
    o.expect(disagreements == 0, std::to_string(disagreements) + " criterion disagreements");

    // and on engineered unbiased pairs both must say yes
    const auto p0 = pair_family<cx>(PairId::P0);
    const auto qubit_y = mu_basis({2, 'y'});
    for (char tag : {'y', 'w'})
        for (const auto& col : mu_basis({3, tag}).columns)
            for (const auto& q : qubit_y.columns) {
                const bool fac = product_mu_criterion(q, col, p0[0], Tolerance(1e-8)).pass &&
                                 product_mu_criterion(q, col, p0[1], Tolerance(1e-8)).pass;
                const bool dir = product_mu_direct(q, col, p0[0], Tolerance(1e-8)).pass &&
                                 product_mu_direct(q, col, p0[1], Tolerance(1e-8)).pass;
                o.expect(fac && dir, "engineered unbiased pair rejected");
            }
    return o;
}

struct Criterion {
    const char* name;
    double budget_seconds;
    std::function<Outcome()> body;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {"construction exactness", 1.0, exactness},
        {"triple validity", 1.0, triples},
        {"qutrit enumeration", 30.0, enumeration},
        {"candidate violation", 1.0, candidates},
        {"negative extension search", 120.0, negative_search},
        {"48-cluster reproduction", 600.0, forty_eight},
        {"constellation exclusion", 60.0, constellations},
        {"numerical hygiene", 30.0, hygiene},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& c = criteria[i];
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.body();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > c.budget_seconds) o.fail("over budget");
        std::printf("[%zu/%zu] %-28s %s  (%.3f s, budget %.0f s)%s%s\n", i + 1, criteria.size(), c.name,
                    o.pass ? "PASS" : "FAIL", secs, c.budget_seconds, o.detail.empty() ? "" : "  -- ",
                    o.detail.c_str());
        if (!o.pass) ++failures;
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
