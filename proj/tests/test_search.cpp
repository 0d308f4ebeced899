#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mub/search.hpp"
#include "mub/theorem1.hpp"

using namespace mub;

namespace {

std::array<double, 12> random_point(detail::CounterRng& rng) {
    std::array<double, 12> x{};
    for (int k = 0; k < 12; k += 2) rng.normal2(x[static_cast<std::size_t>(k)], x[static_cast<std::size_t>(k + 1)]);
    detail::renormalize(x);
    return x;
}

double value_at(const std::array<double, 12>& x, const std::vector<StateVector>& cols) {
    auto y = x;
    detail::renormalize(y);
    return objective(detail::decode(y), cols).value;
}

}  // namespace

TEST_CASE("objective value at a computational basis vector") {
    // e0 against the z x z basis columns: one overlap is 1, five are 0,
    // so f = (5/6)^2 + 5 (1/6)^2 = 5/6.
    const auto t = triple(TripleId::T0);
    std::vector<StateVector> cols;
    for (const auto& c : t[0].cols) cols.push_back(c.column);
    StateVector e0(6);
    e0[0] = 1.0;
    const auto ev = objective(e0, cols);
    REQUIRE(std::abs(ev.value - 5.0 / 6.0) < 1e-14);

    // any basis column of a full MU basis scores zero against the other bases
    std::vector<StateVector> others;
    for (const auto& c : t[1].cols) others.push_back(c.column);
    const auto ev2 = objective(t[0].cols[2].column, others);
    REQUIRE(ev2.value < 1e-28);
}

TEST_CASE("analytic gradient matches central finite differences") {
    const auto cols = constraint_columns(triple(TripleId::T0));
    detail::CounterRng rng(99, 1);
    const double h = 1e-6;
    for (int trial = 0; trial < 100; ++trial) {
        const auto x = random_point(rng);
        const auto ev = objective(detail::decode(x), cols);
        double num_norm = 0.0, diff_norm = 0.0;
        for (int k = 0; k < 12; ++k) {
            auto xp = x, xm = x;
            xp[static_cast<std::size_t>(k)] += h;
            xm[static_cast<std::size_t>(k)] -= h;
            const double fd = (value_at(xp, cols) - value_at(xm, cols)) / (2.0 * h);
            num_norm += fd * fd;
            const double d = fd - ev.gradient[static_cast<std::size_t>(k)];
            diff_norm += d * d;
        }
        REQUIRE(std::sqrt(diff_norm) / std::max(std::sqrt(num_norm), 1e-12) < 1e-6);
    }
}

TEST_CASE("gradient is tangent to the sphere") {
    const auto cols = constraint_columns(triple(TripleId::T1));
    detail::CounterRng rng(5, 2);
    for (int trial = 0; trial < 20; ++trial) {
        const auto x = random_point(rng);
        const auto ev = objective(detail::decode(x), cols);
        double dot = 0.0;
        for (int k = 0; k < 12; ++k) dot += ev.gradient[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(k)];
        REQUIRE(std::abs(dot) < 1e-12);
    }
}

TEST_CASE("counter rng streams are stable and decoupled") {
    detail::CounterRng a(7, 3), b(7, 3), c(7, 4);
    for (int i = 0; i < 100; ++i) REQUIRE(a.next() == b.next());
    bool differs = false;
    for (int i = 0; i < 10; ++i) differs = differs || (a.next() != c.next());
    REQUIRE(differs);
    detail::CounterRng u(123, 0);
    for (int i = 0; i < 1000; ++i) {
        const double v = u.uniform();
        REQUIRE(v >= 0.0);
        REQUIRE(v < 1.0);
    }
}

TEST_CASE("single-linkage clustering chains and separates") {
    auto mk = [](double x0) {
        Solution s;
        s.psi = StateVector(6);
        s.psi.amps[0] = 1.0;
        s.psi.amps[1] = x0;
        return s;
    };
    // chain: 0.0, 0.9e-3, 1.8e-3 with threshold 1e-3 merges all three;
    // 5.0e-3 stays separate.
    std::vector<Solution> sols{mk(0.0), mk(0.9e-3), mk(1.8e-3), mk(5.0e-3)};
    const auto groups = cluster_solutions(sols, 1e-3);
    REQUIRE(groups.size() == 2);
    const auto big = groups[0].size() == 3 ? groups[0] : groups[1];
    REQUIRE(big.size() == 3);
}

TEST_CASE("search over a product triple finds nothing") {
    SearchConfig cfg;
    cfg.restarts = 100;
    cfg.seed = 3;
    for (TripleId id : {TripleId::T0, TripleId::T1}) {
        const auto res = search(constraint_columns(triple(id)), cfg, 2);
        REQUIRE(res.solutions.empty());
        REQUIRE(res.cluster_count == 0);
        REQUIRE(res.success_count == 0);
        REQUIRE(res.best_failed_residual > 1e-3);
        REQUIRE(res.best_failed_residual < 1.0);
    }
}

TEST_CASE("search over the unparametrized pair finds the 48 solutions") {
    SearchConfig cfg;
    cfg.restarts = 1000;
    cfg.seed = 1;
    const auto cols = constraint_columns(pair_family<cx>(PairId::P0));
    REQUIRE(cols.size() == 12);
    const auto res = search(cols, cfg, 4);
    REQUIRE(res.cluster_count == 48);
    REQUIRE(res.success_count > 900);
    for (const auto& s : res.solutions) {
        REQUIRE(s.residual < cfg.success_residual);
        // every claimed solution re-verifies through the MU criterion
        std::vector<Basis> bases;
        for (const auto& pb : pair_family<cx>(PairId::P0)) bases.push_back(pb.as_basis());
        REQUIRE(vector_mu_to_bases(s.psi, bases, Tolerance(1e-8)).pass);
    }
    // representatives are far apart compared to the cluster threshold
    double min_dist = 1e9;
    for (std::size_t i = 0; i < res.solutions.size(); ++i)
        for (std::size_t j = i + 1; j < res.solutions.size(); ++j)
            min_dist = std::min(min_dist, canonical_distance(res.solutions[i].psi, res.solutions[j].psi));
    REQUIRE(min_dist > 0.9);
}

TEST_CASE("search is deterministic across thread counts") {
    SearchConfig cfg;
    cfg.restarts = 200;
    cfg.seed = 17;
    const auto cols = constraint_columns(pair_family<cx>(PairId::P0));
    const auto r1 = search(cols, cfg, 1);
    const auto r4 = search(cols, cfg, 4);
    REQUIRE(r1.cluster_count == r4.cluster_count);
    REQUIRE(r1.success_count == r4.success_count);
    REQUIRE(r1.best_failed_residual == r4.best_failed_residual);
    REQUIRE(r1.solutions.size() == r4.solutions.size());
    for (std::size_t i = 0; i < r1.solutions.size(); ++i) {
        REQUIRE(r1.solutions[i].restart_index == r4.solutions[i].restart_index);
        REQUIRE(r1.solutions[i].residual == r4.solutions[i].residual);
        for (int k = 0; k < 6; ++k) REQUIRE(r1.solutions[i].psi[k] == r4.solutions[i].psi[k]);
    }
}

TEST_CASE("config validation") {
    SearchConfig cfg;
    cfg.restarts = 0;
    REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = SearchConfig{};
    cfg.cluster_distance = 0.0;
    REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
}
