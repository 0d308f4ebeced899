#pragma once

// Independent numerical oracle: multi-start projected local descent for unit
// vectors in C^6 satisfying |<b_i|psi>|^2 = 1/6 against a fixed list of
// constraint columns.  Restarts are seeded by a counter-based generator, so
// results are identical for any thread count; successes are canonicalized
// and clustered up to global phase.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <thread>
#include <vector>

#include "mub/linalg.hpp"
#include "mub/verify.hpp"

namespace mub {

struct SearchConfig {
    int restarts = 1000;
    std::uint64_t seed = 1;
    int max_iterations = 2000;
    double grad_tol = 1e-12;          // stop when the projected gradient is this small
    double success_residual = 1e-16;  // objective value below which a restart counts as a solution
    double cluster_distance = 1e-6;   // single-linkage threshold on canonical forms
    bool keep_raw = false;            // retain every converged restart, not just representatives

    void validate() const {
        if (restarts <= 0 || max_iterations <= 0 || !(grad_tol > 0) || !(success_residual > 0) ||
            !(cluster_distance > 0))
            throw std::invalid_argument("SearchConfig: all fields must be positive");
    }
};

struct Solution {
    StateVector psi;  // canonical form
    double residual = 0.0;
    int restart_index = -1;
    int cluster_size = 1;
};

struct SearchResult {
    std::vector<Solution> solutions;  // one representative per cluster, ordered by restart index
    std::vector<Solution> raw;        // every converged restart, when config.keep_raw is set
    int cluster_count = 0;
    int success_count = 0;  // raw converged restarts before clustering
    double best_failed_residual = std::numeric_limits<double>::infinity();
    SearchConfig config;
    double wall_seconds = 0.0;
};

namespace detail {

// splitmix64 finalizer over an incrementing counter; streams are keyed by
// (seed, restart index) so any partition of restarts over threads produces
// the same draws.
struct CounterRng {
    std::uint64_t x;

    CounterRng(std::uint64_t seed, std::uint64_t stream) {
        x = seed ^ (0x9E3779B97F4A7C15ULL * (stream + 0x632BE59BD9B4E019ULL));
        next();  // decouple nearby streams
    }

    std::uint64_t next() {
        x += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    double uniform() {  // [0, 1)
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    // Box-Muller pair
    void normal2(double& a, double& b) {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        a = r * std::cos(2.0 * kPi * u2);
        b = r * std::sin(2.0 * kPi * u2);
    }
};

using Reals12 = std::array<double, 12>;

inline StateVector decode(const Reals12& x) {
    StateVector v(6);
    for (int k = 0; k < 6; ++k) v[k] = {x[static_cast<std::size_t>(2 * k)], x[static_cast<std::size_t>(2 * k + 1)]};
    return v;
}

inline void renormalize(Reals12& x) {
    double n = 0.0;
    for (double t : x) n += t * t;
    n = std::sqrt(n);
    if (n <= 0.0) {
        x[0] = 1.0;
        n = 1.0;
    }
    for (double& t : x) t /= n;
}

}  // namespace detail

struct ObjectiveEval {
    double value = 0.0;
    std::array<double, 12> gradient{};  // projected onto the tangent of the unit sphere
};

// f(psi) = sum_i (|<b_i|psi>|^2 - 1/6)^2 for a unit psi; the gradient is the
// analytic derivative of f(x/|x|) in the 12 real coordinates.
inline ObjectiveEval objective(const StateVector& psi, const std::vector<StateVector>& constraints) {
    if (psi.dim() != 6) throw std::invalid_argument("objective: expected dim 6");
    ObjectiveEval out;
    std::array<cx, 6> H{};
    for (const auto& b : constraints) {
        if (b.dim() != 6) throw std::invalid_argument("objective: constraint column of wrong dimension");
        const cx o = inner(b, psi);
        const double d = std::norm(o) - 1.0 / 6.0;
        out.value += d * d;
        for (int k = 0; k < 6; ++k) H[static_cast<std::size_t>(k)] += 4.0 * d * o * b[k];
    }
    detail::Reals12 g{}, x{};
    for (int k = 0; k < 6; ++k) {
        g[static_cast<std::size_t>(2 * k)] = H[static_cast<std::size_t>(k)].real();
        g[static_cast<std::size_t>(2 * k + 1)] = H[static_cast<std::size_t>(k)].imag();
        x[static_cast<std::size_t>(2 * k)] = psi[k].real();
        x[static_cast<std::size_t>(2 * k + 1)] = psi[k].imag();
    }
    double gx = 0.0;
    for (int i = 0; i < 12; ++i) gx += g[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
    for (int i = 0; i < 12; ++i)
        out.gradient[static_cast<std::size_t>(i)] = g[static_cast<std::size_t>(i)] - gx * x[static_cast<std::size_t>(i)];
    return out;
}

namespace detail {

struct RestartOutcome {
    bool success = false;
    double residual = 0.0;
    StateVector psi;
};

// Spectral projected gradient with Barzilai-Borwein steps and a nonmonotone
// backtracking line search; adequate for this smooth 12-parameter objective.
inline RestartOutcome run_restart(const std::vector<StateVector>& cols, const SearchConfig& cfg, int restart) {
    CounterRng rng(cfg.seed, static_cast<std::uint64_t>(restart));
    Reals12 x{};
    for (int k = 0; k < 12; k += 2) {
        double a, b;
        rng.normal2(a, b);
        x[static_cast<std::size_t>(k)] = a;
        x[static_cast<std::size_t>(k + 1)] = b;
    }
    renormalize(x);

    ObjectiveEval cur = objective(decode(x), cols);
    double alpha = 1.0;
    std::array<double, 10> recent;
    recent.fill(cur.value);
    int ri = 0;

    for (int it = 0; it < cfg.max_iterations; ++it) {
        double gn2 = 0.0;
        for (double t : cur.gradient) gn2 += t * t;
        if (std::sqrt(gn2) < cfg.grad_tol || cur.value < cfg.success_residual * 1e-4) break;

        const double fref = *std::max_element(recent.begin(), recent.end());
        double step = std::clamp(alpha, 1e-12, 1e8);
        Reals12 xn{};
        ObjectiveEval nxt;
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            for (int i = 0; i < 12; ++i)
                xn[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] - step * cur.gradient[static_cast<std::size_t>(i)];
            renormalize(xn);
            nxt = objective(decode(xn), cols);
            if (nxt.value <= fref - 1e-4 * step * gn2 || nxt.value < cur.value) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;

        // BB1 step from the accepted move
        double ss = 0.0, sy = 0.0;
        for (int i = 0; i < 12; ++i) {
            const double s = xn[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(i)];
            const double y = nxt.gradient[static_cast<std::size_t>(i)] - cur.gradient[static_cast<std::size_t>(i)];
            ss += s * s;
            sy += s * y;
        }
        alpha = (sy > 1e-300) ? ss / sy : step * 2.0;
        x = xn;
        cur = nxt;
        recent[static_cast<std::size_t>(ri++ % recent.size())] = cur.value;
    }

    RestartOutcome out;
    out.residual = cur.value;
    out.success = cur.value < cfg.success_residual;
    if (out.success) out.psi = canonicalize(decode(x));
    return out;
}

}  // namespace detail

// Single-linkage clusters of canonical solutions.  Sorting by one real
// coordinate bounds the pairs that need a full distance check, which keeps
// the pass near-linear when clusters are tight and far apart.
inline std::vector<std::vector<int>> cluster_solutions(const std::vector<Solution>& sols, double threshold) {
    const int n = static_cast<int>(sols.size());
    std::vector<int> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int a) {
        while (parent[static_cast<std::size_t>(a)] != a) {
            parent[static_cast<std::size_t>(a)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
            a = parent[static_cast<std::size_t>(a)];
        }
        return a;
    };
    auto unite = [&](int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    };

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    auto key = [&](int i) { return sols[static_cast<std::size_t>(i)].psi[1].real(); };
    std::sort(order.begin(), order.end(), [&](int a, int b) { return key(a) < key(b); });

    for (int oi = 0; oi < n; ++oi) {
        for (int oj = oi + 1; oj < n; ++oj) {
            if (key(order[static_cast<std::size_t>(oj)]) - key(order[static_cast<std::size_t>(oi)]) > threshold) break;
            const int a = order[static_cast<std::size_t>(oi)], b = order[static_cast<std::size_t>(oj)];
            double d2 = 0.0;
            for (int k = 0; k < 6; ++k) d2 += std::norm(sols[static_cast<std::size_t>(a)].psi[k] - sols[static_cast<std::size_t>(b)].psi[k]);
            if (std::sqrt(d2) <= threshold) unite(a, b);
        }
    }

    std::vector<std::vector<int>> groups;
    std::vector<int> root_to_group(static_cast<std::size_t>(n), -1);
    for (int i = 0; i < n; ++i) {
        const int r = find(i);
        if (root_to_group[static_cast<std::size_t>(r)] < 0) {
            root_to_group[static_cast<std::size_t>(r)] = static_cast<int>(groups.size());
            groups.emplace_back();
        }
        groups[static_cast<std::size_t>(root_to_group[static_cast<std::size_t>(r)])].push_back(i);
    }
    return groups;
}

// Multi-start feasibility search.  Deterministic for a fixed seed and config
// regardless of `threads`; solutions are cluster representatives (lowest
// residual, ties to the lowest restart index).
inline SearchResult search(const std::vector<StateVector>& constraints, const SearchConfig& cfg, int threads = 1) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    SearchResult res;
    res.config = cfg;

    threads = std::max(1, threads);
    std::vector<std::vector<detail::RestartOutcome>> buckets(static_cast<std::size_t>(threads));
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            auto& mine = buckets[static_cast<std::size_t>(t)];
            for (int r = t; r < cfg.restarts; r += threads) {
                mine.push_back(detail::run_restart(constraints, cfg, r));
            }
        });
    }
    for (auto& th : pool) th.join();

    std::vector<Solution> successes;
    for (int r = 0; r < cfg.restarts; ++r) {
        const int t = r % threads;
        const int slot = r / threads;
        const auto& out = buckets[static_cast<std::size_t>(t)][static_cast<std::size_t>(slot)];
        if (out.success) {
            successes.push_back({out.psi, out.residual, r, 1});
            ++res.success_count;
        } else {
            res.best_failed_residual = std::min(res.best_failed_residual, out.residual);
        }
    }

    const auto groups = cluster_solutions(successes, cfg.cluster_distance);
    for (const auto& g : groups) {
        int best = g.front();
        for (int i : g) {
            const auto& a = successes[static_cast<std::size_t>(i)];
            const auto& b = successes[static_cast<std::size_t>(best)];
            if (a.residual < b.residual || (a.residual == b.residual && a.restart_index < b.restart_index)) best = i;
        }
        Solution rep = successes[static_cast<std::size_t>(best)];
        rep.cluster_size = static_cast<int>(g.size());
        res.solutions.push_back(std::move(rep));
    }
    std::sort(res.solutions.begin(), res.solutions.end(),
              [](const Solution& a, const Solution& b) { return a.restart_index < b.restart_index; });
    res.cluster_count = static_cast<int>(res.solutions.size());
    if (cfg.keep_raw) res.raw = std::move(successes);

    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

// Constraint columns of a list of product bases, flattened in order.
template <std::size_t N>
std::vector<StateVector> constraint_columns(const std::array<ProductBasis, N>& bases) {
    std::vector<StateVector> cols;
    for (const auto& pb : bases)
        for (const auto& c : pb.cols) cols.push_back(c.column);
    return cols;
}

}  // namespace mub
