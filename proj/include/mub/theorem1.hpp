#pragma once

// Mechanical no-go argument for the product triples: any dim-6 vector that is
// unbiased to a whole triple would need Schmidt coefficients (1/sqrt2, 1/sqrt2),
// qutrit factors unbiased to both the computational and Fourier bases, and a
// phase sequence that cannot satisfy the remaining conditions.  Each step here
// is checked numerically rather than assumed.

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "mub/constructions.hpp"
#include "mub/search.hpp"
#include "mub/verify.hpp"

namespace mub {

// Reduced qubit state of a dim-6 vector plus its Schmidt data.
struct Step1Result {
    DensityMatrix rho;
    BlochVector bloch;
    SchmidtDecomposition schmidt;
    bool maximally_entangled = false;  // Bloch vector of the reduced state vanishes
};

inline Step1Result step1_reduced_state(const StateVector& psi, double tol = 1e-10) {
    if (psi.dim() != 6) throw std::invalid_argument("step1_reduced_state: expected dim 6");
    Step1Result r;
    r.rho = partial_trace(psi, Keep::A);
    r.bloch = bloch(r.rho);
    r.schmidt = schmidt(psi);
    r.maximally_entangled = r.bloch.norm() < tol;
    return r;
}

namespace detail {

// t_K(a, b) = <K_x | (1, e^{ia}, e^{ib})/sqrt3 >, the Fourier-row overlaps of a
// flat qutrit vector.  All computational-basis conditions hold automatically.
inline std::array<cx, 3> fourier_overlaps(double a, double b) {
    const cx ea = std::polar(1.0, a), eb = std::polar(1.0, b);
    std::array<cx, 3> t{};
    for (int K = 0; K < 3; ++K) {
        const cx w1 = std::polar(1.0, -2.0 * kPi * K / 3.0);
        const cx w2 = std::polar(1.0, -4.0 * kPi * K / 3.0);
        t[static_cast<std::size_t>(K)] = (1.0 + w1 * ea + w2 * eb) / 3.0;
    }
    return t;
}

inline double flat_residual(double a, double b) {
    const auto t = fourier_overlaps(a, b);
    double worst = 0.0;
    for (const auto& tk : t) worst = std::max(worst, std::abs(std::norm(tk) - 1.0 / 3.0));
    return worst;
}

// Gauss-Newton on the three Fourier conditions (two independent); quadratic
// convergence from any grid point near a solution.
inline bool refine_flat(double& a, double& b, double target) {
    for (int it = 0; it < 80; ++it) {
        const auto t = fourier_overlaps(a, b);
        double r[3], J[3][2];
        double worst = 0.0;
        for (int K = 0; K < 3; ++K) {
            const auto& tk = t[static_cast<std::size_t>(K)];
            r[K] = std::norm(tk) - 1.0 / 3.0;
            worst = std::max(worst, std::abs(r[K]));
            const cx da = cx(0, 1) * std::polar(1.0 / 3.0, a - 2.0 * kPi * K / 3.0);
            const cx db = cx(0, 1) * std::polar(1.0 / 3.0, b - 4.0 * kPi * K / 3.0);
            J[K][0] = 2.0 * std::real(std::conj(tk) * da);
            J[K][1] = 2.0 * std::real(std::conj(tk) * db);
        }
        if (worst < target) return true;
        double jtj[2][2] = {{0, 0}, {0, 0}}, jtr[2] = {0, 0};
        for (int K = 0; K < 3; ++K) {
            jtj[0][0] += J[K][0] * J[K][0];
            jtj[0][1] += J[K][0] * J[K][1];
            jtj[1][1] += J[K][1] * J[K][1];
            jtr[0] += J[K][0] * r[K];
            jtr[1] += J[K][1] * r[K];
        }
        jtj[1][0] = jtj[0][1];
        const double det = jtj[0][0] * jtj[1][1] - jtj[0][1] * jtj[1][0];
        if (std::abs(det) < 1e-18) return false;
        a -= (jtj[1][1] * jtr[0] - jtj[0][1] * jtr[1]) / det;
        b -= (-jtj[1][0] * jtr[0] + jtj[0][0] * jtr[1]) / det;
    }
    return flat_residual(a, b) < target;
}

inline StateVector flat_vector(double a, double b) {
    const double s = 1.0 / std::sqrt(3.0);
    return StateVector{cx(s, 0), std::polar(s, a), std::polar(s, b)};
}

}  // namespace detail

// All qutrit vectors unbiased to both the computational and Fourier bases,
// found by scanning the phase torus of flat vectors and refining every local
// minimum of the worst-condition residual.  Returns canonical representatives.
inline std::vector<StateVector> enumerate_c3_mu_to_zx(int resolution = 720, double target_residual = 1e-12) {
    if (resolution < 36) throw std::invalid_argument("enumerate_c3_mu_to_zx: resolution too coarse");
    const double step = 2.0 * kPi / resolution;
    const auto n = static_cast<std::size_t>(resolution);

    std::vector<double> grid(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            grid[i * n + j] = detail::flat_residual(static_cast<double>(i) * step, static_cast<double>(j) * step);

    std::vector<StateVector> reps;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double v = grid[i * n + j];
            if (v > 0.05) continue;
            bool is_min = true;
            for (int di = -1; di <= 1 && is_min; ++di)
                for (int dj = -1; dj <= 1; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    const std::size_t ii = (i + n + static_cast<std::size_t>(di + 1) - 1) % n;
                    const std::size_t jj = (j + n + static_cast<std::size_t>(dj + 1) - 1) % n;
                    if (grid[ii * n + jj] < v) {
                        is_min = false;
                        break;
                    }
                }
            if (!is_min) continue;

            double a = static_cast<double>(i) * step, b = static_cast<double>(j) * step;
            if (!detail::refine_flat(a, b, target_residual))
                throw std::runtime_error("enumerate_c3_mu_to_zx: refinement did not converge");
            const StateVector cand = canonicalize(detail::flat_vector(a, b));
            bool fresh = true;
            for (const auto& r : reps)
                if (canonical_distance(r, cand) < 1e-6) {
                    fresh = false;
                    break;
                }
            if (fresh) reps.push_back(cand);
        }
    }

    std::sort(reps.begin(), reps.end(), [](const StateVector& x, const StateVector& y) {
        for (int k = 1; k < 3; ++k) {
            if (std::abs(x[k].real() - y[k].real()) > 1e-9) return x[k].real() < y[k].real();
            if (std::abs(x[k].imag() - y[k].imag()) > 1e-9) return x[k].imag() < y[k].imag();
        }
        return false;
    });
    return reps;
}

// One of the twelve half-and-half extension candidates: psi is built from a
// flat qutrit pair (h, h_perp) spanning the orthocomplement of h_pp inside one
// of the two special Hadamard bases.
struct Candidate {
    std::string id;            // e.g. "y:2:HA"
    char basis_tag = 'y';      // which Hadamard basis supplied the columns
    int hpp_index = 0;         // column excluded from the span
    bool h_first = true;       // HA keeps the lower remaining column index as h
    StateVector h, h_perp, h_pp;
    StateVector psi;           // (|0_z> h + |1_z> h_perp)/sqrt2
};

inline std::vector<Candidate> twelve_candidates() {
    std::vector<Candidate> out;
    const Basis qz = mu_basis({2, 'z'});
    for (char tag : {'y', 'w'}) {
        const Basis qb = mu_basis({3, tag});
        for (int p = 0; p < 3; ++p) {
            const int q = (p + 1) % 3, r = (p + 2) % 3;
            const int lo = std::min(q, r), hi = std::max(q, r);
            for (bool h_first : {true, false}) {
                Candidate c;
                c.basis_tag = tag;
                c.hpp_index = p;
                c.h_first = h_first;
                c.id = std::string(1, tag) + ":" + std::to_string(p) + ":" + (h_first ? "HA" : "AH");
                c.h = qb.columns[static_cast<std::size_t>(h_first ? lo : hi)];
                c.h_perp = qb.columns[static_cast<std::size_t>(h_first ? hi : lo)];
                c.h_pp = qb.columns[static_cast<std::size_t>(p)];
                StateVector psi(6);
                const StateVector t0 = tensor(qz.columns[0], c.h);
                const StateVector t1 = tensor(qz.columns[1], c.h_perp);
                for (int k = 0; k < 6; ++k) psi[k] = (t0[k] + t1[k]) / std::sqrt(2.0);
                c.psi = psi;
                out.push_back(std::move(c));
            }
        }
    }
    return out;
}

// Relative phase sequence of an orthogonal flat pair against a reference
// basis: angle_J = arg(<h|col_J><col_J|h_perp>).  For the pairs arising here
// the angles sit on a 2pi/3 lattice in one of the two orientations.
struct PhaseSequence {
    std::array<double, 3> angles{};  // in [0, 2pi)
    double offset = 0.0;
    int orientation = 1;   // angles ~ offset + orientation * 2pi J / 3
    double fit_error = 0.0;
    cx lattice_sum;        // sum_J e^{i angle_J}, zero on an exact lattice
};

inline PhaseSequence extract_phase_sequence(const StateVector& h, const StateVector& h_perp, const Basis& basis,
                                            double tol = 1e-8) {
    if (h.dim() != 3 || h_perp.dim() != 3 || basis.dim != 3)
        throw std::invalid_argument("extract_phase_sequence: expected qutrit inputs");
    if (std::abs(inner(h, h_perp)) > tol) throw std::invalid_argument("extract_phase_sequence: pair not orthogonal");

    PhaseSequence seq;
    for (int J = 0; J < 3; ++J) {
        const cx oh = inner(basis.columns[static_cast<std::size_t>(J)], h);
        const cx op = inner(basis.columns[static_cast<std::size_t>(J)], h_perp);
        if (std::abs(std::norm(oh) - 1.0 / 3.0) > tol || std::abs(std::norm(op) - 1.0 / 3.0) > tol)
            throw std::invalid_argument("extract_phase_sequence: pair not flat against the basis");
        const cx prod = std::conj(oh) * op;  // (1/3) e^{i angle_J}
        double ang = std::arg(prod);
        if (ang < 0) ang += 2.0 * kPi;
        seq.angles[static_cast<std::size_t>(J)] = ang;
        seq.lattice_sum += prod * 3.0;
    }

    double best_err = std::numeric_limits<double>::infinity();
    for (int orient : {1, -1}) {
        cx acc = 0;
        for (int J = 0; J < 3; ++J)
            acc += std::polar(1.0, seq.angles[static_cast<std::size_t>(J)] - orient * 2.0 * kPi * J / 3.0);
        const double offset = std::arg(acc);
        double err = 0.0;
        for (int J = 0; J < 3; ++J) {
            const double want = offset + orient * 2.0 * kPi * J / 3.0;
            const double d = std::remainder(seq.angles[static_cast<std::size_t>(J)] - want, 2.0 * kPi);
            err = std::max(err, std::abs(d));
        }
        if (err < best_err) {
            best_err = err;
            seq.orientation = orient;
            seq.offset = offset < 0 ? offset + 2.0 * kPi : offset;
        }
    }
    seq.fit_error = best_err;
    return seq;
}

// Residual surface over the qutrit Bloch-like parameters (theta, phi) of
// D = cos(theta/2) h + e^{i phi} sin(theta/2) h_perp against the computational
// basis.  The symmetric partner D_perp is checked alongside.
struct FeasibilityMap {
    int theta_points = 0, phi_points = 0;
    std::vector<double> residual;  // row-major, theta index major
    double min_interior = std::numeric_limits<double>::infinity();
    double min_boundary = std::numeric_limits<double>::infinity();

    double theta(int i) const { return kPi * i / (theta_points - 1); }
    double phi(int j) const { return 2.0 * kPi * j / phi_points; }
    double at(int i, int j) const { return residual[static_cast<std::size_t>(i) * static_cast<std::size_t>(phi_points) + static_cast<std::size_t>(j)]; }
};

inline FeasibilityMap scan_theta_phi(const Candidate& cand, int theta_points = 720, int phi_points = 720) {
    if (theta_points < 3 || phi_points < 3) throw std::invalid_argument("scan_theta_phi: grid too coarse");
    const Basis qz = mu_basis({3, 'z'});
    FeasibilityMap map;
    map.theta_points = theta_points;
    map.phi_points = phi_points;
    map.residual.resize(static_cast<std::size_t>(theta_points) * static_cast<std::size_t>(phi_points));

    for (int i = 0; i < theta_points; ++i) {
        const double th = map.theta(i);
        const double cth = std::cos(th / 2.0), sth = std::sin(th / 2.0);
        for (int j = 0; j < phi_points; ++j) {
            const cx ph = std::polar(1.0, map.phi(j));
            StateVector d(3), dp(3);
            for (int k = 0; k < 3; ++k) {
                d[k] = cth * cand.h[k] + ph * sth * cand.h_perp[k];
                dp[k] = -std::conj(ph) * sth * cand.h[k] + cth * cand.h_perp[k];
            }
            double worst = 0.0;
            for (int J = 0; J < 3; ++J) {
                const auto& col = qz.columns[static_cast<std::size_t>(J)];
                worst = std::max(worst, std::abs(std::norm(inner(col, d)) - 1.0 / 3.0));
                worst = std::max(worst, std::abs(std::norm(inner(col, dp)) - 1.0 / 3.0));
            }
            map.residual[static_cast<std::size_t>(i) * static_cast<std::size_t>(phi_points) + static_cast<std::size_t>(j)] = worst;
            if (i == 0 || i == theta_points - 1)
                map.min_boundary = std::min(map.min_boundary, worst);
            else
                map.min_interior = std::min(map.min_interior, worst);
        }
    }
    return map;
}

// Deviations of the candidate from unbiasedness on the x-row states
// |1_x> tensor |J_x|; the maximum is 1/6 for every candidate, which rules the
// candidate out.
struct ViolationReport {
    std::string candidate_id;
    std::array<double, 3> deviation{};       // rows <1_x, J_x|
    std::array<double, 3> row0_deviation{};  // rows <0_x, J_x|, same maximum
    double max_deviation = 0.0;
    bool violated = false;
    PhaseSequence nu;  // relative phases of (h, h_perp) against the Fourier basis
};

inline ViolationReport step3_violation(const Candidate& cand, double tol = 1e-10) {
    const Basis qx2 = mu_basis({2, 'x'});
    const Basis qx3 = mu_basis({3, 'x'});
    ViolationReport rep;
    rep.candidate_id = cand.id;
    for (int J = 0; J < 3; ++J) {
        const StateVector bra1 = tensor(qx2.columns[1], qx3.columns[static_cast<std::size_t>(J)]);
        const StateVector bra0 = tensor(qx2.columns[0], qx3.columns[static_cast<std::size_t>(J)]);
        rep.deviation[static_cast<std::size_t>(J)] = std::abs(std::norm(inner(bra1, cand.psi)) - 1.0 / 6.0);
        rep.row0_deviation[static_cast<std::size_t>(J)] = std::abs(std::norm(inner(bra0, cand.psi)) - 1.0 / 6.0);
        rep.max_deviation = std::max(rep.max_deviation, rep.deviation[static_cast<std::size_t>(J)]);
    }
    rep.violated = rep.max_deviation > tol;
    rep.nu = extract_phase_sequence(cand.h, cand.h_perp, qx3);
    return rep;
}

// End-to-end reproduction for one triple: construction validity, the finite
// enumeration steps, the twelve-candidate contradiction, and an independent
// multi-start search that must come back empty.
struct Theorem1Report {
    TripleId triple_id = TripleId::T0;
    MuReport triple_valid;
    std::size_t c3_count = 0;
    bool c3_matches_construction = false;
    std::vector<ViolationReport> violations;
    bool all_candidates_entangled = false;
    bool all_violated = false;
    SearchResult search;
    std::string verdict;  // "unextendible" when every gate holds
    bool pass = false;
};

inline Theorem1Report theorem1_pipeline(TripleId which, const SearchConfig& cfg = {}, int threads = 1,
                                        int resolution = 720) {
    Theorem1Report rep;
    rep.triple_id = which;
    const auto t = triple(which);
    rep.triple_valid = validate_triple(t, Tolerance(1e-12));

    const auto c3 = enumerate_c3_mu_to_zx(resolution);
    rep.c3_count = c3.size();
    const Basis hy = mu_basis({3, 'y'}), hw = mu_basis({3, 'w'});
    std::vector<StateVector> expect;
    for (const auto& c : hy.columns) expect.push_back(canonicalize(c));
    for (const auto& c : hw.columns) expect.push_back(canonicalize(c));
    rep.c3_matches_construction = c3.size() == expect.size();
    for (const auto& v : c3) {
        bool hit = false;
        for (const auto& e : expect)
            if (canonical_distance(v, e) < 1e-8) {
                hit = true;
                break;
            }
        if (!hit) rep.c3_matches_construction = false;
    }

    rep.all_candidates_entangled = true;
    rep.all_violated = true;
    for (const auto& cand : twelve_candidates()) {
        if (!step1_reduced_state(cand.psi).maximally_entangled) rep.all_candidates_entangled = false;
        auto v = step3_violation(cand);
        if (!v.violated) rep.all_violated = false;
        rep.violations.push_back(std::move(v));
    }

    rep.search = search(constraint_columns(t), cfg, threads);

    rep.pass = rep.triple_valid.pass && rep.c3_count == 6 && rep.c3_matches_construction &&
               rep.all_candidates_entangled && rep.all_violated && rep.search.solutions.empty();
    rep.verdict = rep.pass ? "unextendible" : "inconclusive";
    return rep;
}

}  // namespace mub
