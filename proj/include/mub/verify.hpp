#pragma once

// Orthonormality / unbiasedness predicates with worst-offender reports.
// Float mode compares deviations against a tolerance; exact mode decides
// each condition in the cyclotomic ring, so a pass means the deviation is
// identically zero (epsilon is not consulted).

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "mub/constructions.hpp"
#include "mub/linalg.hpp"

namespace mub {

struct Tolerance {
    double epsilon = 1e-10;
    Tolerance() = default;
    explicit Tolerance(double e) : epsilon(e) {
        if (!(e > 0.0)) throw std::invalid_argument("Tolerance: epsilon must be positive");
    }
};

enum class Mode { Float, Exact };

// Worst condition found by a check.  The offender quad is
// (first basis, its column, second basis, its column); checks that involve a
// single basis or a single vector reuse the slots and say so in note.
struct MuReport {
    bool pass = false;
    double worst_deviation = 0.0;
    std::optional<std::array<int, 4>> offender;
    Mode mode = Mode::Float;
    std::string note;
};

namespace detail {

template <class S>
struct DeviationAccum {
    static constexpr bool exact = std::is_same_v<S, Cyclotomic>;
    double worst = 0.0;
    bool all_zero = true;
    std::optional<std::array<int, 4>> off;

    void add(double magnitude, bool exactly_zero, std::array<int, 4> where) {
        if constexpr (exact) {
            if (!exactly_zero) all_zero = false;
        }
        if (magnitude > worst || !off) {
            if (magnitude > worst) {
                worst = magnitude;
                off = where;
            } else if (!off) {
                off = where;
            }
        }
    }

    MuReport report(const Tolerance& tol, std::string note) const {
        MuReport r;
        r.mode = exact ? Mode::Exact : Mode::Float;
        r.pass = exact ? all_zero : (worst <= tol.epsilon);
        r.worst_deviation = worst;
        r.offender = off;
        r.note = std::move(note);
        return r;
    }
};

inline void overlap_deviation(const VecT<cx>& u, const VecT<cx>& v, double target_sq,
                              double& magnitude, bool& exactly_zero) {
    const double d = std::norm(inner(u, v)) - target_sq;
    magnitude = std::abs(d);
    exactly_zero = (d == 0.0);
}

inline void overlap_deviation(const ExactVector& u, const ExactVector& v, double target_sq,
                              double& magnitude, bool& exactly_zero) {
    std::int64_t den = std::llround(1.0 / target_sq);
    const Cyclotomic d = abs_sq_value(inner(u, v)) - Cyclotomic::rational(1, den);
    exactly_zero = d.is_zero();
    magnitude = exactly_zero ? 0.0 : std::abs(d.to_complex());
}

inline void orth_deviation(const VecT<cx>& u, const VecT<cx>& v, bool diagonal,
                           double& magnitude, bool& exactly_zero) {
    const cx d = inner(u, v) - (diagonal ? cx(1, 0) : cx(0, 0));
    magnitude = std::abs(d);
    exactly_zero = (d == cx(0, 0));
}

inline void orth_deviation(const ExactVector& u, const ExactVector& v, bool diagonal,
                           double& magnitude, bool& exactly_zero) {
    const Cyclotomic d = inner(u, v) - (diagonal ? Cyclotomic::one() : Cyclotomic::zero());
    exactly_zero = d.is_zero();
    magnitude = exactly_zero ? 0.0 : std::abs(d.to_complex());
}

}  // namespace detail

template <class S>
MuReport is_orthonormal(const BasisT<S>& b, const Tolerance& tol = {}) {
    detail::DeviationAccum<S> acc;
    const int n = static_cast<int>(b.columns.size());
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double mag;
            bool zero;
            detail::orth_deviation(b.columns[static_cast<std::size_t>(i)], b.columns[static_cast<std::size_t>(j)], i == j, mag, zero);
            acc.add(mag, zero, {0, i, 0, j});
        }
    return acc.report(tol, "orthonormality; offender columns in slots 1 and 3");
}

template <class S>
MuReport are_mu(const BasisT<S>& b1, const BasisT<S>& b2, const Tolerance& tol = {}) {
    if (b1.dim != b2.dim) throw std::invalid_argument("are_mu: dimension mismatch");
    const double target = 1.0 / b1.dim;
    detail::DeviationAccum<S> acc;
    for (int i = 0; i < static_cast<int>(b1.columns.size()); ++i)
        for (int j = 0; j < static_cast<int>(b2.columns.size()); ++j) {
            double mag;
            bool zero;
            detail::overlap_deviation(b1.columns[static_cast<std::size_t>(i)], b2.columns[static_cast<std::size_t>(j)], target, mag, zero);
            acc.add(mag, zero, {0, i, 1, j});
        }
    return acc.report(tol, "unbiasedness between two bases");
}

template <class S>
MuReport vector_mu_to_bases(const VecT<S>& psi, const std::vector<BasisT<S>>& bases, const Tolerance& tol = {}) {
    detail::DeviationAccum<S> acc;
    for (int b = 0; b < static_cast<int>(bases.size()); ++b) {
        if (bases[static_cast<std::size_t>(b)].dim != psi.dim())
            throw std::invalid_argument("vector_mu_to_bases: dimension mismatch");
        const double target = 1.0 / psi.dim();
        for (int c = 0; c < static_cast<int>(bases[static_cast<std::size_t>(b)].columns.size()); ++c) {
            double mag;
            bool zero;
            detail::overlap_deviation(bases[static_cast<std::size_t>(b)].columns[static_cast<std::size_t>(c)], psi, target, mag, zero);
            acc.add(mag, zero, {b, c, -1, -1});
        }
    }
    return acc.report(tol, "vector vs basis columns; offender = (basis, column, -1, -1)");
}

// Lemma-style factorized criterion: a product state phi x Phi is MU to a
// product basis iff every qubit factor overlap is 1/2 and every qutrit
// factor overlap is 1/3 in squared modulus... per column the factors can
// trade off, so the op also cross-checks the direct dim-6 criterion and
// fails with a note if the two verdicts ever disagree at this tolerance.
template <class S>
MuReport product_mu_criterion(const VecT<S>& phi, const VecT<S>& Phi, const ProductBasisT<S>& pb,
                              const Tolerance& tol = {}) {
    if (phi.dim() != 2 || Phi.dim() != 3) throw std::invalid_argument("product_mu_criterion: factor dims must be 2 and 3");
    detail::DeviationAccum<S> acc;
    for (int i = 0; i < 6; ++i) {
        const auto& col = pb.cols[static_cast<std::size_t>(i)];
        if (col.qubit.dim() != 2 || col.qutrit.dim() != 3 || col.qubit_label.empty() || col.qutrit_label.empty())
            throw std::invalid_argument("product_mu_criterion: product basis lacks factor data");
        double mag;
        bool zero;
        detail::overlap_deviation(col.qubit, phi, 0.5, mag, zero);
        acc.add(mag, zero, {0, i, 0, 0});
        detail::overlap_deviation(col.qutrit, Phi, 1.0 / 3.0, mag, zero);
        acc.add(mag, zero, {0, i, 1, 0});
    }
    MuReport r = acc.report(tol, "factorized product criterion; offender = (0, column, factor, 0)");

    detail::DeviationAccum<S> direct;
    const VecT<S> psi6 = tensor(phi, Phi);
    for (int i = 0; i < 6; ++i) {
        double mag;
        bool zero;
        detail::overlap_deviation(pb.cols[static_cast<std::size_t>(i)].column, psi6, 1.0 / 6.0, mag, zero);
        direct.add(mag, zero, {0, i, -1, -1});
    }
    const MuReport rd = direct.report(tol, "");
    if (rd.pass != r.pass) {
        r.pass = false;
        r.note += "; factorized and direct verdicts disagree (direct worst " + std::to_string(rd.worst_deviation) + ")";
    }
    return r;
}

// Direct dim-6 unbiasedness of a product state against a product basis;
// the factorized criterion above must agree with this verdict.
template <class S>
MuReport product_mu_direct(const VecT<S>& phi, const VecT<S>& Phi, const ProductBasisT<S>& pb,
                           const Tolerance& tol = {}) {
    const VecT<S> psi6 = tensor(phi, Phi);
    std::vector<BasisT<S>> bs{pb.as_basis()};
    return vector_mu_to_bases(psi6, bs, tol);
}

namespace detail {

inline void merge_worst(MuReport& agg, const MuReport& part, int tag) {
    if (part.worst_deviation > agg.worst_deviation || !agg.offender) {
        agg.worst_deviation = part.worst_deviation;
        if (part.offender) {
            agg.offender = part.offender;
            (*agg.offender)[0] = tag;
        }
    }
    agg.pass = agg.pass && part.pass;
}

}  // namespace detail

// Full triple validation: three orthonormal bases, pairwise MU (108 cross
// conditions in dimension six).
template <class S>
MuReport validate_triple(const std::array<ProductBasisT<S>, 3>& t, const Tolerance& tol = {}) {
    MuReport agg;
    agg.pass = true;
    agg.mode = std::is_same_v<S, Cyclotomic> ? Mode::Exact : Mode::Float;
    agg.note = "triple validation; offender slot 0 = subcheck index";
    int tag = 0;
    std::array<BasisT<S>, 3> bs{t[0].as_basis(), t[1].as_basis(), t[2].as_basis()};
    for (int i = 0; i < 3; ++i) detail::merge_worst(agg, is_orthonormal(bs[static_cast<std::size_t>(i)], tol), tag++);
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            detail::merge_worst(agg, are_mu(bs[static_cast<std::size_t>(i)], bs[static_cast<std::size_t>(j)], tol), tag++);
    return agg;
}

template <class S>
MuReport validate_pair(const std::array<ProductBasisT<S>, 2>& p, const Tolerance& tol = {}) {
    MuReport agg;
    agg.pass = true;
    agg.mode = std::is_same_v<S, Cyclotomic> ? Mode::Exact : Mode::Float;
    agg.note = "pair validation; offender slot 0 = subcheck index";
    int tag = 0;
    std::array<BasisT<S>, 2> bs{p[0].as_basis(), p[1].as_basis()};
    for (int i = 0; i < 2; ++i) detail::merge_worst(agg, is_orthonormal(bs[static_cast<std::size_t>(i)], tol), tag++);
    detail::merge_worst(agg, are_mu(bs[0], bs[1], tol), tag++);
    return agg;
}

// {5,5,4} consistency: both bases orthonormal and MU, the four extra states
// orthonormal, every extra state MU to both bases.
template <class S>
MuReport validate_constellation(const Constellation554T<S>& c, const Tolerance& tol = {}) {
    MuReport agg;
    agg.pass = true;
    agg.mode = std::is_same_v<S, Cyclotomic> ? Mode::Exact : Mode::Float;
    agg.note = "constellation validation; offender slot 0 = subcheck index";
    int tag = 0;
    detail::merge_worst(agg, validate_pair(c.bases, tol), tag++);
    BasisT<S> extra;
    extra.dim = 6;
    extra.provenance = "custom";
    for (const auto& e : c.extra) extra.columns.push_back(e.column);
    detail::merge_worst(agg, is_orthonormal(extra, tol), tag++);
    std::vector<BasisT<S>> bs{c.bases[0].as_basis(), c.bases[1].as_basis()};
    for (const auto& e : c.extra) detail::merge_worst(agg, vector_mu_to_bases(e.column, bs, tol), tag++);
    return agg;
}

// Schmidt test for product form; float amplitudes only.
inline bool is_product_state(const StateVector& psi, double tol = 1e-10) {
    return schmidt(psi).lambda2 < tol;
}

}  // namespace mub
