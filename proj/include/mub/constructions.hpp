#pragma once

// Concrete objects of the dimension-six MU landscape: shift/phase operators,
// the pinned qubit and qutrit MU bases, the product triples, the pair
// families, and the {5,5,4} constellations.  All constructors are templated
// over the amplitude type; the exact instantiation accepts only angles that
// are integer multiples of pi/12 (phases representable in the ring).

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "mub/linalg.hpp"

namespace mub {

inline constexpr double kPi = 3.14159265358979323846;

template <class S>
struct amp_traits;

template <>
struct amp_traits<cx> {
    static cx zero() { return {0.0, 0.0}; }
    static cx one() { return {1.0, 0.0}; }
    static cx from_int(std::int64_t n) { return {static_cast<double>(n), 0.0}; }
    static cx imag_unit() { return {0.0, 1.0}; }
    static cx omega(int d) { return std::polar(1.0, 2.0 * kPi / d); }
    static cx phase24(int k) { return std::polar(1.0, 2.0 * kPi * k / 24.0); }
    static cx phase(double a) { return std::polar(1.0, a); }
    static cx inv_sqrt2() { return {1.0 / std::sqrt(2.0), 0.0}; }
    static cx inv_sqrt3() { return {1.0 / std::sqrt(3.0), 0.0}; }
};

template <>
struct amp_traits<Cyclotomic> {
    static Cyclotomic zero() { return Cyclotomic::zero(); }
    static Cyclotomic one() { return Cyclotomic::one(); }
    static Cyclotomic from_int(std::int64_t n) { return Cyclotomic::integer(n); }
    static Cyclotomic imag_unit() { return Cyclotomic::imag_unit(); }
    static Cyclotomic omega(int d) {
        if (d == 2) return Cyclotomic::integer(-1);
        if (d == 3) return Cyclotomic::omega3();
        throw std::invalid_argument("omega: unsupported dimension in exact mode");
    }
    static Cyclotomic phase24(int k) { return Cyclotomic::root24(k); }
    static Cyclotomic phase(double a) {
        const double steps = a / (2.0 * kPi / 24.0);
        const double rounded = std::round(steps);
        if (std::abs(steps - rounded) > 1e-9)
            throw std::invalid_argument("exact mode requires angles that are multiples of pi/12");
        return Cyclotomic::root24(static_cast<int>(rounded));
    }
    static Cyclotomic inv_sqrt2() { return Cyclotomic::inv_sqrt2(); }
    static Cyclotomic inv_sqrt3() { return Cyclotomic::inv_sqrt3(); }
};

enum class HwWhich { X, Z, Y, W };

// Cyclic shift X|k> = |k+1 mod d>, phase Z|k> = omega^k |k>, Y = XZ, W = X^2 Z.
template <class S = cx>
MatT<S> hw_operator(int dim, HwWhich which) {
    using T = amp_traits<S>;
    if (dim != 2 && dim != 3) throw std::invalid_argument("hw_operator: dim must be 2 or 3");
    if (which == HwWhich::W && dim != 3) throw std::invalid_argument("hw_operator: W only exists for dim 3");
    MatT<S> X(dim, dim), Z(dim, dim);
    S wp = T::one();
    for (int k = 0; k < dim; ++k) {
        X.at((k + 1) % dim, k) = T::one();
        Z.at(k, k) = wp;
        wp = wp * T::omega(dim);
    }
    switch (which) {
        case HwWhich::X: return X;
        case HwWhich::Z: return Z;
        case HwWhich::Y: return matmul(X, Z);
        case HwWhich::W: return matmul(matmul(X, X), Z);
    }
    throw std::invalid_argument("hw_operator: bad selector");
}

struct BasisId {
    int dim = 3;
    char label = 'z';  // z|x|y for dim 2, z|x|y|w for dim 3
};

template <class S>
struct BasisT {
    int dim = 0;
    std::vector<VecT<S>> columns;
    std::string provenance;  // "z","x","y","w" or "custom"
};

using Basis = BasisT<cx>;
using ExactBasis = BasisT<Cyclotomic>;

inline Basis to_float(const ExactBasis& b) {
    Basis r;
    r.dim = b.dim;
    r.provenance = b.provenance;
    for (const auto& c : b.columns) r.columns.push_back(to_float(c));
    return r;
}

namespace detail {

template <class S>
S zero_minus(const S& v) {
    return amp_traits<S>::zero() - v;
}

// Pinned qutrit Hadamard matrices; rows indexed by z, columns are the states.
//   F   : 1 1 1 / 1 w w2 / 1 w2 w      (x basis)
//   Hy  : 1 1 1 / w w2 1 / w 1 w2     (y basis)
//   Hw  : 1 1 1 / w2 1 w / w2 w 1      (w basis)
// Hy's columns diagonalize X^2 Z and Hw's columns diagonalize XZ under the
// shift-up convention used here.
template <class S>
BasisT<S> qutrit_basis(char label) {
    using T = amp_traits<S>;
    BasisT<S> b;
    b.dim = 3;
    b.provenance = std::string(1, label);
    const S is3 = T::inv_sqrt3();
    const int pow_table_x[3][3] = {{0, 0, 0}, {0, 1, 2}, {0, 2, 1}};
    const int pow_table_y[3][3] = {{0, 0, 0}, {1, 2, 0}, {1, 0, 2}};
    const int pow_table_w[3][3] = {{0, 0, 0}, {2, 0, 1}, {2, 1, 0}};
    const int(*tab)[3] = nullptr;
    switch (label) {
        case 'z': {
            for (int c = 0; c < 3; ++c) {
                VecT<S> v(3);
                v[c] = T::one();
                b.columns.push_back(v);
            }
            return b;
        }
        case 'x': tab = pow_table_x; break;
        case 'y': tab = pow_table_y; break;
        case 'w': tab = pow_table_w; break;
        default: throw std::invalid_argument("qutrit_basis: bad label");
    }
    for (int c = 0; c < 3; ++c) {
        VecT<S> v(3);
        for (int r = 0; r < 3; ++r) {
            S p = T::one();
            for (int k = 0; k < tab[r][c]; ++k) p = p * T::omega(3);
            v[r] = is3 * p;
        }
        b.columns.push_back(v);
    }
    return b;
}

template <class S>
BasisT<S> qubit_basis(char label) {
    using T = amp_traits<S>;
    BasisT<S> b;
    b.dim = 2;
    b.provenance = std::string(1, label);
    const S is2 = T::inv_sqrt2();
    switch (label) {
        case 'z':
            b.columns.push_back(VecT<S>{T::one(), T::zero()});
            b.columns.push_back(VecT<S>{T::zero(), T::one()});
            break;
        case 'x':
            b.columns.push_back(VecT<S>{is2, is2});
            b.columns.push_back(VecT<S>{is2, zero_minus(is2)});
            break;
        case 'y':
            b.columns.push_back(VecT<S>{is2, T::imag_unit() * is2});
            b.columns.push_back(VecT<S>{is2, zero_minus(T::imag_unit() * is2)});
            break;
        default: throw std::invalid_argument("qubit_basis: bad label");
    }
    return b;
}

}  // namespace detail

template <class S = cx>
BasisT<S> mu_basis(BasisId id) {
    if (id.dim == 2) {
        if (id.label == 'w') throw std::invalid_argument("mu_basis: label w requires dim 3");
        return detail::qubit_basis<S>(id.label);
    }
    if (id.dim == 3) return detail::qutrit_basis<S>(id.label);
    throw std::invalid_argument("mu_basis: dim must be 2 or 3");
}

// The four pairwise MU qutrit bases: z, x, y, w.
template <class S = cx>
std::array<BasisT<S>, 4> complete_qutrit_set() {
    return {mu_basis<S>({3, 'z'}), mu_basis<S>({3, 'x'}), mu_basis<S>({3, 'y'}), mu_basis<S>({3, 'w'})};
}

template <class S>
struct ProductColumn {
    VecT<S> column;  // dim 6
    VecT<S> qubit;   // dim 2 factor
    VecT<S> qutrit;  // dim 3 factor
    std::string qubit_label, qutrit_label;
};

template <class S>
struct ProductBasisT {
    std::vector<ProductColumn<S>> cols;  // six entries
    bool indirect = false;
    int implied_column = -1;  // >= 0 when the column is determined by the others in {5,5,4} listings
    std::string name;

    int dim() const { return 6; }
    VecT<S> column(int i) const { return cols[static_cast<std::size_t>(i)].column; }
    BasisT<S> as_basis() const {
        BasisT<S> b;
        b.dim = 6;
        b.provenance = name.empty() ? std::string("custom") : name;
        for (const auto& c : cols) b.columns.push_back(c.column);
        return b;
    }
};

using ProductBasis = ProductBasisT<cx>;
using ExactProductBasis = ProductBasisT<Cyclotomic>;

inline ProductBasis to_float(const ExactProductBasis& pb) {
    ProductBasis r;
    r.indirect = pb.indirect;
    r.implied_column = pb.implied_column;
    r.name = pb.name;
    for (const auto& c : pb.cols)
        r.cols.push_back({to_float(c.column), to_float(c.qubit), to_float(c.qutrit), c.qubit_label, c.qutrit_label});
    return r;
}

namespace detail {

template <class S>
ProductColumn<S> product_column(const VecT<S>& q, const VecT<S>& Q, std::string ql, std::string Ql) {
    return {tensor(q, Q), q, Q, std::move(ql), std::move(Ql)};
}

template <class S>
ProductBasisT<S> direct_product_basis(const BasisT<S>& qb, const BasisT<S>& tb, const std::string& name) {
    ProductBasisT<S> pb;
    pb.name = name;
    for (int j = 0; j < 2; ++j)
        for (int J = 0; J < 3; ++J)
            pb.cols.push_back(product_column(qb.columns[static_cast<std::size_t>(j)], tb.columns[static_cast<std::size_t>(J)],
                                             std::to_string(j) + "_" + qb.provenance,
                                             std::to_string(J) + "_" + tb.provenance));
    pb.indirect = false;
    return pb;
}

}  // namespace detail

enum class TripleId { T0, T1 };

// T0 = {z x z, x x x, y x y}; T1 swaps the third basis for the indirect
// {|0_y,J_y>, |1_y,J_w>} family.
template <class S = cx>
std::array<ProductBasisT<S>, 3> triple(TripleId which) {
    const auto qz = mu_basis<S>({2, 'z'}), qx = mu_basis<S>({2, 'x'}), qy = mu_basis<S>({2, 'y'});
    const auto tz = mu_basis<S>({3, 'z'}), tx = mu_basis<S>({3, 'x'}), ty = mu_basis<S>({3, 'y'}), tw = mu_basis<S>({3, 'w'});
    std::array<ProductBasisT<S>, 3> t{detail::direct_product_basis(qz, tz, "zz"),
                                      detail::direct_product_basis(qx, tx, "xx"),
                                      detail::direct_product_basis(qy, ty, "yy")};
    if (which == TripleId::T1) {
        ProductBasisT<S> third;
        third.name = "y-mixed";
        for (int J = 0; J < 3; ++J)
            third.cols.push_back(detail::product_column(qy.columns[0], ty.columns[static_cast<std::size_t>(J)],
                                                        "0_y", std::to_string(J) + "_y"));
        for (int J = 0; J < 3; ++J)
            third.cols.push_back(detail::product_column(qy.columns[1], tw.columns[static_cast<std::size_t>(J)],
                                                        "1_y", std::to_string(J) + "_w"));
        third.indirect = true;
        t[2] = third;
    }
    return t;
}

struct ParamSet {
    double xi = 0.0, eta = 0.0;    // P1 phases, [0, 2pi)
    double zeta = 0.0, chi = 0.0;  // P3 qutrit phases, [0, 2pi)
    double sigma = kPi / 2, tau = kPi / 2;  // P3 qubit angles, (0, pi)
};

enum class PairId { P0, P1, P2, P3 };

namespace detail {

// r_angle |0_x> = (|0_z> + e^{ia}|1_z>)/sqrt2,  r_angle |1_x> = (|0_z> - e^{ia}|1_z>)/sqrt2.
template <class S>
VecT<S> rotated_qubit_x(int j, double angle) {
    using T = amp_traits<S>;
    const S is2 = T::inv_sqrt2();
    const S ph = T::phase(angle) * is2;
    return VecT<S>{is2, j == 0 ? ph : zero_minus(ph)};
}

}  // namespace detail

// The classified pair families.  P1 applies diag(1, e^{i xi}, e^{i eta})
// (z-basis) to the second x-block; P3 applies a diagonal phase in the qutrit
// x-basis to the second z-block and per-column qubit rotations on its own
// second member.  Unused parameters are ignored.
template <class S = cx>
std::array<ProductBasisT<S>, 2> pair_family(PairId which, const ParamSet& p = {}) {
    using T = amp_traits<S>;
    const auto qz = mu_basis<S>({2, 'z'}), qx = mu_basis<S>({2, 'x'}), qy = mu_basis<S>({2, 'y'});
    const auto tz = mu_basis<S>({3, 'z'}), tx = mu_basis<S>({3, 'x'}), ty = mu_basis<S>({3, 'y'}), tw = mu_basis<S>({3, 'w'});
    switch (which) {
        case PairId::P0:
            return {detail::direct_product_basis(qz, tz, "zz"), detail::direct_product_basis(qx, tx, "xx")};
        case PairId::P1: {
            ProductBasisT<S> second;
            second.name = "x-dephased";
            for (int J = 0; J < 3; ++J)
                second.cols.push_back(detail::product_column(qx.columns[0], tx.columns[static_cast<std::size_t>(J)],
                                                             "0_x", std::to_string(J) + "_x"));
            for (int J = 0; J < 3; ++J) {
                VecT<S> Q = tx.columns[static_cast<std::size_t>(J)];
                Q[1] = Q[1] * T::phase(p.xi);
                Q[2] = Q[2] * T::phase(p.eta);
                second.cols.push_back(detail::product_column(qx.columns[1], Q, "1_x", "R(" + std::to_string(J) + "_x)"));
            }
            second.indirect = !(p.xi == 0.0 && p.eta == 0.0);
            return {detail::direct_product_basis(qz, tz, "zz"), second};
        }
        case PairId::P2: {
            ProductBasisT<S> first, second;
            first.name = "zy-mixed";
            second.name = "xw-mixed";
            for (int J = 0; J < 3; ++J)
                first.cols.push_back(detail::product_column(qz.columns[0], tz.columns[static_cast<std::size_t>(J)],
                                                            "0_z", std::to_string(J) + "_z"));
            for (int J = 0; J < 3; ++J)
                first.cols.push_back(detail::product_column(qz.columns[1], ty.columns[static_cast<std::size_t>(J)],
                                                            "1_z", std::to_string(J) + "_y"));
            for (int J = 0; J < 3; ++J)
                second.cols.push_back(detail::product_column(qx.columns[0], tx.columns[static_cast<std::size_t>(J)],
                                                             "0_x", std::to_string(J) + "_x"));
            for (int J = 0; J < 3; ++J)
                second.cols.push_back(detail::product_column(qx.columns[1], tw.columns[static_cast<std::size_t>(J)],
                                                             "1_x", std::to_string(J) + "_w"));
            first.indirect = true;
            second.indirect = true;
            return {first, second};
        }
        case PairId::P3: {
            if (!(p.sigma > 0.0 && p.sigma < kPi) || !(p.tau > 0.0 && p.tau < kPi))
                throw std::invalid_argument("pair_family: sigma and tau must lie in (0, pi)");
            ProductBasisT<S> first, second;
            first.name = "z-dephased";
            second.name = "x-rotated";
            for (int J = 0; J < 3; ++J)
                first.cols.push_back(detail::product_column(qz.columns[0], tz.columns[static_cast<std::size_t>(J)],
                                                            "0_z", std::to_string(J) + "_z"));
            // Diagonal in the qutrit x basis with phases (1, e^{i zeta}, e^{i chi}).
            for (int J = 0; J < 3; ++J) {
                VecT<S> Q(3);
                const S phases[3] = {T::one(), T::phase(p.zeta), T::phase(p.chi)};
                for (int K = 0; K < 3; ++K) {
                    const VecT<S>& xk = tx.columns[static_cast<std::size_t>(K)];
                    const S coef = phases[K] * inner(xk, tz.columns[static_cast<std::size_t>(J)]);
                    for (int r = 0; r < 3; ++r) Q[r] += coef * xk[r];
                }
                first.cols.push_back(detail::product_column(qz.columns[1], Q, "1_z", "S(" + std::to_string(J) + "_z)"));
            }
            for (int j = 0; j < 2; ++j) {
                const std::string jl = std::to_string(j);
                second.cols.push_back(detail::product_column(qx.columns[static_cast<std::size_t>(j)],
                                                             tx.columns[0], jl + "_x", "0_x"));
                second.cols.push_back(detail::product_column(detail::rotated_qubit_x<S>(j, p.sigma),
                                                             tx.columns[1], "r_sigma(" + jl + "_x)", "1_x"));
                second.cols.push_back(detail::product_column(detail::rotated_qubit_x<S>(j, p.tau),
                                                             tx.columns[2], "r_tau(" + jl + "_x)", "2_x"));
            }
            first.indirect = !(p.zeta == 0.0 && p.chi == 0.0);
            second.indirect = true;
            return {first, second};
        }
    }
    throw std::invalid_argument("pair_family: bad selector");
}

enum class ConstellationShape { S1, S2 };

// Qutrit choices for the extra four states.  For S1 the A set is a full
// basis (three columns of a_basis) and B a single column; for S2 the A and
// B sets are two distinct columns each.
struct QutritChoices {
    char a_basis = 'y';
    char b_basis = 'w';
    int a_first = 0, a_second = 1;  // S2 only
    int b_index = 0;                // S1: the single B column; S2: first B column
    int b_second = 1;               // S2 only
};

template <class S>
struct Constellation554T {
    ConstellationShape shape = ConstellationShape::S1;
    std::array<ProductBasisT<S>, 2> bases;
    std::vector<ProductColumn<S>> extra;  // the four orthogonal product states
    std::string description;
};

using Constellation554 = Constellation554T<cx>;
using ExactConstellation554 = Constellation554T<Cyclotomic>;

inline Constellation554 to_float(const ExactConstellation554& c) {
    Constellation554 r;
    r.shape = c.shape;
    r.bases = {to_float(c.bases[0]), to_float(c.bases[1])};
    r.description = c.description;
    for (const auto& e : c.extra)
        r.extra.push_back({to_float(e.column), to_float(e.qubit), to_float(e.qutrit), e.qubit_label, e.qutrit_label});
    return r;
}

// S1 = {|0_y,A>, |0_y,A_perp>, |0_y,A_perpperp>, |1_y,B>};
// S2 = {|0_y,A>, |0_y,A_perp>, |1_y,B>, |1_y,B_perp>}.  The qutrit states
// come from the y/w bases, which is what keeps them MU to the pair below.
template <class S = cx>
Constellation554T<S> constellation_554(ConstellationShape shape, const QutritChoices& q = {}) {
    const auto qy = mu_basis<S>({2, 'y'});
    auto pick_basis = [](char tag) {
        if (tag != 'y' && tag != 'w') throw std::invalid_argument("constellation_554: qutrit basis tag must be y or w");
        return mu_basis<S>({3, tag});
    };
    const auto A = pick_basis(q.a_basis);
    const auto B = pick_basis(q.b_basis);
    auto col_label = [](char tag, int i) { return std::to_string(i) + "_" + std::string(1, tag); };
    auto check_index = [](int i) {
        if (i < 0 || i > 2) throw std::invalid_argument("constellation_554: column index out of range");
    };

    Constellation554T<S> c;
    c.shape = shape;
    auto pair = pair_family<S>(PairId::P0);
    pair[0].implied_column = 5;
    pair[1].implied_column = 5;
    c.bases = {pair[0], pair[1]};

    if (shape == ConstellationShape::S1) {
        check_index(q.b_index);
        for (int i = 0; i < 3; ++i)
            c.extra.push_back(detail::product_column(qy.columns[0], A.columns[static_cast<std::size_t>(i)],
                                                     "0_y", col_label(q.a_basis, i)));
        c.extra.push_back(detail::product_column(qy.columns[1], B.columns[static_cast<std::size_t>(q.b_index)],
                                                 "1_y", col_label(q.b_basis, q.b_index)));
        c.description = "S1 a=" + std::string(1, q.a_basis) + " b=" + col_label(q.b_basis, q.b_index);
    } else {
        check_index(q.a_first);
        check_index(q.a_second);
        check_index(q.b_index);
        check_index(q.b_second);
        if (q.a_first == q.a_second || q.b_index == q.b_second)
            throw std::invalid_argument("constellation_554: S2 requires two distinct columns per side");
        c.extra.push_back(detail::product_column(qy.columns[0], A.columns[static_cast<std::size_t>(q.a_first)],
                                                 "0_y", col_label(q.a_basis, q.a_first)));
        c.extra.push_back(detail::product_column(qy.columns[0], A.columns[static_cast<std::size_t>(q.a_second)],
                                                 "0_y", col_label(q.a_basis, q.a_second)));
        c.extra.push_back(detail::product_column(qy.columns[1], B.columns[static_cast<std::size_t>(q.b_index)],
                                                 "1_y", col_label(q.b_basis, q.b_index)));
        c.extra.push_back(detail::product_column(qy.columns[1], B.columns[static_cast<std::size_t>(q.b_second)],
                                                 "1_y", col_label(q.b_basis, q.b_second)));
        c.description = "S2 a=" + std::string(1, q.a_basis) + ":" + std::to_string(q.a_first) + std::to_string(q.a_second) +
                        " b=" + std::string(1, q.b_basis) + ":" + std::to_string(q.b_index) + std::to_string(q.b_second);
    }
    return c;
}

}  // namespace mub
