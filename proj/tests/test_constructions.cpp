#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "mub/constructions.hpp"

using namespace mub;

namespace {

double matdiff(const Operator& A, const Operator& B) {
    double worst = 0.0;
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) worst = std::max(worst, std::abs(A.at(i, j) - B.at(i, j)));
    return worst;
}

// residual of "column c of basis is an eigenvector of M"
double eigen_residual(const Operator& M, const StateVector& v) {
    const auto Mv = mat_apply(M, v);
    const cx lam = inner(v, Mv);
    double r = 0.0;
    for (int i = 0; i < v.dim(); ++i) r += std::norm(Mv[i] - lam * v[i]);
    return std::sqrt(r);
}

}  // namespace

TEST_CASE("shift and phase operators") {
    const auto Z2 = hw_operator(2, HwWhich::Z);
    REQUIRE(std::abs(Z2.at(0, 0) - cx(1, 0)) < 1e-15);
    REQUIRE(std::abs(Z2.at(1, 1) - cx(-1, 0)) < 1e-15);

    const auto X3 = hw_operator(3, HwWhich::X);
    StateVector e0(3);
    e0[0] = 1;
    const auto shifted = mat_apply(X3, e0);
    REQUIRE(std::abs(shifted[1] - cx(1, 0)) < 1e-15);

    for (int d : {2, 3}) {
        const auto X = hw_operator(d, HwWhich::X);
        const auto Z = hw_operator(d, HwWhich::Z);
        const cx w = std::polar(1.0, 2.0 * kPi / d);
        auto lhs = matmul(Z, X);
        auto rhs = matmul(X, Z);
        for (auto& z : rhs.m) z *= w;
        REQUIRE(matdiff(lhs, rhs) < 1e-14);
    }

    REQUIRE_THROWS_AS(hw_operator(2, HwWhich::W), std::invalid_argument);
    REQUIRE_THROWS_AS(hw_operator(4, HwWhich::X), std::invalid_argument);

    // exact mode: ZX = omega XZ with ring equality
    for (int d : {2, 3}) {
        const auto X = hw_operator<Cyclotomic>(d, HwWhich::X);
        const auto Z = hw_operator<Cyclotomic>(d, HwWhich::Z);
        const auto lhs = matmul(Z, X);
        auto rhs = matmul(X, Z);
        const Cyclotomic w = amp_traits<Cyclotomic>::omega(d);
        for (auto& z : rhs.m) z = z * w;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) REQUIRE(lhs.at(i, j) == rhs.at(i, j));
    }
}

TEST_CASE("pinned qutrit matrices") {
    const auto ty = mu_basis({3, 'y'});
    const cx w = std::polar(1.0, 2.0 * kPi / 3.0);
    const double s3 = std::sqrt(3.0);
    // first column (1, w, w)/sqrt3
    REQUIRE(std::abs(ty.columns[0][0] - cx(1, 0) / s3) < 1e-15);
    REQUIRE(std::abs(ty.columns[0][1] - w / s3) < 1e-15);
    REQUIRE(std::abs(ty.columns[0][2] - w / s3) < 1e-15);

    const auto tx = mu_basis({3, 'x'});
    // Fourier matrix: entry (r, c) = w^{rc}/sqrt3
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            REQUIRE(std::abs(tx.columns[c][r] - std::polar(1.0 / s3, 2.0 * kPi * r * c / 3.0)) < 1e-14);

    const auto tw = mu_basis({3, 'w'});
    REQUIRE(std::abs(tw.columns[0][1] - w * w / s3) < 1e-15);
    REQUIRE(std::abs(tw.columns[1][1] - cx(1, 0) / s3) < 1e-15);
    REQUIRE(std::abs(tw.columns[2][1] - w / s3) < 1e-15);

    // exact and float agree entrywise
    const auto tye = mu_basis<Cyclotomic>({3, 'y'});
    for (int c = 0; c < 3; ++c)
        for (int r = 0; r < 3; ++r) REQUIRE(std::abs(tye.columns[c][r].to_complex() - ty.columns[c][r]) < 1e-15);
}

TEST_CASE("eigenbasis pairings under the shift-up convention") {
    const auto tz = mu_basis({3, 'z'});
    const auto tx = mu_basis({3, 'x'});
    const auto ty = mu_basis({3, 'y'});
    const auto tw = mu_basis({3, 'w'});
    const auto Z = hw_operator(3, HwWhich::Z);
    const auto X = hw_operator(3, HwWhich::X);
    const auto Y = hw_operator(3, HwWhich::Y);
    const auto W = hw_operator(3, HwWhich::W);

    for (int c = 0; c < 3; ++c) {
        REQUIRE(eigen_residual(Z, tz.columns[c]) < 1e-14);
        REQUIRE(eigen_residual(X, tx.columns[c]) < 1e-14);
        // the pinned y matrix diagonalizes X^2 Z and the w matrix XZ
        REQUIRE(eigen_residual(W, ty.columns[c]) < 1e-14);
        REQUIRE(eigen_residual(Y, tw.columns[c]) < 1e-14);
    }

    const auto qy = mu_basis({2, 'y'});
    const auto Y2 = hw_operator(2, HwWhich::Y);
    for (int c = 0; c < 2; ++c) REQUIRE(eigen_residual(Y2, qy.columns[c]) < 1e-14);
    // (1, i)/sqrt2 and (1, -i)/sqrt2
    REQUIRE(std::abs(qy.columns[0][1] - cx(0, 1) / std::sqrt(2.0)) < 1e-15);
    REQUIRE(std::abs(qy.columns[1][1] - cx(0, -1) / std::sqrt(2.0)) < 1e-15);
}

TEST_CASE("bad basis ids are rejected") {
    REQUIRE_THROWS_AS(mu_basis({2, 'w'}), std::invalid_argument);
    REQUIRE_THROWS_AS(mu_basis({4, 'z'}), std::invalid_argument);
    REQUIRE_THROWS_AS(mu_basis({3, 'q'}), std::invalid_argument);
}

TEST_CASE("triples") {
    const auto t0 = triple(TripleId::T0);
    for (const auto& pb : t0) {
        REQUIRE(pb.cols.size() == 6);
        REQUIRE_FALSE(pb.indirect);
    }
    REQUIRE(t0[0].cols[0].qubit_label == "0_z");
    REQUIRE(t0[0].cols[5].qutrit_label == "2_z");
    REQUIRE(t0[2].cols[1].qutrit_label == "1_y");

    const auto t1 = triple(TripleId::T1);
    REQUIRE(t1[2].indirect);
    REQUIRE(t1[2].cols[0].qutrit_label == "0_y");
    REQUIRE(t1[2].cols[3].qutrit_label == "0_w");
    REQUIRE(t1[2].cols[3].qubit_label == "1_y");

    // all 108 inter-basis overlaps of T0 have squared modulus 1/6
    for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b)
            for (int i = 0; i < 6; ++i)
                for (int j = 0; j < 6; ++j) {
                    const double ov = std::norm(inner(t0[a].cols[i].column, t0[b].cols[j].column));
                    REQUIRE(ov == Catch::Approx(1.0 / 6.0).margin(1e-13));
                }
}

TEST_CASE("pair families") {
    const auto p0 = pair_family(PairId::P0);
    const auto p1_id = pair_family(PairId::P1, {});
    for (int b = 0; b < 2; ++b)
        for (int i = 0; i < 6; ++i)
            for (int k = 0; k < 6; ++k)
                REQUIRE(std::abs(p0[b].cols[i].column[k] - p1_id[b].cols[i].column[k]) < 1e-15);
    REQUIRE_FALSE(p1_id[1].indirect);

    ParamSet ps;
    ps.xi = 0.7;
    ps.eta = 2.1;
    const auto p1 = pair_family(PairId::P1, ps);
    REQUIRE(p1[1].indirect);
    REQUIRE(p1[1].cols[3].qutrit_label == "R(0_x)");

    const auto p2 = pair_family(PairId::P2);
    REQUIRE(p2[0].indirect);
    REQUIRE(p2[1].cols[3].qutrit_label == "0_w");

    ParamSet bad;
    bad.sigma = 0.0;
    REQUIRE_THROWS_AS(pair_family(PairId::P3, bad), std::invalid_argument);
    bad.sigma = kPi;
    REQUIRE_THROWS_AS(pair_family(PairId::P3, bad), std::invalid_argument);

    ParamSet gen;
    gen.zeta = 1.3;
    gen.chi = 5.9;
    gen.sigma = 0.8;
    gen.tau = 2.2;
    const auto p3 = pair_family(PairId::P3, gen);
    REQUIRE(p3[0].indirect);
    REQUIRE(p3[1].indirect);
    REQUIRE(p3[1].cols[1].qubit_label == "r_sigma(0_x)");
    REQUIRE(p3[1].cols[5].qubit_label == "r_tau(1_x)");
    // each member stays orthonormal for generic parameters
    for (int b = 0; b < 2; ++b)
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) {
                const cx ov = inner(p3[b].cols[i].column, p3[b].cols[j].column);
                REQUIRE(std::abs(ov - (i == j ? cx(1, 0) : cx(0, 0))) < 1e-13);
            }
}

TEST_CASE("exact pair families accept only lattice angles") {
    ParamSet ok;
    ok.sigma = kPi / 2;
    ok.tau = kPi / 12;
    const auto p3 = pair_family<Cyclotomic>(PairId::P3, ok);
    for (const auto& c : p3[1].cols) REQUIRE(norm_sq(c.column) == Cyclotomic::one());

    ParamSet bad;
    bad.sigma = 0.3;
    REQUIRE_THROWS_AS(pair_family<Cyclotomic>(PairId::P3, bad), std::invalid_argument);
}

TEST_CASE("constellations") {
    const auto s1 = constellation_554(ConstellationShape::S1, {'y', 'w', 0, 1, 0, 1});
    REQUIRE(s1.extra.size() == 4);
    REQUIRE(s1.extra[0].qubit_label == "0_y");
    REQUIRE(s1.extra[3].qubit_label == "1_y");
    REQUIRE(s1.extra[3].qutrit_label == "0_w");
    REQUIRE(s1.bases[0].implied_column == 5);

    // qubit factor multiplicities are {3,1} for S1 and {2,2} for S2
    int s1_zero = 0;
    for (const auto& e : s1.extra)
        if (e.qubit_label == "0_y") ++s1_zero;
    REQUIRE(s1_zero == 3);

    const auto s2 = constellation_554(ConstellationShape::S2, {'y', 'w', 0, 1, 0, 1});
    int s2_zero = 0;
    for (const auto& e : s2.extra)
        if (e.qubit_label == "0_y") ++s2_zero;
    REQUIRE(s2_zero == 2);

    QutritChoices dup{'y', 'w', 0, 0, 0, 1};
    REQUIRE_THROWS_AS(constellation_554(ConstellationShape::S2, dup), std::invalid_argument);
    QutritChoices badtag{'z', 'w', 0, 1, 0, 1};
    REQUIRE_THROWS_AS(constellation_554(ConstellationShape::S1, badtag), std::invalid_argument);

    // the four extra states are pairwise orthogonal in both shapes
    for (const auto& c : {s1, s2})
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = i + 1; j < 4; ++j)
                REQUIRE(std::abs(inner(c.extra[i].column, c.extra[j].column)) < 1e-14);
}
