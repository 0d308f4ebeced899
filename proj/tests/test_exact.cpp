#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "mub/exact.hpp"

using mub::Cyclotomic;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("root powers satisfy the defining relations") {
    REQUIRE(Cyclotomic::root24(24) == Cyclotomic::one());
    REQUIRE(Cyclotomic::root24(6) == Cyclotomic::imag_unit());
    REQUIRE(Cyclotomic::root24(-1) == Cyclotomic::root24(23));

    // minimal polynomial: zeta^8 - zeta^4 + 1 = 0
    const Cyclotomic z = Cyclotomic::root24(1);
    Cyclotomic z4 = Cyclotomic::one(), z8 = Cyclotomic::one();
    for (int i = 0; i < 4; ++i) z4 *= z;
    for (int i = 0; i < 8; ++i) z8 *= z;
    REQUIRE((z8 - z4 + Cyclotomic::one()).is_zero());
}

TEST_CASE("third roots of unity") {
    const Cyclotomic w = Cyclotomic::omega3();
    REQUIRE((w * w * w) == Cyclotomic::one());
    REQUIRE((Cyclotomic::one() + w + w * w).is_zero());
    REQUIRE(w.conjugate() == w * w);
}

TEST_CASE("quadratic radicals") {
    REQUIRE(Cyclotomic::sqrt2() * Cyclotomic::sqrt2() == Cyclotomic::integer(2));
    REQUIRE(Cyclotomic::sqrt3() * Cyclotomic::sqrt3() == Cyclotomic::integer(3));
    REQUIRE(Cyclotomic::sqrt6() == Cyclotomic::sqrt2() * Cyclotomic::sqrt3());
    REQUIRE(Cyclotomic::inv_sqrt2() * Cyclotomic::inv_sqrt2() == Cyclotomic::rational(1, 2));
    REQUIRE(Cyclotomic::inv_sqrt3() * Cyclotomic::inv_sqrt3() == Cyclotomic::rational(1, 3));
    REQUIRE(Cyclotomic::inv_sqrt6() * Cyclotomic::inv_sqrt6() == Cyclotomic::rational(1, 6));
    REQUIRE(Cyclotomic::sqrt2().is_real());
    REQUIRE_FALSE(Cyclotomic::imag_unit().is_real());
}

TEST_CASE("conjugation and squared modulus") {
    REQUIRE(Cyclotomic::imag_unit().conjugate() == -Cyclotomic::imag_unit());
    const Cyclotomic u = Cyclotomic::inv_sqrt2() * (Cyclotomic::one() + Cyclotomic::imag_unit());
    REQUIRE(mub::abs_sq_value(u) == Cyclotomic::one());
    for (int k = 0; k < 24; ++k) {
        REQUIRE(mub::abs_sq_value(Cyclotomic::root24(k)) == Cyclotomic::one());
        REQUIRE(Cyclotomic::root24(k).conjugate() == Cyclotomic::root24(24 - k));
    }
}

TEST_CASE("rational normalization and arithmetic") {
    REQUIRE(Cyclotomic::rational(2, 4) == Cyclotomic::rational(1, 2));
    REQUIRE(Cyclotomic::rational(1, -2) == Cyclotomic::rational(-1, 2));
    REQUIRE(Cyclotomic::rational(1, 2) + Cyclotomic::rational(1, 3) == Cyclotomic::rational(5, 6));
    REQUIRE(Cyclotomic::rational(1, 2) - Cyclotomic::rational(1, 2) == Cyclotomic::zero());
    REQUIRE((Cyclotomic::integer(3) / 6) == Cyclotomic::rational(1, 2));
    REQUIRE_THROWS_AS(Cyclotomic::rational(1, 0), std::invalid_argument);

    std::int64_t p = 0, q = 0;
    REQUIRE(Cyclotomic::rational(5, 6).is_rational(&p, &q));
    REQUIRE(p == 5);
    REQUIRE(q == 6);
    REQUIRE_FALSE(Cyclotomic::sqrt2().is_rational());
}

TEST_CASE("float conversion is accurate") {
    for (int k = 0; k < 24; ++k) {
        const std::complex<double> expect = std::polar(1.0, 2.0 * kPi * k / 24.0);
        REQUIRE(std::abs(Cyclotomic::root24(k).to_complex() - expect) < 1e-15);
    }
    REQUIRE(std::abs(Cyclotomic::inv_sqrt3().to_complex().real() - 1.0 / std::sqrt(3.0)) < 1e-15);
    REQUIRE(Cyclotomic::inv_sqrt3().to_complex().imag() == 0.0);
}

TEST_CASE("overflow is detected, not wrapped") {
    const Cyclotomic big = Cyclotomic::integer(std::int64_t(1) << 62);
    REQUIRE_THROWS_AS(big * big, std::overflow_error);
    REQUIRE_THROWS_AS(Cyclotomic::from_parts({1, 0, 0, 0, 0, 0, 0, 0}, 0), std::invalid_argument);
}
