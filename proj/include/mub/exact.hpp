#pragma once

// Exact amplitudes in the 24th cyclotomic field, Z[zeta]/den with
// zeta = exp(2*pi*i/24).  Every amplitude appearing in the pinned
// constructions (third roots of unity, i, 1/sqrt2, 1/sqrt3, 1/sqrt6 and
// their products) lives in this ring, so orthogonality and unbiasedness
// checks can be decided with no floating tolerance at all.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mub {

namespace detail {

// Basis coordinates of zeta^k over {1, zeta, ..., zeta^7}.
// Phi_24(x) = x^8 - x^4 + 1, hence zeta^8 = zeta^4 - 1.
using Coords8 = std::array<std::int64_t, 8>;

constexpr std::array<Coords8, 24> make_power_table() {
    std::array<Coords8, 24> t{};
    t[0][0] = 1;
    for (int k = 1; k < 24; ++k) {
        const Coords8& p = t[k - 1];
        Coords8 n{};
        for (int j = 1; j < 8; ++j) n[j] = p[j - 1];
        // zeta * zeta^7 = zeta^8 = zeta^4 - 1
        n[0] -= p[7];
        n[4] += p[7];
        t[k] = n;
    }
    return t;
}

inline constexpr std::array<Coords8, 24> kPowerTable = make_power_table();

inline std::int64_t checked_cast(__int128 v, const char* what) {
    if (v > static_cast<__int128>(INT64_MAX) || v < static_cast<__int128>(INT64_MIN))
        throw std::overflow_error(std::string("cyclotomic overflow in ") + what);
    return static_cast<std::int64_t>(v);
}

}  // namespace detail

class Cyclotomic {
public:
    Cyclotomic() = default;

    static Cyclotomic zero() { return Cyclotomic(); }
    static Cyclotomic one() { return integer(1); }

    static Cyclotomic integer(std::int64_t n) {
        Cyclotomic z;
        z.c_[0] = n;
        return z;
    }

    static Cyclotomic rational(std::int64_t p, std::int64_t q) {
        if (q == 0) throw std::invalid_argument("rational: zero denominator");
        if (q < 0) { p = -p; q = -q; }
        Cyclotomic z;
        z.c_[0] = p;
        z.den_ = q;
        z.normalize();
        return z;
    }

    // zeta^k, i.e. the phase exp(2*pi*i*k/24); k is taken mod 24.
    static Cyclotomic root24(int k) {
        k %= 24;
        if (k < 0) k += 24;
        Cyclotomic z;
        z.c_ = detail::kPowerTable[static_cast<std::size_t>(k)];
        return z;
    }

    static Cyclotomic imag_unit() { return root24(6); }
    static Cyclotomic omega3(int k = 1) { return root24(8 * k); }
    static Cyclotomic sqrt2() { return root24(3) + root24(21); }
    static Cyclotomic sqrt3() { return root24(2) + root24(22); }
    static Cyclotomic sqrt6() { return sqrt2() * sqrt3(); }
    static Cyclotomic inv_sqrt2() { return sqrt2() / 2; }
    static Cyclotomic inv_sqrt3() { return sqrt3() / 3; }
    static Cyclotomic inv_sqrt6() { return sqrt6() / 6; }

    friend Cyclotomic operator+(const Cyclotomic& a, const Cyclotomic& b) {
        Cyclotomic r;
        const std::int64_t g = std::gcd(a.den_, b.den_);
        const std::int64_t am = b.den_ / g;
        const std::int64_t bm = a.den_ / g;
        r.den_ = detail::checked_cast(static_cast<__int128>(a.den_) * am, "add denominator");
        for (int j = 0; j < 8; ++j) {
            const __int128 v = static_cast<__int128>(a.c_[j]) * am +
                               static_cast<__int128>(b.c_[j]) * bm;
            r.c_[j] = detail::checked_cast(v, "add coordinate");
        }
        r.normalize();
        return r;
    }

    friend Cyclotomic operator-(const Cyclotomic& a, const Cyclotomic& b) { return a + (-b); }

    Cyclotomic operator-() const {
        Cyclotomic r = *this;
        for (auto& v : r.c_) v = -v;
        return r;
    }

    friend Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b) {
        std::array<__int128, 15> conv{};
        for (int i = 0; i < 8; ++i) {
            if (a.c_[i] == 0) continue;
            for (int j = 0; j < 8; ++j)
                conv[static_cast<std::size_t>(i + j)] +=
                    static_cast<__int128>(a.c_[i]) * b.c_[j];
        }
        // x^d = x^(d-4) - x^(d-8) for d >= 8, applied from the top down.
        for (int d = 14; d >= 8; --d) {
            conv[static_cast<std::size_t>(d - 4)] += conv[static_cast<std::size_t>(d)];
            conv[static_cast<std::size_t>(d - 8)] -= conv[static_cast<std::size_t>(d)];
            conv[static_cast<std::size_t>(d)] = 0;
        }
        Cyclotomic r;
        for (int j = 0; j < 8; ++j) r.c_[j] = detail::checked_cast(conv[static_cast<std::size_t>(j)], "mul coordinate");
        r.den_ = detail::checked_cast(static_cast<__int128>(a.den_) * b.den_, "mul denominator");
        r.normalize();
        return r;
    }

    Cyclotomic operator/(std::int64_t n) const {
        if (n == 0) throw std::invalid_argument("division by zero");
        Cyclotomic r = *this;
        if (n < 0) {
            for (auto& v : r.c_) v = -v;
            n = -n;
        }
        r.den_ = detail::checked_cast(static_cast<__int128>(r.den_) * n, "div denominator");
        r.normalize();
        return r;
    }

    Cyclotomic& operator+=(const Cyclotomic& b) { return *this = *this + b; }
    Cyclotomic& operator-=(const Cyclotomic& b) { return *this = *this - b; }
    Cyclotomic& operator*=(const Cyclotomic& b) { return *this = *this * b; }

    friend bool operator==(const Cyclotomic& a, const Cyclotomic& b) {
        return a.c_ == b.c_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Cyclotomic& a, const Cyclotomic& b) { return !(a == b); }

    bool is_zero() const {
        for (auto v : c_)
            if (v != 0) return false;
        return true;
    }

    // conj(zeta^k) = zeta^(24-k)
    Cyclotomic conjugate() const {
        Cyclotomic r;
        for (int k = 0; k < 8; ++k) {
            if (c_[k] == 0) continue;
            const auto& p = detail::kPowerTable[static_cast<std::size_t>((24 - k) % 24)];
            for (int j = 0; j < 8; ++j) {
                const __int128 v = static_cast<__int128>(r.c_[j]) +
                                   static_cast<__int128>(c_[k]) * p[j];
                r.c_[j] = detail::checked_cast(v, "conj coordinate");
            }
        }
        r.den_ = den_;
        r.normalize();
        return r;
    }

    bool is_real() const { return conjugate() == *this; }

    // c0/den when all higher coordinates vanish.
    bool is_rational(std::int64_t* p = nullptr, std::int64_t* q = nullptr) const {
        for (int j = 1; j < 8; ++j)
            if (c_[j] != 0) return false;
        if (p) *p = c_[0];
        if (q) *q = den_;
        return true;
    }

    std::complex<double> to_complex() const {
        static const std::array<std::complex<long double>, 24> roots = [] {
            std::array<std::complex<long double>, 24> r{};
            constexpr long double pi = 3.141592653589793238462643383279502884L;
            for (int k = 0; k < 24; ++k) {
                const long double a = 2.0L * pi * static_cast<long double>(k) / 24.0L;
                r[static_cast<std::size_t>(k)] = {std::cos(a), std::sin(a)};
            }
            return r;
        }();
        std::complex<long double> acc{0.0L, 0.0L};
        for (int j = 0; j < 8; ++j)
            if (c_[j] != 0) acc += static_cast<long double>(c_[j]) * roots[static_cast<std::size_t>(j)];
        acc /= static_cast<long double>(den_);
        return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
    }

    std::int64_t denominator() const { return den_; }
    const std::array<std::int64_t, 8>& coords() const { return c_; }

    static Cyclotomic from_parts(const std::array<std::int64_t, 8>& coords, std::int64_t den) {
        if (den <= 0) throw std::invalid_argument("from_parts: denominator must be positive");
        Cyclotomic z;
        z.c_ = coords;
        z.den_ = den;
        z.normalize();
        return z;
    }

private:
    std::array<std::int64_t, 8> c_{};
    std::int64_t den_ = 1;

    void normalize() {
        std::int64_t g = den_;
        for (auto v : c_) g = std::gcd(g, v < 0 ? -v : v);
        if (g > 1) {
            for (auto& v : c_) v /= g;
            den_ /= g;
        }
        if (is_zero()) den_ = 1;
    }
};

inline Cyclotomic conj_value(const Cyclotomic& z) { return z.conjugate(); }
inline std::complex<double> to_complex(const Cyclotomic& z) { return z.to_complex(); }
// |z|^2 as a ring element (real, often rational for the pinned amplitudes).
inline Cyclotomic abs_sq_value(const Cyclotomic& z) { return z * z.conjugate(); }

inline std::complex<double> conj_value(const std::complex<double>& z) { return std::conj(z); }
inline std::complex<double> to_complex(const std::complex<double>& z) { return z; }
inline std::complex<double> abs_sq_value(const std::complex<double>& z) { return {std::norm(z), 0.0}; }

}  // namespace mub
