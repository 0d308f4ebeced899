#pragma once

// Small fixed-dimension complex linear algebra for C^2, C^3 and C^2 x C^3:
// inner products, tensor products, partial traces, Bloch vectors, the 2x3
// Schmidt decomposition, and 2x2 / 3x3 hermitian eigensolvers.  Everything
// is a value type; all functions are pure.  Scalar-generic pieces work for
// both std::complex<double> and the exact Cyclotomic amplitude.

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <stdexcept>
#include <vector>

#include "mub/exact.hpp"

namespace mub {

using cx = std::complex<double>;

template <class S>
struct VecT {
    std::vector<S> amps;

    VecT() = default;
    explicit VecT(int dim) : amps(static_cast<std::size_t>(dim)) {}
    VecT(std::initializer_list<S> xs) : amps(xs) {}

    int dim() const { return static_cast<int>(amps.size()); }
    S& operator[](int i) { return amps[static_cast<std::size_t>(i)]; }
    const S& operator[](int i) const { return amps[static_cast<std::size_t>(i)]; }
};

using StateVector = VecT<cx>;
using ExactVector = VecT<Cyclotomic>;

template <class S>
struct MatT {
    int rows = 0, cols = 0;
    std::vector<S> m;

    MatT() = default;
    MatT(int r, int c) : rows(r), cols(c), m(static_cast<std::size_t>(r) * static_cast<std::size_t>(c)) {}

    S& at(int r, int c) { return m[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(c)]; }
    const S& at(int r, int c) const { return m[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(c)]; }

    static MatT identity(int n) {
        MatT I(n, n);
        for (int i = 0; i < n; ++i) I.at(i, i) = one_value();
        return I;
    }

    VecT<S> column(int c) const {
        VecT<S> v(rows);
        for (int r = 0; r < rows; ++r) v[r] = at(r, c);
        return v;
    }

private:
    static S one_value() {
        if constexpr (std::is_same_v<S, Cyclotomic>) return Cyclotomic::one();
        else return S(1);
    }
};

using Operator = MatT<cx>;
using ExactOperator = MatT<Cyclotomic>;
using DensityMatrix = MatT<cx>;

// <u|v> with conjugation on the first argument.
template <class S>
S inner(const VecT<S>& u, const VecT<S>& v) {
    if (u.dim() != v.dim()) throw std::invalid_argument("inner: dimension mismatch");
    S acc{};
    for (int i = 0; i < u.dim(); ++i) acc += conj_value(u[i]) * v[i];
    return acc;
}

// |j> tensor |J> -> component index 3*j + J.
template <class S>
VecT<S> tensor(const VecT<S>& a, const VecT<S>& b) {
    if (a.dim() != 2 || b.dim() != 3) throw std::invalid_argument("tensor: expected dims 2 and 3");
    VecT<S> r(6);
    for (int j = 0; j < 2; ++j)
        for (int J = 0; J < 3; ++J) r[3 * j + J] = a[j] * b[J];
    return r;
}

inline double norm_sq(const StateVector& v) {
    double s = 0.0;
    for (const auto& z : v.amps) s += std::norm(z);
    return s;
}

inline Cyclotomic norm_sq(const ExactVector& v) {
    Cyclotomic s;
    for (const auto& z : v.amps) s += abs_sq_value(z);
    return s;
}

inline StateVector normalized(StateVector v) {
    const double n = std::sqrt(norm_sq(v));
    if (n <= 0.0) throw std::invalid_argument("normalized: zero vector");
    for (auto& z : v.amps) z /= n;
    return v;
}

inline StateVector to_float(const ExactVector& v) {
    StateVector r(v.dim());
    for (int i = 0; i < v.dim(); ++i) r[i] = v[i].to_complex();
    return r;
}

inline Operator to_float(const ExactOperator& M) {
    Operator r(M.rows, M.cols);
    for (int i = 0; i < M.rows; ++i)
        for (int j = 0; j < M.cols; ++j) r.at(i, j) = M.at(i, j).to_complex();
    return r;
}

template <class S>
MatT<S> matmul(const MatT<S>& A, const MatT<S>& B) {
    if (A.cols != B.rows) throw std::invalid_argument("matmul: shape mismatch");
    MatT<S> C(A.rows, B.cols);
    for (int i = 0; i < A.rows; ++i)
        for (int k = 0; k < A.cols; ++k) {
            const S aik = A.at(i, k);
            for (int j = 0; j < B.cols; ++j) C.at(i, j) += aik * B.at(k, j);
        }
    return C;
}

template <class S>
MatT<S> adjoint(const MatT<S>& A) {
    MatT<S> C(A.cols, A.rows);
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) C.at(j, i) = conj_value(A.at(i, j));
    return C;
}

template <class S>
VecT<S> mat_apply(const MatT<S>& A, const VecT<S>& v) {
    if (A.cols != v.dim()) throw std::invalid_argument("apply: shape mismatch");
    VecT<S> r(A.rows);
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) r[i] += A.at(i, j) * v[j];
    return r;
}

enum class Keep { A, B };

// Reduced density matrix of a C^2 x C^3 pure state: 2x2 for Keep::A, 3x3 for Keep::B.
template <class S>
MatT<S> partial_trace(const VecT<S>& psi, Keep keep) {
    if (psi.dim() != 6) throw std::invalid_argument("partial_trace: expected dim 6");
    if (keep == Keep::A) {
        MatT<S> rho(2, 2);
        for (int j = 0; j < 2; ++j)
            for (int jp = 0; jp < 2; ++jp)
                for (int J = 0; J < 3; ++J) rho.at(j, jp) += psi[3 * j + J] * conj_value(psi[3 * jp + J]);
        return rho;
    }
    MatT<S> rho(3, 3);
    for (int J = 0; J < 3; ++J)
        for (int Jp = 0; Jp < 3; ++Jp)
            for (int j = 0; j < 2; ++j) rho.at(J, Jp) += psi[3 * j + J] * conj_value(psi[3 * j + Jp]);
    return rho;
}

struct BlochVector {
    double nx = 0.0, ny = 0.0, nz = 0.0;
    double norm() const { return std::sqrt(nx * nx + ny * ny + nz * nz); }
};

inline double hermiticity_deviation(const DensityMatrix& rho) {
    double worst = 0.0;
    for (int i = 0; i < rho.rows; ++i)
        for (int j = 0; j < rho.cols; ++j) worst = std::max(worst, std::abs(rho.at(i, j) - std::conj(rho.at(j, i))));
    return worst;
}

inline BlochVector bloch(const DensityMatrix& rho, double tol = 1e-10) {
    if (rho.rows != 2 || rho.cols != 2) throw std::invalid_argument("bloch: expected 2x2");
    if (hermiticity_deviation(rho) > tol) throw std::invalid_argument("bloch: input not hermitian within tolerance");
    BlochVector n;
    n.nx = 2.0 * rho.at(0, 1).real();
    n.ny = -2.0 * rho.at(0, 1).imag();
    n.nz = (rho.at(0, 0) - rho.at(1, 1)).real();
    return n;
}

// Eigenvalues (descending) and orthonormal eigenvectors of a 2x2 hermitian matrix.
struct Eig2 {
    double eval[2];
    VecT<cx> evec[2];
};

inline Eig2 hermitian_eig2(const MatT<cx>& A) {
    if (A.rows != 2 || A.cols != 2) throw std::invalid_argument("hermitian_eig2: expected 2x2");
    const double a = A.at(0, 0).real();
    const double d = A.at(1, 1).real();
    const cx b = A.at(0, 1);
    const double s = std::sqrt((a - d) * (a - d) + 4.0 * std::norm(b));
    Eig2 e;
    e.eval[0] = 0.5 * ((a + d) + s);
    e.eval[1] = 0.5 * ((a + d) - s);
    if (std::abs(b) > 1e-300) {
        VecT<cx> u{b, cx(e.eval[0] - a, 0.0)};
        const double n = std::sqrt(norm_sq(u));
        u[0] /= n;
        u[1] /= n;
        e.evec[0] = u;
    } else {
        e.evec[0] = (a >= d) ? VecT<cx>{cx(1, 0), cx(0, 0)} : VecT<cx>{cx(0, 0), cx(1, 0)};
    }
    e.evec[1] = VecT<cx>{-std::conj(e.evec[0][1]), std::conj(e.evec[0][0])};
    return e;
}

// Eigenvalues (descending) of a 3x3 hermitian matrix, trigonometric method.
inline std::array<double, 3> hermitian_eig3_values(const MatT<cx>& A) {
    if (A.rows != 3 || A.cols != 3) throw std::invalid_argument("hermitian_eig3_values: expected 3x3");
    const double q = (A.at(0, 0).real() + A.at(1, 1).real() + A.at(2, 2).real()) / 3.0;
    double p2 = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double di = A.at(i, i).real() - q;
        p2 += di * di;
    }
    p2 += 2.0 * (std::norm(A.at(0, 1)) + std::norm(A.at(0, 2)) + std::norm(A.at(1, 2)));
    const double p = std::sqrt(p2 / 6.0);
    std::array<double, 3> ev{q, q, q};
    if (p > 1e-300) {
        MatT<cx> B(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) B.at(i, j) = (A.at(i, j) - (i == j ? cx(q, 0) : cx(0, 0))) / p;
        const cx det = B.at(0, 0) * (B.at(1, 1) * B.at(2, 2) - B.at(1, 2) * B.at(2, 1)) -
                       B.at(0, 1) * (B.at(1, 0) * B.at(2, 2) - B.at(1, 2) * B.at(2, 0)) +
                       B.at(0, 2) * (B.at(1, 0) * B.at(2, 1) - B.at(1, 1) * B.at(2, 0));
        const double r = std::clamp(det.real() / 2.0, -1.0, 1.0);
        const double phi = std::acos(r) / 3.0;
        constexpr double two_pi_3 = 2.0943951023931953;
        ev[0] = q + 2.0 * p * std::cos(phi);
        ev[2] = q + 2.0 * p * std::cos(phi + two_pi_3);
        ev[1] = 3.0 * q - ev[0] - ev[2];
    }
    std::sort(ev.begin(), ev.end(), std::greater<double>());
    return ev;
}

// Unit vector orthogonal to two orthogonal C^3 vectors, phase fixed so the
// first nonzero component is real positive.
inline StateVector orthocomplement3(const StateVector& d1, const StateVector& d2, double tol = 1e-10) {
    if (d1.dim() != 3 || d2.dim() != 3) throw std::invalid_argument("orthocomplement3: expected dim 3");
    if (std::abs(inner(d1, d2)) > tol) throw std::invalid_argument("orthocomplement3: inputs not orthogonal");
    StateVector r(3);
    // conj(d1) x conj(d2) is orthogonal to both d1 and d2.
    r[0] = std::conj(d1[1] * d2[2] - d1[2] * d2[1]);
    r[1] = std::conj(d1[2] * d2[0] - d1[0] * d2[2]);
    r[2] = std::conj(d1[0] * d2[1] - d1[1] * d2[0]);
    const double n = std::sqrt(norm_sq(r));
    if (n < tol) throw std::invalid_argument("orthocomplement3: inputs linearly dependent");
    for (auto& z : r.amps) z /= n;
    for (int i = 0; i < 3; ++i) {
        if (std::abs(r[i]) > tol) {
            const cx phase = r[i] / std::abs(r[i]);
            for (auto& z : r.amps) z /= phase;
            break;
        }
    }
    return r;
}

// Global phase fixed so the first component whose modulus is within a
// relative window of the maximum is real positive.  The window keeps the
// choice stable when several components tie in modulus up to float noise.
inline StateVector canonicalize(const StateVector& v, double rel_window = 1e-6) {
    double mmax = 0.0;
    for (const auto& z : v.amps) mmax = std::max(mmax, std::abs(z));
    if (mmax <= 0.0) return v;
    StateVector r = v;
    for (int i = 0; i < v.dim(); ++i) {
        if (std::abs(v[i]) >= mmax * (1.0 - rel_window)) {
            const cx phase = v[i] / std::abs(v[i]);
            for (auto& z : r.amps) z /= phase;
            break;
        }
    }
    return r;
}

// Euclidean distance of canonical forms; invariant under global phases.
inline double canonical_distance(const StateVector& u, const StateVector& v) {
    const StateVector cu = canonicalize(u), cv = canonicalize(v);
    double s = 0.0;
    for (int i = 0; i < u.dim(); ++i) s += std::norm(cu[i] - cv[i]);
    return std::sqrt(s);
}

struct SchmidtDecomposition {
    double lambda1 = 0.0, lambda2 = 0.0;
    VecT<cx> left[2];              // orthonormal C^2 vectors
    VecT<cx> right[2];             // orthonormal C^3 vectors
    StateVector right_complement;  // third C^3 vector, orthogonal to both

    StateVector reconstruct() const {
        StateVector r(6);
        for (int j = 0; j < 2; ++j)
            for (int J = 0; J < 3; ++J)
                r[3 * j + J] = lambda1 * left[0][j] * right[0][J] + lambda2 * left[1][j] * right[1][J];
        return r;
    }
};

// psi = lambda1 |left0>|right0> + lambda2 |left1>|right1>, lambda1 >= lambda2 >= 0.
inline SchmidtDecomposition schmidt(const StateVector& psi) {
    if (psi.dim() != 6) throw std::invalid_argument("schmidt: expected dim 6");
    const DensityMatrix rhoA = partial_trace(psi, Keep::A);
    const Eig2 e = hermitian_eig2(rhoA);
    SchmidtDecomposition sd;
    sd.left[0] = e.evec[0];
    sd.left[1] = e.evec[1];
    // The coefficient is recovered as the norm of the contraction
    // v_i[J] = sum_j conj(left_i[j]) psi[3j+J]; unlike sqrt of the rhoA
    // eigenvalue this is linear in psi, so a zero coefficient comes out at
    // machine precision instead of sqrt(eps).
    for (int i = 0; i < 2; ++i) {
        StateVector v(3);
        for (int J = 0; J < 3; ++J)
            v[J] = std::conj(sd.left[i][0]) * psi[0 + J] + std::conj(sd.left[i][1]) * psi[3 + J];
        const double n = std::sqrt(norm_sq(v));
        (i == 0 ? sd.lambda1 : sd.lambda2) = n;
        if (n > 1e-12) {
            for (auto& z : v.amps) z /= n;
            sd.right[i] = v;
        } else {
            // Degenerate lambda2 ~ 0: any unit vector orthogonal to right[0] works.
            StateVector best(3);
            double best_norm = -1.0;
            for (int k = 0; k < 3; ++k) {
                StateVector cand(3);
                cand[k] = cx(1, 0);
                const cx ov = inner(sd.right[0], cand);
                for (int J = 0; J < 3; ++J) cand[J] -= ov * sd.right[0][J];
                const double cn = std::sqrt(norm_sq(cand));
                if (cn > best_norm) {
                    best_norm = cn;
                    best = cand;
                }
            }
            for (auto& z : best.amps) z /= best_norm;
            sd.right[i] = best;
        }
    }
    if (sd.lambda2 > sd.lambda1) {
        std::swap(sd.lambda1, sd.lambda2);
        std::swap(sd.left[0], sd.left[1]);
        std::swap(sd.right[0], sd.right[1]);
    }
    sd.right_complement = orthocomplement3(sd.right[0], sd.right[1], 1e-8);
    return sd;
}

}  // namespace mub
