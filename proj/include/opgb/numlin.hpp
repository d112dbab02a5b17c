#pragma once

// Dense linear algebra over the dual-mode scalar: Schur complements, LDU
// (Gauss-Borel) factorization, quasi-determinants and characteristic
// polynomials.

#include "opgb/errors.hpp"
#include "opgb/matrix.hpp"
#include "opgb/scalar.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace opgb {

/// Schur complement D - C A^{-1} B of the leading p x p block A.
/// Rectangular M is allowed as long as both trailing blocks are nonempty.
template <Scalar T>
Matrix<T> schur_complement(const Matrix<T>& m, std::size_t p) {
    if (p > m.rows() || p > m.cols()) throw InvalidArgument("split index exceeds matrix");
    const std::size_t nr = m.rows() - p;
    const std::size_t nc = m.cols() - p;
    Matrix<T> d = m.block(p, p, nr, nc);
    if (p == 0) return d;
    auto a_inv_b = try_solve(m.block(0, 0, p, p), m.block(0, p, p, nc));
    if (!a_inv_b) throw SingularBlock(p, "leading block is singular");
    return d - m.block(p, 0, nr, p) * *a_inv_b;
}

/// Last-block quasi-determinant: the Schur complement with respect to the
/// leading p x p block. Every Christoffel-type formula is expressed with it.
template <Scalar T>
Matrix<T> quasi_det_last(const Matrix<T>& m, std::size_t p) {
    return schur_complement(m, p);
}

/// Scalar quasi-determinant of a square matrix: complement of everything but
/// the bottom-right entry.
template <Scalar T>
T quasi_det(const Matrix<T>& m) {
    if (!m.square() || m.rows() == 0) throw InvalidArgument("quasi_det needs a nonempty square matrix");
    return quasi_det_last(m, m.rows() - 1)(0, 0);
}

template <Scalar T>
struct LduFactors {
    Matrix<T> lower;      // unit lower triangular
    std::vector<T> diag;  // pivots; diag[k] = G^{[k+1]} \ G^{[k]}
    Matrix<T> upper;      // unit upper triangular
};

/// G = L D U without pivoting. A vanishing k-th pivot means the (k+1)-th
/// leading principal minor is zero and throws NotQuasiDefinite(k).
template <Scalar T>
LduFactors<T> ldu_factorize(const Matrix<T>& g) {
    if (!g.square()) throw InvalidArgument("ldu_factorize needs a square matrix");
    const std::size_t n = g.rows();
    LduFactors<T> f{Matrix<T>::identity(n), std::vector<T>(n, T(0)), Matrix<T>::identity(n)};
    auto& l = f.lower;
    auto& u = f.upper;
    auto& d = f.diag;
    for (std::size_t k = 0; k < n; ++k) {
        T pivot = g(k, k);
        for (std::size_t j = 0; j < k; ++j) pivot -= l(k, j) * d[j] * u(j, k);
        if (is_zero(pivot)) throw NotQuasiDefinite(k, "leading principal minor vanishes");
        d[k] = pivot;
        for (std::size_t i = k + 1; i < n; ++i) {
            T below = g(i, k);
            T right = g(k, i);
            for (std::size_t j = 0; j < k; ++j) {
                below -= l(i, j) * d[j] * u(j, k);
                right -= l(k, j) * d[j] * u(j, i);
            }
            l(i, k) = below / pivot;
            u(k, i) = right / pivot;
        }
    }
    return f;
}

/// sum_k coeffs[k] * B^k with B^0 = I.
template <Scalar T>
Matrix<T> polynomial_of_operator(std::span<const T> coeffs, const Matrix<T>& b) {
    if (!b.square()) throw InvalidArgument("operator must be square");
    const std::size_t n = b.rows();
    Matrix<T> acc(n, n);
    for (std::size_t k = coeffs.size(); k-- > 0;) {
        acc = acc * b;
        for (std::size_t i = 0; i < n; ++i) acc(i, i) += coeffs[k];
    }
    return acc;
}

template <Scalar T>
Matrix<T> polynomial_of_operator(std::span<const T> coeffs, const BandedOperator& b) {
    return polynomial_of_operator(coeffs, b.to_dense<T>());
}

/// Monic characteristic polynomial det(xI - M), ascending coefficients.
/// Faddeev-LeVerrier; every step is an exact rational operation.
template <Scalar T>
std::vector<T> char_poly(const Matrix<T>& m) {
    if (!m.square()) throw InvalidArgument("char_poly needs a square matrix");
    const std::size_t n = m.rows();
    std::vector<T> c(n + 1, T(0));
    c[n] = T(1);
    Matrix<T> aux(n, n);
    for (std::size_t k = 1; k <= n; ++k) {
        aux = m * aux;
        for (std::size_t i = 0; i < n; ++i) aux(i, i) += c[n - k + 1];
        Matrix<T> product = m * aux;
        T trace(0);
        for (std::size_t i = 0; i < n; ++i) trace += product(i, i);
        c[n - k] = -trace / T(static_cast<long>(k));
    }
    return c;
}

}  // namespace opgb
