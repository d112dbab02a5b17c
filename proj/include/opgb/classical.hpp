#pragma once

// Pearson-equation data of the Hermite, Laguerre and Jacobi weights and the
// matrix form of their second order differential operator.

#include "opgb/matrix.hpp"
#include "opgb/measure.hpp"
#include "opgb/numlin.hpp"
#include "opgb/scalar.hpp"

#include <cstddef>

namespace opgb {

/// p2(x) = a x^2 + b x + c and p2' + p1 = A x + B.
struct PearsonData {
    Rational a, b, c;
    Rational A, B;
};

PearsonData pearson_data(const ClassicalWeight& w);

/// Closed form of the subdiagonal S_{n+1,n} = (n+1)(B + n b)/(A + 2 n a).
Rational classical_subdiagonal(const PearsonData& p, std::size_t n);

/// Eigenvalue n (A + (n-1) a) of the n-th polynomial under
/// p2 d^2/dx^2 + (p2' + p1) d/dx.
Rational classical_eigenvalue(const PearsonData& p, std::size_t n);

/// Norm ratio H_n(gamma) / H_{n-1}(gamma+1) = -n / (A + (n-1) a) for the
/// unnormalized weights.
Rational classical_norm_ratio(const PearsonData& p, std::size_t n);

/// n x n truncation of D^2 p2(Lambda) + D (A Lambda + B). D is lower
/// triangular, so the truncation of the product equals the product of the
/// truncations: every entry is exact.
template <Scalar T>
Matrix<T> diff_operator_matrix(const PearsonData& p, std::size_t n) {
    if (n < 2) throw InvalidArgument("diff_operator_matrix needs n >= 2");
    const Matrix<T> lambda = shift_matrix<T>(n);
    const Matrix<T> d = derivative_matrix<T>(n);
    const std::vector<T> p2{from_rational<T>(p.c), from_rational<T>(p.b), from_rational<T>(p.a)};
    const std::vector<T> first{from_rational<T>(p.B), from_rational<T>(p.A)};
    return d * d * polynomial_of_operator<T>(p2, lambda) + d * polynomial_of_operator<T>(first, lambda);
}

}  // namespace opgb
