#pragma once

// Gauss quadrature from truncated Jacobi matrices.

#include "opgb/biorth.hpp"
#include "opgb/errors.hpp"
#include "opgb/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

namespace opgb {

struct QuadratureRule {
    std::vector<double> nodes;    // increasing
    std::vector<double> weights;
    std::size_t order = 0;
    /// Max deviation between the eigenvector weights and the weights from the
    /// first column of the inverse polynomial-value matrix.
    double weight_crosscheck = 0.0;
    /// Max deviation from the weights solving sum_l w_l x_l^j = m_j, j < k.
    double moment_crosscheck = 0.0;
    /// True when the rule came from the companion / moment-system fallback.
    bool fallback = false;
};

struct TridiagonalEigen {
    std::vector<double> values;        // ascending
    std::vector<double> first_components;  // first component of each unit eigenvector
};

/// Symmetric tridiagonal eigenproblem by implicit-shift QL (Wilkinson shift).
/// Only the first eigenvector components are accumulated.
TridiagonalEigen symmetric_tridiagonal_eigen(std::vector<double> diagonal, std::vector<double> offdiagonal);

/// All complex roots of a polynomial (ascending coefficients) by
/// Aberth-Ehrlich iteration.
std::vector<std::complex<double>> polynomial_roots(const std::vector<double>& coeffs);

/// max_{j <= 2k-1} |sum_l w_l x_l^j - m_j|.
double exactness_check(const QuadratureRule& rule, const std::vector<double>& moments);

namespace detail {

QuadratureRule gauss_rule_from_recurrence(const std::vector<double>& diagonal,
                                          const std::vector<double>& offdiagonal,
                                          const std::vector<std::vector<double>>& polys, double h0);

/// Weights solving the Vandermonde moment system at fixed nodes.
std::optional<std::vector<double>> moment_system_weights(const std::vector<double>& nodes,
                                                         const std::vector<double>& moments);

QuadratureRule gauss_rule_fallback(const std::vector<double>& pk, const std::vector<double>& moments,
                                   std::size_t k, std::size_t failing_index);

}  // namespace detail

/// k-point Gauss rule of a Hankel family (truncation order >= k+1), scaled so
/// that the weights sum to `h0`. Nodes are the eigenvalues of J^{[k]} after
/// symmetrization; weights are h0 times squared first eigenvector
/// components, cross-checked against h0 times the first column of P^{-1},
/// P_{i,l} = P_i(node_l). Non-positive norms fall back to polynomial roots and
/// the moment system sum_l w_l x_l^j = m_j.
template <Scalar T>
QuadratureRule gauss_rule(const BiorthFamilies<T>& f, std::size_t k, double h0) {
    if (!f.hankel) throw NotHankel("gauss_rule requires a Hankel family");
    if (k == 0) throw InvalidArgument("quadrature order must be >= 1");
    if (f.order() < k + 1) throw InsufficientTruncation(k, "family order must exceed the rule order");

    const auto rec = three_term_coeffs(f);
    std::vector<double> diag(k), off;
    for (std::size_t i = 0; i < k; ++i) diag[i] = to_double(rec.diagonal[i]);
    std::optional<std::size_t> non_positive;
    for (std::size_t i = 0; i + 1 < k; ++i) {
        const double b = to_double(rec.offdiagonal[i]);
        if (!(b > 0.0) && !non_positive) non_positive = i + 1;
        off.push_back(b);
    }
    std::vector<std::vector<double>> polys;
    for (std::size_t i = 0; i <= k; ++i) {
        const auto p = f.p1(i);
        std::vector<double> c;
        for (const auto& v : p.coeffs()) c.push_back(to_double(v));
        polys.push_back(std::move(c));
    }
    const double scale = h0 / to_double(f.norms[0]);
    std::vector<double> moments;
    for (std::size_t j = 0; j < f.gram.cols(); ++j) moments.push_back(scale * to_double(f.gram(0, j)));
    for (std::size_t i = 1; i < f.gram.rows(); ++i)
        moments.push_back(scale * to_double(f.gram(i, f.gram.cols() - 1)));
    if (non_positive) return detail::gauss_rule_fallback(polys[k], moments, k, *non_positive);
    auto rule = detail::gauss_rule_from_recurrence(diag, off, polys, h0);
    if (auto w = detail::moment_system_weights(rule.nodes, moments)) {
        for (std::size_t l = 0; l < k; ++l)
            rule.moment_crosscheck = std::max(rule.moment_crosscheck, std::abs((*w)[l] - rule.weights[l]));
    } else {
        rule.moment_crosscheck = INFINITY;
    }
    return rule;
}

}  // namespace opgb
