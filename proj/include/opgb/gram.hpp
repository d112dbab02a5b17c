#pragma once

// Gram (moment) matrices of measure descriptions. All moment data is produced
// exactly; float-mode callers convert the finished matrix.

#include "opgb/matrix.hpp"
#include "opgb/measure.hpp"
#include "opgb/scalar.hpp"

#include <cstddef>
#include <vector>

namespace opgb {

/// (m_0, ..., m_{j_max}). An atom (q, w, d) contributes w j!/(j-d)! q^{j-d}
/// for j >= d.
std::vector<Rational> moments_discrete(const DiscreteMeasure& m, std::size_t j_max);

/// Normalized moments (m_0 = 1) from the Pearson recurrence
/// (A + j a) m_{j+1} = -(B + j b) m_j - j c m_{j-1}.
std::vector<Rational> moments_classical(const ClassicalWeight& w, std::size_t j_max);

/// n x n Gram matrix: Hankel in the moments for measures, the (leading block
/// of the) table verbatim for bivariate sources.
Matrix<Rational> gram_matrix(const GramSource& source, std::size_t n);

/// Hankel matrix G_{i,j} = m_{i+j}; needs 2n-1 moments.
Matrix<Rational> hankel_from_moments(const std::vector<Rational>& moments, std::size_t n);

/// c_j(a) = integral of x^j / (a - x) against the measure, j <= j_max.
/// c_0 is summed over the atoms; higher terms use c_j = a c_{j-1} - m_{j-1}.
std::vector<Rational> cauchy_moments(const DiscreteMeasure& m, const Rational& a, std::size_t j_max);

/// Same recurrence seeded with a known Markov value c_0(a) and moments.
template <Scalar T>
std::vector<T> cauchy_moments_from_markov(const T& markov, const T& a, const std::vector<T>& moments,
                                          std::size_t j_max) {
    if (j_max > moments.size()) throw InvalidArgument("not enough moments for the Cauchy recurrence");
    std::vector<T> c(j_max + 1);
    c[0] = markov;
    for (std::size_t j = 1; j <= j_max; ++j) c[j] = a * c[j - 1] - moments[j - 1];
    return c;
}

/// Physical zeroth moment of a classical weight (sqrt(pi), Gamma(alpha+1), ...).
/// Irrational in general, reported as metadata only.
double classical_physical_mass(const ClassicalWeight& w);

}  // namespace opgb
