#pragma once

// Biorthogonal polynomial families built from the Gauss-Borel factorization
// G = S1^{-1} H S2^{-T} of a Gram matrix, together with the objects derived
// from them: spectral (Jacobi) matrices, second kind functions and
// Christoffel-Darboux kernels.

#include "opgb/errors.hpp"
#include "opgb/gram.hpp"
#include "opgb/matrix.hpp"
#include "opgb/measure.hpp"
#include "opgb/numlin.hpp"
#include "opgb/polynomial.hpp"
#include "opgb/scalar.hpp"

#include <cstddef>
#include <functional>
#include <vector>

namespace opgb {

enum class Side { first = 1, second = 2 };

/// Rows of S1 and S2 are the coefficients of the monic families P_{1,k} and
/// P_{2,k}; norms holds H_0..H_{n-1}.
template <Scalar T>
struct BiorthFamilies {
    Matrix<T> gram;
    Matrix<T> s1;
    Matrix<T> s2;
    std::vector<T> norms;
    bool hankel = false;

    std::size_t order() const noexcept { return norms.size(); }

    const Matrix<T>& coefficients(Side side) const { return side == Side::first ? s1 : s2; }

    Polynomial<T> poly(Side side, std::size_t k) const {
        check_degree(k);
        const auto row = coefficients(side).row(k);
        return Polynomial<T>(std::vector<T>(row.begin(), row.begin() + static_cast<long>(k) + 1));
    }
    Polynomial<T> p1(std::size_t k) const { return poly(Side::first, k); }
    Polynomial<T> p2(std::size_t k) const { return poly(Side::second, k); }

    void check_degree(std::size_t k) const {
        if (k >= order()) throw InvalidArgument("degree " + std::to_string(k) + " exceeds truncation order");
    }
};

struct BuildOptions {
    /// Accept a vanishing final pivot. P_{n-1} is then still the monic
    /// polynomial orthogonal to lower degrees but H_{n-1} = 0; used when the
    /// truncation order equals the number of atoms of a discrete measure.
    bool allow_degenerate_last = false;
};

namespace detail {

template <Scalar T>
LduFactors<T> ldu_allowing_last(const Matrix<T>& g) {
    const std::size_t n = g.rows();
    if (n <= 1) {
        return {Matrix<T>::identity(n), std::vector<T>(n, n ? g(0, 0) : T(0)), Matrix<T>::identity(n)};
    }
    auto head = ldu_factorize(g.leading(n - 1));
    // Complete the last row of L, column of U and pivot by direct substitution.
    LduFactors<T> f{Matrix<T>::identity(n), head.diag, Matrix<T>::identity(n)};
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = 0; j + 1 < n; ++j) {
            f.lower(i, j) = head.lower(i, j);
            f.upper(i, j) = head.upper(i, j);
        }
    const std::size_t k = n - 1;
    for (std::size_t j = 0; j < k; ++j) {
        T below = g(k, j);
        T right = g(j, k);
        for (std::size_t i = 0; i < j; ++i) {
            below -= f.lower(k, i) * f.diag[i] * f.upper(i, j);
            right -= f.lower(j, i) * f.diag[i] * f.upper(i, k);
        }
        f.lower(k, j) = below / f.diag[j];
        f.upper(j, k) = right / f.diag[j];
    }
    T pivot = g(k, k);
    for (std::size_t j = 0; j < k; ++j) pivot -= f.lower(k, j) * f.diag[j] * f.upper(j, k);
    f.diag.push_back(pivot);
    return f;
}

}  // namespace detail

/// S1 = L^{-1}, H = D, S2 = (U^T)^{-1} from the LDU factorization of G.
template <Scalar T>
BiorthFamilies<T> build_families(const Matrix<T>& g, BuildOptions options = {}) {
    if (!g.square() || g.rows() == 0) throw InvalidArgument("Gram matrix must be square and nonempty");
    LduFactors<T> f = options.allow_degenerate_last ? detail::ldu_allowing_last(g) : ldu_factorize(g);
    BiorthFamilies<T> out;
    out.gram = g;
    out.s1 = unit_lower_inverse(f.lower);
    out.s2 = unit_lower_inverse(f.upper.transpose());
    out.norms = std::move(f.diag);
    out.hankel = is_symmetric(g);
    return out;
}

/// Horner evaluation of P_{side,k}(x).
template <Scalar T>
T eval_poly(const BiorthFamilies<T>& f, Side side, std::size_t k, const T& x) {
    f.check_degree(k);
    const auto row = f.coefficients(side).row(k);
    T acc(0);
    for (std::size_t j = k + 1; j-- > 0;) acc = acc * x + row[j];
    return acc;
}

template <Scalar T>
struct SpectralMatrix {
    Matrix<T> j;  // (n-1) x (n-1) valid block of S Lambda S^{-1}
    Side side = Side::first;
};

/// Leading (n-1) x (n-1) block of S Lambda S^{-1}. Row n-1 of the truncated
/// conjugation would need S^{-1} beyond the truncation and is dropped.
template <Scalar T>
SpectralMatrix<T> spectral_matrix(const BiorthFamilies<T>& f, Side side) {
    const std::size_t n = f.order();
    if (n < 2) throw InvalidArgument("spectral matrix needs truncation order >= 2");
    const Matrix<T>& s = f.coefficients(side);
    Matrix<T> full = s * shift_matrix<T>(n) * unit_lower_inverse(s);
    return {full.leading(n - 1), side};
}

/// Three-term recurrence x P_k = P_{k+1} + a_k P_k + b_k P_{k-1}.
/// diagonal[k] = a_k = S_{k,k-1} - S_{k+1,k} (k <= n-2);
/// offdiagonal[k-1] = b_k = H_k / H_{k-1} (1 <= k <= n-1).
template <Scalar T>
struct ThreeTermCoefficients {
    std::vector<T> diagonal;
    std::vector<T> offdiagonal;
};

template <Scalar T>
ThreeTermCoefficients<T> three_term_coeffs(const BiorthFamilies<T>& f) {
    if (!f.hankel) throw NotHankel("three-term recurrence requires a Hankel (symmetric) Gram matrix");
    const std::size_t n = f.order();
    ThreeTermCoefficients<T> out;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        T a = -f.s1(k + 1, k);
        if (k > 0) a += f.s1(k, k - 1);
        out.diagonal.push_back(a);
    }
    for (std::size_t k = 1; k < n; ++k) {
        if (is_zero(f.norms[k - 1])) throw NotQuasiDefinite(k - 1, "zero norm in recurrence");
        out.offdiagonal.push_back(f.norms[k] / f.norms[k - 1]);
    }
    return out;
}

/// k x k tridiagonal Jacobi matrix with unit superdiagonal assembled from
/// recurrence coefficients.
template <Scalar T>
Matrix<T> jacobi_from_recurrence(const ThreeTermCoefficients<T>& r, std::size_t k) {
    if (k > r.diagonal.size() || (k > 0 && k - 1 > r.offdiagonal.size()))
        throw InsufficientTruncation(k, "not enough recurrence coefficients");
    Matrix<T> j(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        j(i, i) = r.diagonal[i];
        if (i + 1 < k) {
            j(i, i + 1) = T(1);
            j(i + 1, i) = r.offdiagonal[i];
        }
    }
    return j;
}

/// K_n(x, y) = sum_{k<=n} P_{2,k}(y) H_k^{-1} P_{1,k}(x).
template <Scalar T>
T cd_kernel(const BiorthFamilies<T>& f, std::size_t n, const T& x, const T& y) {
    f.check_degree(n);
    T acc(0);
    for (std::size_t k = 0; k <= n; ++k)
        acc += eval_poly(f, Side::second, k, y) * eval_poly(f, Side::first, k, x) / f.norms[k];
    return acc;
}

/// K_n(., y) as a polynomial in its first argument.
template <Scalar T>
Polynomial<T> cd_kernel_in_x(const BiorthFamilies<T>& f, std::size_t n, const T& y) {
    f.check_degree(n);
    Polynomial<T> acc;
    for (std::size_t k = 0; k <= n; ++k) acc += f.p1(k) * (eval_poly(f, Side::second, k, y) / f.norms[k]);
    return acc;
}

/// K_n(x, .) as a polynomial in its second argument.
template <Scalar T>
Polynomial<T> cd_kernel_in_y(const BiorthFamilies<T>& f, std::size_t n, const T& x) {
    f.check_degree(n);
    Polynomial<T> acc;
    for (std::size_t k = 0; k <= n; ++k) acc += f.p2(k) * (eval_poly(f, Side::first, k, x) / f.norms[k]);
    return acc;
}

/// <P(x), Q(y)> = p^T G q on coefficient vectors.
template <Scalar T>
T bilinear_form(const Matrix<T>& g, const Polynomial<T>& p, const Polynomial<T>& q) {
    if (p.coeffs().size() > g.rows() || q.coeffs().size() > g.cols())
        throw InsufficientTruncation(std::max(p.coeffs().size(), q.coeffs().size()),
                                     "polynomial degree exceeds Gram truncation");
    T acc(0);
    for (std::size_t i = 0; i < p.coeffs().size(); ++i)
        for (std::size_t j = 0; j < q.coeffs().size(); ++j) acc += p.coeffs()[i] * g(i, j) * q.coeffs()[j];
    return acc;
}

/// Right-hand side of the ABC theorem: chi(y)^T (G^{[l]})^{-1} chi(x).
template <Scalar T>
T abc_kernel(const Matrix<T>& g, std::size_t l, const T& x, const T& y) {
    if (l == 0 || l > g.rows() || l > g.cols()) throw InvalidArgument("abc_kernel truncation out of range");
    std::vector<T> chi_x(l), chi_y(l);
    T px(1), py(1);
    for (std::size_t i = 0; i < l; ++i) {
        chi_x[i] = px;
        chi_y[i] = py;
        px *= x;
        py *= y;
    }
    auto z = try_solve_vector<T>(g.leading(l), chi_x);
    if (!z) throw SingularTruncation(l, "G^{[l]} is singular");
    T acc(0);
    for (std::size_t i = 0; i < l; ++i) acc += chi_y[i] * (*z)[i];
    return acc;
}

/// Second kind functions C_{1,k}(a), C_{2,k}(a), k < order.
template <Scalar T>
struct SecondKindValues {
    T point;
    std::vector<T> c1;
    std::vector<T> c2;
};

/// C_{i,k}(a) = sum_j S_{i;k,j} c_j(a) from Cauchy moments c_j(a).
template <Scalar T>
SecondKindValues<T> second_kind_from_cauchy(const BiorthFamilies<T>& f, const T& a, const std::vector<T>& c) {
    const std::size_t n = f.order();
    if (c.size() < n) throw InvalidArgument("not enough Cauchy moments");
    SecondKindValues<T> out{a, std::vector<T>(n, T(0)), std::vector<T>(n, T(0))};
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j <= k; ++j) {
            out.c1[k] += f.s1(k, j) * c[j];
            out.c2[k] += f.s2(k, j) * c[j];
        }
    return out;
}

/// Exact second kind values of a measure-backed family.
template <Scalar T>
SecondKindValues<T> second_kind_values(const BiorthFamilies<T>& f, const DiscreteMeasure& m, const Rational& a) {
    if (f.order() == 0) throw InvalidArgument("empty family");
    const auto c = cauchy_moments(m, a, f.order() - 1);
    std::vector<T> ct;
    ct.reserve(c.size());
    for (const auto& v : c) ct.push_back(from_rational<T>(v));
    return second_kind_from_cauchy(f, from_rational<T>(a), ct);
}

/// Second kind values from a Markov value c_0(a), using the moments stored in
/// the (Hankel) Gram matrix.
template <Scalar T>
SecondKindValues<T> second_kind_from_markov(const BiorthFamilies<T>& f, const T& a, const T& markov) {
    if (!f.hankel) throw NotHankel("Markov seeded second kind values need a Hankel family");
    std::vector<T> moments;
    for (std::size_t j = 0; j < f.gram.cols(); ++j) moments.push_back(f.gram(0, j));
    return second_kind_from_cauchy(f, a, cauchy_moments_from_markov(markov, a, moments, f.order() - 1));
}

/// Truncated Laurent series C_1(z) = H S2^{-T} chi*(z); converges only for |z|
/// larger than the support radius. Float diagnostics only.
template <Scalar T>
std::vector<double> second_kind_series(const BiorthFamilies<T>& f, double z) {
    const std::size_t n = f.order();
    const Matrix<T> s2inv_t = unit_lower_inverse(f.s2).transpose();
    std::vector<double> out(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        double zpow = 1.0 / z;
        for (std::size_t j = 0; j < n; ++j) {
            out[k] += to_double(f.norms[k]) * to_double(s2inv_t(k, j)) * zpow;
            zpow /= z;
        }
    }
    return out;
}

/// K^mix_n(x, y) = sum_{k<=n} P_{2,k}(y) H_k^{-1} C_{1,k}(x) with C1 taken at x.
template <Scalar T>
T mixed_cd_kernel(const BiorthFamilies<T>& f, const SecondKindValues<T>& c1_at_x, std::size_t n, const T& y) {
    f.check_degree(n);
    if (c1_at_x.c1.size() <= n) throw InvalidArgument("second kind values too short");
    T acc(0);
    for (std::size_t k = 0; k <= n; ++k) acc += eval_poly(f, Side::second, k, y) * c1_at_x.c1[k] / f.norms[k];
    return acc;
}

/// Heine representation of P_k(x) summed over ordered k-tuples of atoms:
/// 1/(k! det G^{[k]}) sum prod w prod (x - x_j) prod_{j<l} (x_l - x_j)^2.
/// Cost grows as atoms^k; intended as an oracle for small k.
template <Scalar T>
T heine_oracle(const DiscreteMeasure& m, std::size_t k, const T& x) {
    if (m.has_derivative_atoms()) throw UnsupportedMeasure("heine_oracle needs plain point masses");
    if (k == 0) return T(1);
    const std::size_t atoms = m.atoms.size();
    const T det = from_rational<T>(determinant(gram_matrix(m, k)));
    if (is_zero(det)) throw SingularTruncation(k, "det G^{[k]} vanishes");

    std::vector<std::size_t> idx(k, 0);
    T total(0);
    while (true) {
        T term(1);
        for (std::size_t a = 0; a < k; ++a) {
            const auto& atom = m.atoms[idx[a]];
            term *= from_rational<T>(atom.weight) * (x - from_rational<T>(atom.position));
        }
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = a + 1; b < k; ++b) {
                const T diff = from_rational<T>(m.atoms[idx[b]].position - m.atoms[idx[a]].position);
                term *= diff * diff;
            }
        total += term;
        // odometer increment
        std::size_t pos = 0;
        while (pos < k && ++idx[pos] == atoms) idx[pos++] = 0;
        if (pos == k) break;
    }
    return total / (from_rational<T>(factorial(static_cast<unsigned>(k))) * det);
}

}  // namespace opgb
