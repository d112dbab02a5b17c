#pragma once

// Christoffel, Geronimus and linear spectral transformations of a bilinear
// form: perturbed Gram matrices, connectors, jets and the explicit
// Christoffel-type formulas for the perturbed families.

#include "opgb/biorth.hpp"
#include "opgb/errors.hpp"
#include "opgb/gram.hpp"
#include "opgb/matrix.hpp"
#include "opgb/measure.hpp"
#include "opgb/numlin.hpp"
#include "opgb/polynomial.hpp"
#include "opgb/scalar.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace opgb {

/// Monic W(x) = prod (x - r_i)^{m_i}.
struct PolyPerturbation {
    std::vector<std::pair<Rational, unsigned>> roots;

    std::size_t degree() const {
        std::size_t n = 0;
        for (const auto& [r, m] : roots) n += m;
        return n;
    }
    template <Scalar T = Rational>
    Polynomial<T> polynomial() const {
        std::vector<std::pair<T, unsigned>> rs;
        for (const auto& [r, m] : roots) rs.emplace_back(from_rational<T>(r), m);
        return polynomial_from_roots<T>(rs);
    }
    bool has_root(const Rational& x) const {
        for (const auto& [r, m] : roots)
            if (r == x && m > 0) return true;
        return false;
    }
};

/// Free data of a simple Geronimus root q: the mass xi placed at q and the
/// Markov value c_0(q) of the measure being divided.
template <Scalar T>
struct GeronimusFreeData {
    T q;
    T xi;
    T markov;
};

enum class ConnectorDirection { christoffel, geronimus };

template <Scalar T>
struct Connector {
    Matrix<T> omega;
    ConnectorDirection direction = ConnectorDirection::christoffel;
};

/// Outputs of a Christoffel-type formula at degree n.
template <Scalar T>
struct TransformedDegree {
    Polynomial<T> p1;
    Polynomial<T> p2;
    T h;
    T omega{};  // connector entry the formula produces (diagonal or subdiagonal)
};

namespace detail {

template <Scalar T>
void require_zero_remainder(const Polynomial<T>& rem, std::size_t n) {
    if constexpr (ScalarTraits<T>::exact) {
        if (!rem.zero()) throw FormulaInconsistency(n, "nonzero remainder in exact division");
    } else {
        for (const auto& c : rem.coeffs())
            if (std::abs(c) >= 1e-9) throw FormulaInconsistency(n, "division remainder exceeds 1e-9");
    }
}

template <Scalar T>
Polynomial<T> exact_divide(const Polynomial<T>& num, const Polynomial<T>& den, std::size_t n) {
    auto [q, r] = num.divmod_monic(den);
    require_zero_remainder(r, n);
    return q;
}

}  // namespace detail

/// W(Lambda) G restricted to its valid (m - N) x (m - N) block.
template <Scalar T>
Matrix<T> christoffel_gram(const Matrix<T>& g, const PolyPerturbation& w) {
    const std::size_t big_n = w.degree();
    const std::size_t m = g.rows();
    if (m <= big_n) throw InsufficientTruncation(big_n, "Gram truncation must exceed the perturbation degree");
    const auto coeffs = w.polynomial<T>().coeffs();
    const Matrix<T> full = polynomial_of_operator<T>(coeffs, shift_matrix<T>(m)) * g;
    return full.block(0, 0, m - big_n, std::min(m - big_n, g.cols()));
}

/// Degree-one Christoffel formulas for W = x - a.
template <Scalar T>
TransformedDegree<T> christoffel_polys_deg1(const BiorthFamilies<T>& f, const T& a, std::size_t n) {
    if (n + 1 >= f.order()) throw InsufficientTruncation(n, "need P_{n+1} in the truncation");
    const T pn = eval_poly(f, Side::first, n, a);
    if (is_zero(pn)) throw ZeroAtRoot(n, "P_{1,n} vanishes at the Christoffel root");
    const T ratio = eval_poly(f, Side::first, n + 1, a) / pn;
    TransformedDegree<T> out;
    out.p1 = detail::exact_divide(f.p1(n + 1) - f.p1(n) * ratio, Polynomial<T>::linear(a), n);
    out.p2 = cd_kernel_in_y(f, n, a) * (f.norms[n] / pn);
    out.h = -ratio * f.norms[n];
    out.omega = -ratio;
    return out;
}

/// Hankel alternative: P^_n(x) = H_n K_n(a, x) / P_n(a).
template <Scalar T>
Polynomial<T> christoffel_kernel_formula(const BiorthFamilies<T>& f, const T& a, std::size_t n) {
    if (!f.hankel) throw NotHankel("kernel form of the Christoffel formula needs a Hankel family");
    const T pn = eval_poly(f, Side::first, n, a);
    if (is_zero(pn)) throw ZeroAtRoot(n, "P_n vanishes at the Christoffel root");
    return cd_kernel_in_y(f, n, a) * (f.norms[n] / pn);
}

/// (f(r_1), f'(r_1)/1!, ..., f^{(m_1-1)}(r_1)/(m_1-1)!, f(r_2), ...)
template <Scalar T>
std::vector<T> jet(const Polynomial<T>& p, const PolyPerturbation& w) {
    std::vector<T> out;
    out.reserve(w.degree());
    for (const auto& [r, m] : w.roots) {
        const auto t = p.taylor_at(from_rational<T>(r), m);
        out.insert(out.end(), t.begin(), t.end());
    }
    return out;
}

template <Scalar T>
std::vector<T> jet(std::span<const T> coeffs, const PolyPerturbation& w) {
    return jet(Polynomial<T>(std::vector<T>(coeffs.begin(), coeffs.end())), w);
}

/// General Christoffel formulas, all three outputs from one quasi-determinant.
///
/// Rows 0..N-1 hold the jets of P_n..P_{n+N-1}; the trailing rows hold the jet
/// of P_{n+N} and, per power y^l, the jet of the y^l coefficient of
/// K_{n+N-1}(., y). Trailing columns: coefficients of P_{.}(x) and H_n e_0.
template <Scalar T>
TransformedDegree<T> christoffel_polys_general(const BiorthFamilies<T>& f, const PolyPerturbation& w,
                                               std::size_t n) {
    const std::size_t big_n = w.degree();
    if (big_n == 0) return {f.p1(n), f.p2(n), f.norms[n], T(1)};
    if (n + big_n >= f.order()) throw InsufficientTruncation(n, "need P_{n+N} in the truncation");

    const std::size_t top = n + big_n;       // degree of the numerator
    const std::size_t kernel_deg = top - 1;  // K_{n+N-1}
    const std::size_t rows = big_n + 1 + (kernel_deg + 1);
    const std::size_t cols = big_n + (top + 1) + 1;
    Matrix<T> m(rows, cols);

    std::vector<std::vector<T>> jets(top + 1);
    for (std::size_t k = 0; k <= top; ++k) jets[k] = jet(f.p1(k), w);

    for (std::size_t i = 0; i <= big_n; ++i) {
        const std::size_t k = n + i;
        for (std::size_t c = 0; c < big_n; ++c) m(i, c) = jets[k][c];
        for (std::size_t j = 0; j <= k; ++j) m(i, big_n + j) = f.s1(k, j);
    }
    m(0, cols - 1) = f.norms[n];
    // K_{n+N-1}(x, y) = sum_k P_{2,k}(y) P_{1,k}(x) / H_k; jet in x, coefficient of y^l.
    for (std::size_t l = 0; l <= kernel_deg; ++l) {
        const std::size_t r = big_n + 1 + l;
        for (std::size_t k = l; k <= kernel_deg; ++k) {
            const T scale = f.s2(k, l) / f.norms[k];
            if (is_zero(scale)) continue;
            for (std::size_t c = 0; c < big_n; ++c) m(r, c) += scale * jets[k][c];
        }
    }

    Matrix<T> theta;
    try {
        theta = quasi_det_last(m, big_n);
    } catch (const SingularBlock&) {
        throw SingularJetMatrix(n, "jet matrix of P_n..P_{n+N-1} is singular");
    }

    std::vector<T> num(top + 1);
    for (std::size_t j = 0; j <= top; ++j) num[j] = theta(0, j);
    TransformedDegree<T> out;
    out.p1 = detail::exact_divide(Polynomial<T>(std::move(num)), w.polynomial<T>(), n);
    out.h = theta(0, top + 1);
    std::vector<T> p2(kernel_deg + 1);
    for (std::size_t l = 0; l <= kernel_deg; ++l) p2[l] = -theta(1 + l, top + 1);
    out.p2 = Polynomial<T>(std::move(p2));
    out.omega = out.h / f.norms[n];
    return out;
}

/// Family assembled from formula outputs for degrees 0..order-1.
template <Scalar T>
BiorthFamilies<T> family_from_degrees(const std::vector<TransformedDegree<T>>& degs, const Matrix<T>& gram,
                                      bool hankel) {
    const std::size_t n = degs.size();
    BiorthFamilies<T> out;
    out.gram = gram;
    out.s1 = Matrix<T>(n, n);
    out.s2 = Matrix<T>(n, n);
    out.hankel = hankel;
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j <= k; ++j) {
            out.s1(k, j) = degs[k].p1.coeff(j);
            out.s2(k, j) = degs[k].p2.coeff(j);
        }
        out.norms.push_back(degs[k].h);
    }
    return out;
}

/// Christoffel-transformed family via the general formulas, order m - N.
template <Scalar T>
BiorthFamilies<T> christoffel_family(const BiorthFamilies<T>& f, const PolyPerturbation& w) {
    const std::size_t big_n = w.degree();
    if (f.order() <= big_n) throw InsufficientTruncation(big_n, "family order must exceed the perturbation degree");
    std::vector<TransformedDegree<T>> degs;
    for (std::size_t n = 0; n + big_n < f.order(); ++n) degs.push_back(christoffel_polys_general(f, w, n));
    return family_from_degrees(degs, christoffel_gram(f.gram, w), f.hankel);
}

/// omega^ = S^_1 W(Lambda) S_1^{-1}: m^ x (m^ + N), band N + 1, unit N-th
/// superdiagonal. Requires original order >= m^ + N.
template <Scalar T>
Connector<T> christoffel_connector(const BiorthFamilies<T>& f, const BiorthFamilies<T>& fhat,
                                   const PolyPerturbation& w) {
    const std::size_t big_n = w.degree();
    const std::size_t mh = fhat.order();
    const std::size_t m = f.order();
    if (m < mh + big_n) throw InsufficientTruncation(mh, "original family too short for the connector");
    const auto coeffs = w.polynomial<T>().coeffs();
    const Matrix<T> ws = polynomial_of_operator<T>(coeffs, shift_matrix<T>(m)) * unit_lower_inverse(f.s1);
    Matrix<T> shat(mh, m);
    for (std::size_t i = 0; i < mh; ++i)
        for (std::size_t j = 0; j <= i; ++j) shat(i, j) = fhat.s1(i, j);
    return {(shat * ws).block(0, 0, mh, mh + big_n), ConnectorDirection::christoffel};
}

/// H^ (S_2 S^_2^{-1})^T H^{-1} on the square m^ x m^ block.
template <Scalar T>
Matrix<T> christoffel_connector_from_second(const BiorthFamilies<T>& f, const BiorthFamilies<T>& fhat) {
    const std::size_t mh = fhat.order();
    if (f.order() < mh) throw InsufficientTruncation(mh, "original family too short");
    const Matrix<T> prod = f.s2.leading(mh) * unit_lower_inverse(fhat.s2);
    Matrix<T> out = prod.transpose();
    for (std::size_t i = 0; i < mh; ++i)
        for (std::size_t j = 0; j < mh; ++j) out(i, j) = fhat.norms[i] * out(i, j) / f.norms[j];
    return out;
}

/// First column -c_i(a) + xi a^i of the Geronimus Gram for a Hankel family,
/// seeded by the Markov value c_0(a).
template <Scalar T>
std::vector<T> geronimus_first_column(const BiorthFamilies<T>& f, const T& a, const T& xi, const T& markov) {
    const std::size_t m = f.gram.rows();
    std::vector<T> moments;
    for (std::size_t j = 0; j < f.gram.cols(); ++j) moments.push_back(f.gram(0, j));
    const auto c = cauchy_moments_from_markov(markov, a, moments, m - 1);
    std::vector<T> out(m);
    T apow(1);
    for (std::size_t i = 0; i < m; ++i) {
        out[i] = -c[i] + xi * apow;
        apow *= a;
    }
    return out;
}

/// Column recursion G'_{i,j+1} = a G'_{i,j} + G_{i,j}, i.e. G'(Lambda^T - a) = G.
template <Scalar T>
Matrix<T> geronimus_gram(const Matrix<T>& g, const T& a, const std::vector<T>& first_col) {
    if (first_col.size() != g.rows()) throw InvalidArgument("first column must have the truncation length");
    Matrix<T> out(g.rows(), g.cols());
    for (std::size_t i = 0; i < g.rows(); ++i) {
        out(i, 0) = first_col[i];
        for (std::size_t j = 0; j + 1 < g.cols(); ++j) out(i, j + 1) = a * out(i, j) + g(i, j);
    }
    return out;
}

/// <xi_x, P_{1,k}> = xi P_{1,k}(a) for a single mass xi at a.
template <Scalar T>
std::vector<T> xi_pairing_single_mass(const BiorthFamilies<T>& f, const T& a, const T& xi) {
    std::vector<T> out;
    for (std::size_t k = 0; k < f.order(); ++k) out.push_back(xi * eval_poly(f, Side::first, k, a));
    return out;
}

/// Degree-one Geronimus formulas. With D_k = C_{1,k}(a) - <xi_x, P_{1,k}>:
/// P'_{1,n} = P_{1,n} - (D_n / D_{n-1}) P_{1,n-1}, H'_n = -(D_n / D_{n-1}) H_{n-1},
/// P'_{2,n}(y) = H_{n-1} [(y - a) sum_{k<n} P_{2,k}(y) D_k / H_k + 1] / D_{n-1},
/// H'_0 = -D_0.
template <Scalar T>
TransformedDegree<T> geronimus_polys_deg1(const BiorthFamilies<T>& f, const SecondKindValues<T>& c1,
                                          const std::vector<T>& xi_pairing, std::size_t n) {
    f.check_degree(n);
    if (c1.c1.size() <= n || xi_pairing.size() <= n) throw InvalidArgument("second kind data too short");
    auto d = [&](std::size_t k) { return c1.c1[k] - xi_pairing[k]; };
    TransformedDegree<T> out;
    if (n == 0) {
        out.p1 = Polynomial<T>::constant(T(1));
        out.p2 = Polynomial<T>::constant(T(1));
        out.h = -d(0);
        out.omega = T(0);
        return out;
    }
    const T den = d(n - 1);
    if (is_zero(den)) throw ZeroDenominator(n, "C_{1,n-1}(a) - <xi, P_{1,n-1}> vanishes");
    const T rho = d(n) / den;
    out.p1 = f.p1(n) - f.p1(n - 1) * rho;
    out.h = -rho * f.norms[n - 1];
    Polynomial<T> sum;
    for (std::size_t k = 0; k < n; ++k) sum += f.p2(k) * (d(k) / f.norms[k]);
    out.p2 = (Polynomial<T>::linear(c1.point) * sum + Polynomial<T>::constant(T(1))) * (f.norms[n - 1] / den);
    out.omega = -rho;
    return out;
}

/// Geronimus-transformed family of the same order from the degree-one formulas.
template <Scalar T>
BiorthFamilies<T> geronimus_family(const BiorthFamilies<T>& f, const SecondKindValues<T>& c1,
                                   const std::vector<T>& xi_pairing, const Matrix<T>& perturbed_gram) {
    std::vector<TransformedDegree<T>> degs;
    for (std::size_t n = 0; n < f.order(); ++n) degs.push_back(geronimus_polys_deg1(f, c1, xi_pairing, n));
    return family_from_degrees(degs, perturbed_gram, f.hankel);
}

/// omega = S'_1 S_1^{-1}: unit lower bidiagonal for a degree-one step.
template <Scalar T>
Connector<T> geronimus_connector(const BiorthFamilies<T>& f, const BiorthFamilies<T>& fcheck) {
    const std::size_t m = std::min(f.order(), fcheck.order());
    return {fcheck.s1.leading(m) * unit_lower_inverse(f.s1.leading(m)), ConnectorDirection::geronimus};
}

template <Scalar T>
struct GeronimusStep {
    GeronimusFreeData<T> data;
    Matrix<T> gram;
    BiorthFamilies<T> family;
};

/// One Hankel Geronimus step (single mass xi at q).
template <Scalar T>
GeronimusStep<T> geronimus_step(const BiorthFamilies<T>& f, const GeronimusFreeData<T>& d) {
    if (!f.hankel) throw NotHankel("Geronimus step with a mass at q needs a Hankel family");
    const Matrix<T> g = geronimus_gram(f.gram, d.q, geronimus_first_column(f, d.q, d.xi, d.markov));
    const auto c1 = second_kind_from_markov(f, d.q, d.markov);
    const auto xi = xi_pairing_single_mass(f, d.q, d.xi);
    return {d, g, geronimus_family(f, c1, xi, g)};
}

/// Iterated degree-one Geronimus over distinct simple roots. Markov values in
/// `steps` refer to the original measure; the values at later roots are
/// carried through C'_0(y) = (C_0(y) - C_0(q) + xi) / (y - q).
template <Scalar T>
std::vector<GeronimusStep<T>> geronimus_iterated(const BiorthFamilies<T>& f, std::vector<GeronimusFreeData<T>> steps) {
    for (std::size_t i = 0; i < steps.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (steps[i].q == steps[j].q) throw InvalidArgument("Geronimus roots must be simple");
    std::vector<GeronimusStep<T>> out;
    const BiorthFamilies<T>* cur = &f;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        out.push_back(geronimus_step(*cur, steps[i]));
        cur = &out.back().family;
        for (std::size_t j = i + 1; j < steps.size(); ++j)
            steps[j].markov = (steps[j].markov - steps[i].markov + steps[i].xi) / (steps[j].q - steps[i].q);
    }
    return out;
}

template <Scalar T>
struct LinearSpectralResult {
    std::vector<GeronimusStep<T>> geronimus;
    Matrix<T> gram;  // composed Gram
    BiorthFamilies<T> family;
};

/// Geronimus-Uvarov: iterated Geronimus by W_G, then general Christoffel by W_C.
template <Scalar T>
LinearSpectralResult<T> linear_spectral(const BiorthFamilies<T>& f, const PolyPerturbation& wc,
                                        const std::vector<GeronimusFreeData<T>>& wg) {
    for (std::size_t i = 0; i < wc.roots.size(); ++i)
        for (const auto& d : wg)
            if (from_rational<T>(wc.roots[i].first) == d.q)
                throw NotCoprime(i, "W_C and W_G share a root");
    LinearSpectralResult<T> out;
    out.geronimus = geronimus_iterated(f, wg);
    const BiorthFamilies<T>& mid = out.geronimus.empty() ? f : out.geronimus.back().family;
    out.family = christoffel_family(mid, wc);
    out.gram = out.family.gram;
    return out;
}

struct MarkovResiduals {
    Rational christoffel;
    Rational geronimus;
    Rational linear_spectral;
};

/// Markov function identities under x - r, 1/(x - q) + xi delta_q and their
/// composition, direct atom sums against the closed forms. Max residuals over
/// the test points.
MarkovResiduals markov_transform_check(const DiscreteMeasure& m, const Rational& r, const Rational& q,
                                       const Rational& xi, const std::vector<Rational>& points);

/// Same at `count` seeded random rational points off the atoms and off q.
MarkovResiduals markov_transform_check(const DiscreteMeasure& m, const Rational& r, const Rational& q,
                                       const Rational& xi, std::uint64_t seed, std::size_t count = 10);

}  // namespace opgb
