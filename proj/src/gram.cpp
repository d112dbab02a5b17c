#include "opgb/gram.hpp"

#include "opgb/classical.hpp"
#include "opgb/errors.hpp"

#include <cmath>
#include <type_traits>

namespace opgb {

std::vector<Rational> moments_discrete(const DiscreteMeasure& m, std::size_t j_max) {
    std::vector<Rational> out(j_max + 1, Rational(0));
    for (const auto& atom : m.atoms) {
        const unsigned d = atom.derivative_order;
        for (std::size_t j = d; j <= j_max; ++j) {
            // j!/(j-d)! = j (j-1) ... (j-d+1)
            Rational falling = 1;
            for (unsigned i = 0; i < d; ++i) falling *= static_cast<long>(j - i);
            out[j] += atom.weight * falling * pow(atom.position, static_cast<unsigned>(j - d));
        }
    }
    return out;
}

std::vector<Rational> moments_classical(const ClassicalWeight& w, std::size_t j_max) {
    const PearsonData p = pearson_data(w);
    std::vector<Rational> m(j_max + 1, Rational(0));
    m[0] = 1;
    for (std::size_t j = 0; j < j_max; ++j) {
        const Rational jj = static_cast<long>(j);
        const Rational lead = p.A + jj * p.a;
        if (lead == 0) throw DegenerateRecurrence(j, "A + j a vanishes in the moment recurrence");
        Rational rhs = -(p.B + jj * p.b) * m[j];
        if (j > 0) rhs -= jj * p.c * m[j - 1];
        m[j + 1] = rhs / lead;
    }
    return m;
}

Matrix<Rational> hankel_from_moments(const std::vector<Rational>& moments, std::size_t n) {
    if (n == 0) throw InvalidArgument("Gram order must be >= 1");
    if (moments.size() < 2 * n - 1) throw InvalidArgument("not enough moments for Hankel matrix");
    Matrix<Rational> g(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g(i, j) = moments[i + j];
    return g;
}

Matrix<Rational> gram_matrix(const GramSource& source, std::size_t n) {
    if (n == 0) throw InvalidArgument("Gram order must be >= 1");
    return std::visit(
        [n](const auto& s) -> Matrix<Rational> {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, DiscreteMeasure>) {
                return hankel_from_moments(moments_discrete(s, 2 * n - 2), n);
            } else if constexpr (std::is_same_v<S, ClassicalWeight>) {
                return hankel_from_moments(moments_classical(s, 2 * n - 2), n);
            } else {
                if (s.entries.rows() < n || s.entries.cols() < n)
                    throw InvalidArgument("bivariate table smaller than requested order");
                return s.entries.leading(n);
            }
        },
        source);
}

std::vector<Rational> cauchy_moments(const DiscreteMeasure& m, const Rational& a, std::size_t j_max) {
    Rational c0 = 0;
    for (std::size_t i = 0; i < m.atoms.size(); ++i) {
        const auto& atom = m.atoms[i];
        if (atom.position == a) throw PoleAtAtom(i, "evaluation point coincides with an atom");
        // d-th derivative of 1/(a - x) is d!/(a - x)^{d+1}
        const unsigned d = atom.derivative_order;
        c0 += atom.weight * factorial(d) / pow(Rational(a - atom.position), d + 1);
    }
    const auto moments = moments_discrete(m, j_max == 0 ? 0 : j_max - 1);
    return cauchy_moments_from_markov<Rational>(c0, a, moments, j_max);
}

double classical_physical_mass(const ClassicalWeight& w) {
    const double alpha = static_cast<double>(w.alpha);
    const double beta = static_cast<double>(w.beta);
    switch (w.family) {
        case ClassicalFamily::hermite: return std::sqrt(M_PI);
        case ClassicalFamily::laguerre: return std::tgamma(alpha + 1);
        case ClassicalFamily::jacobi:
            return std::pow(2.0, alpha + beta + 1) * std::tgamma(alpha + 1) * std::tgamma(beta + 1) /
                   std::tgamma(alpha + beta + 2);
    }
    return 1.0;
}

}  // namespace opgb
