#include "opgb/quad.hpp"

#include "opgb/matrix.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>

namespace opgb {

TridiagonalEigen symmetric_tridiagonal_eigen(std::vector<double> d, std::vector<double> offdiagonal) {
    const std::size_t n = d.size();
    if (n == 0) return {};
    if (offdiagonal.size() + 1 != n) throw InvalidArgument("tridiagonal shape mismatch");
    std::vector<double> e(n, 0.0);
    std::copy(offdiagonal.begin(), offdiagonal.end(), e.begin());
    std::vector<double> z(n, 0.0);  // first row of the accumulated rotations
    z[0] = 1.0;

    constexpr int max_sweeps = 100;
    for (std::size_t l = 0; l < n; ++l) {
        int sweeps = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= DBL_EPSILON * dd) break;
            }
            if (m == l) break;
            if (++sweeps > max_sweeps) throw FormulaInconsistency(l, "QL iteration did not converge");

            // Wilkinson-type shift from the leading 2x2 block.
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            bool deflated = false;
            for (std::size_t i = m; i-- > l;) {
                double f = s * e[i];
                const double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if (deflated) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        } while (m != l);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
    TridiagonalEigen out;
    for (std::size_t i : order) {
        out.values.push_back(d[i]);
        out.first_components.push_back(z[i]);
    }
    return out;
}

std::vector<std::complex<double>> polynomial_roots(const std::vector<double>& coeffs_in) {
    std::vector<double> coeffs = coeffs_in;
    while (!coeffs.empty() && coeffs.back() == 0.0) coeffs.pop_back();
    if (coeffs.size() <= 1) return {};
    const std::size_t n = coeffs.size() - 1;
    const double lead = coeffs.back();
    for (auto& c : coeffs) c /= lead;

    double radius = 0.0;
    for (std::size_t i = 0; i < n; ++i) radius = std::max(radius, std::abs(coeffs[i]));
    radius = 1.0 + radius;

    using C = std::complex<double>;
    auto eval = [&](C x, C& deriv) {
        C p = 0.0, dp = 0.0;
        for (std::size_t i = coeffs.size(); i-- > 0;) {
            dp = dp * x + p;
            p = p * x + coeffs[i];
        }
        deriv = dp;
        return p;
    };

    std::vector<C> z(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double angle = 2.0 * M_PI * (static_cast<double>(i) + 0.25) / static_cast<double>(n);
        z[i] = std::polar(0.5 * radius, angle);
    }
    for (int iter = 0; iter < 500; ++iter) {
        double max_step = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            C deriv;
            const C p = eval(z[i], deriv);
            if (p == C(0.0)) continue;
            const C ratio = p / deriv;
            C sum = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) sum += 1.0 / (z[i] - z[j]);
            const C step = ratio / (1.0 - ratio * sum);
            z[i] -= step;
            max_step = std::max(max_step, std::abs(step) / std::max(1.0, std::abs(z[i])));
        }
        if (max_step < 1e-16) break;
    }
    // Newton polish.
    for (auto& root : z)
        for (int iter = 0; iter < 3; ++iter) {
            C deriv;
            const C p = eval(root, deriv);
            if (deriv == C(0.0)) break;
            root -= p / deriv;
        }
    std::sort(z.begin(), z.end(), [](C a, C b) { return a.real() < b.real(); });
    return z;
}

double exactness_check(const QuadratureRule& rule, const std::vector<double>& moments) {
    const std::size_t top = 2 * rule.nodes.size();
    if (moments.size() < top) throw InvalidArgument("exactness_check needs moments up to 2k-1");
    double worst = 0.0;
    for (std::size_t j = 0; j < top; ++j) {
        double sum = 0.0;
        for (std::size_t l = 0; l < rule.nodes.size(); ++l)
            sum += rule.weights[l] * std::pow(rule.nodes[l], static_cast<double>(j));
        worst = std::max(worst, std::abs(sum - moments[j]));
    }
    return worst;
}

namespace detail {

namespace {

double horner(const std::vector<double>& c, double x) {
    double acc = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
    return acc;
}

}  // namespace

QuadratureRule gauss_rule_from_recurrence(const std::vector<double>& diagonal,
                                          const std::vector<double>& offdiagonal,
                                          const std::vector<std::vector<double>>& polys, double h0) {
    const std::size_t k = diagonal.size();
    // diag(sqrt(H_0/H_j)) similarity turns J^{[k]} into a symmetric matrix with
    // off-diagonal sqrt(b_j).
    std::vector<double> sym_off;
    for (double b : offdiagonal) sym_off.push_back(std::sqrt(b));
    const auto eig = symmetric_tridiagonal_eigen(diagonal, sym_off);

    QuadratureRule rule;
    rule.order = k;
    rule.nodes = eig.values;
    for (double v : eig.first_components) rule.weights.push_back(h0 * v * v);

    Matrix<double> values(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t l = 0; l < k; ++l) values(i, l) = horner(polys[i], rule.nodes[l]);
    std::vector<double> e0(k, 0.0);
    e0[0] = 1.0;
    if (auto first_col = try_solve_vector<double>(values, e0)) {
        for (std::size_t l = 0; l < k; ++l)
            rule.weight_crosscheck =
                std::max(rule.weight_crosscheck, std::abs(h0 * (*first_col)[l] - rule.weights[l]));
    } else {
        rule.weight_crosscheck = INFINITY;
    }
    return rule;
}

std::optional<std::vector<double>> moment_system_weights(const std::vector<double>& nodes,
                                                         const std::vector<double>& moments) {
    const std::size_t k = nodes.size();
    if (moments.size() < k) throw InvalidArgument("not enough moments for the weight system");
    Matrix<double> vandermonde(k, k);
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t l = 0; l < k; ++l) vandermonde(j, l) = std::pow(nodes[l], static_cast<double>(j));
    std::vector<double> rhs(moments.begin(), moments.begin() + static_cast<long>(k));
    return try_solve_vector<double>(vandermonde, rhs);
}

QuadratureRule gauss_rule_fallback(const std::vector<double>& pk, const std::vector<double>& moments,
                                   std::size_t k, std::size_t failing_index) {
    const auto roots = polynomial_roots(pk);
    QuadratureRule rule;
    rule.order = k;
    rule.fallback = true;
    for (const auto& r : roots) {
        if (std::abs(r.imag()) > 1e-8 * std::max(1.0, std::abs(r))) {
            throw NonPositive(failing_index, "non-positive norm ratio and non-real quadrature nodes");
        }
        rule.nodes.push_back(r.real());
    }
    std::sort(rule.nodes.begin(), rule.nodes.end());
    auto w = moment_system_weights(rule.nodes, moments);
    if (!w) throw NonPositive(failing_index, "moment system for the weights is singular");
    rule.weights = *w;
    return rule;
}

}  // namespace detail

}  // namespace opgb
