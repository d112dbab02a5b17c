#include "opgb/identities.hpp"

#include "opgb/biorth.hpp"
#include "opgb/classical.hpp"
#include "opgb/gram.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>

namespace opgb {

RationalSampler::RationalSampler(std::uint64_t seed, long span, long max_den)
    : rng_(seed), span_(span), max_den_(max_den) {}

Rational RationalSampler::operator()() {
    std::uniform_int_distribution<long> num(-span_, span_);
    std::uniform_int_distribution<long> den(1, max_den_);
    const long p = num(rng_);
    const long q = den(rng_);
    return Rational(Integer(p), Integer(q));
}

Rational RationalSampler::avoiding(const std::vector<Rational>& excluded) {
    while (true) {
        Rational r = (*this)();
        if (std::find(excluded.begin(), excluded.end(), r) == excluded.end()) return r;
    }
}

namespace {

// Float residuals are relative to the larger of the Gram entries and the
// compared values.
template <Scalar T>
T& residual_scale() {
    static thread_local T scale{1};
    return scale;
}

template <Scalar T>
T max_abs_coeff(const Polynomial<T>& p) {
    T best(0);
    for (const auto& c : p.coeffs()) best = std::max(best, ScalarTraits<T>::abs(c));
    return best;
}

template <Scalar T>
struct Worst {
    T value{0};
    std::size_t cases = 0;
    void bump(const T& diff, const T& magnitude) {
        if constexpr (ScalarTraits<T>::exact) {
            value = std::max(value, ScalarTraits<T>::abs(diff));
        } else {
            value = std::max(value, std::abs(diff) / std::max(residual_scale<T>(), magnitude));
        }
    }
    void add(const T& lhs, const T& rhs) {
        bump(lhs - rhs, std::max(ScalarTraits<T>::abs(lhs), ScalarTraits<T>::abs(rhs)));
        ++cases;
    }
    // <p, q> against rhs, scaled by the form with absolute values
    void add_form(const Matrix<T>& g, const Polynomial<T>& p, const Polynomial<T>& q, const T& rhs) {
        const T lhs = bilinear_form(g, p, q);
        T mag = std::max(ScalarTraits<T>::abs(lhs), ScalarTraits<T>::abs(rhs));
        if constexpr (!ScalarTraits<T>::exact) {
            T bound(0);
            for (std::size_t i = 0; i < p.coeffs().size() && i < g.rows(); ++i)
                for (std::size_t j = 0; j < q.coeffs().size() && j < g.cols(); ++j)
                    bound += std::abs(p.coeffs()[i]) * std::abs(g(i, j)) * std::abs(q.coeffs()[j]);
            mag = std::max(mag, bound);
        }
        bump(lhs - rhs, mag);
        ++cases;
    }
    void add(const Polynomial<T>& lhs, const Polynomial<T>& rhs) {
        const auto d = lhs - rhs;
        const T mag = std::max(max_abs_coeff(lhs), max_abs_coeff(rhs));
        for (const auto& c : d.coeffs()) bump(c, mag);
        ++cases;
    }
    void add(const Matrix<T>& lhs, const Matrix<T>& rhs) {
        if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols()) throw InvalidArgument("shape mismatch");
        bump(max_abs_entry(Matrix<T>(lhs - rhs)), std::max(max_abs_entry(lhs), max_abs_entry(rhs)));
        ++cases;
    }
    IdentityRecord record(std::string name, std::string note = {}) const {
        IdentityRecord r;
        r.name = std::move(name);
        r.passed = is_zero(value);
        if constexpr (ScalarTraits<T>::exact) {
            r.residual = to_string(value);
        } else {
            r.residual = to_string(static_cast<double>(value));
        }
        r.cases = cases;
        r.note = std::move(note);
        return r;
    }
};

template <Scalar T>
IdentityRecord skipped(std::string name, std::string why) {
    IdentityRecord r;
    r.name = std::move(name);
    r.passed = true;
    r.residual = "0";
    r.note = "skipped: " + std::move(why);
    return r;
}

template <Scalar T>
IdentityRecord guarded(const std::string& name, const std::function<IdentityRecord()>& body) {
    try {
        return body();
    } catch (const Error& e) {
        IdentityRecord r;
        r.name = name;
        r.passed = false;
        r.residual = "nan";
        r.note = e.kind() + ": " + e.what();
        return r;
    }
}

// sum_l J_{k,l} P_l(x) + [k = last] P_{n-1}(x) against x P_k(x).
template <Scalar T>
void check_spectral(const BiorthFamilies<T>& f, Side side, Worst<T>& w) {
    const auto j = spectral_matrix(f, side).j;
    const std::size_t m = j.rows();
    const auto x = Polynomial<T>::monomial(1);
    for (std::size_t k = 0; k < m; ++k) {
        Polynomial<T> lhs;
        for (std::size_t l = 0; l < m; ++l)
            if (!is_zero(j(k, l))) lhs += f.poly(side, l) * j(k, l);
        if (k + 1 == m) lhs += f.poly(side, m);
        w.add(lhs, x * f.poly(side, k));
    }
}

std::vector<Rational> atom_positions(const GramSource& source) {
    std::vector<Rational> out;
    if (const auto* m = std::get_if<DiscreteMeasure>(&source))
        for (const auto& a : m->atoms) out.push_back(a.position);
    return out;
}

}  // namespace

template <Scalar T>
std::vector<IdentityRecord> run_identities(const GramSource& source, const IdentityOptions& options) {
    const std::size_t n = options.n;
    if (n < 2) throw InvalidArgument("identity suite needs n >= 2");
    const Matrix<T> g = matrix_from_rational<T>(gram_matrix(source, n));
    const auto f = build_families(g);
    residual_scale<T>() = std::max(T(1), max_abs_entry(g));
    const auto* measure = std::get_if<DiscreteMeasure>(&source);
    const auto atoms = atom_positions(source);
    // float runs sample near the origin to keep polynomial values moderate
    RationalSampler sample = ScalarTraits<T>::exact ? RationalSampler(options.seed) : RationalSampler(options.seed, 8, 4);
    auto pt = [&] { return from_rational<T>(sample()); };

    std::vector<IdentityRecord> out;

    out.push_back(guarded<T>("ldu_reconstruction", [&] {
        Worst<T> w;
        const Matrix<T> d = Matrix<T>::diagonal(f.norms);
        w.add(unit_lower_inverse(f.s1) * d * unit_lower_inverse(f.s2).transpose(), g);
        return w.record("ldu_reconstruction");
    }));

    out.push_back(guarded<T>("biorthogonality", [&] {
        Worst<T> w;
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t l = 0; l < n; ++l)
                w.add_form(g, f.p1(k), f.p2(l), k == l ? f.norms[k] : T(0));
        return w.record("biorthogonality");
    }));

    out.push_back(guarded<T>("orthogonality", [&] {
        Worst<T> w;
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t l = 0; l < k; ++l) {
                const auto mono = Polynomial<T>::monomial(l);
                w.add_form(g, f.p1(k), mono, T(0));
                w.add_form(g, mono, f.p2(k), T(0));
            }
        return w.record("orthogonality");
    }));

    out.push_back(guarded<T>("spectral_eigen_relation", [&] {
        Worst<T> w;
        check_spectral(f, Side::first, w);
        check_spectral(f, Side::second, w);
        return w.record("spectral_eigen_relation");
    }));

    out.push_back(guarded<T>("hessenberg_shape", [&] {
        Worst<T> w;
        for (Side side : {Side::first, Side::second}) {
            const auto j = spectral_matrix(f, side).j;
            for (std::size_t r = 0; r < j.rows(); ++r)
                for (std::size_t c = r + 1; c < j.cols(); ++c) w.add(j(r, c), c == r + 1 ? T(1) : T(0));
        }
        return w.record("hessenberg_shape");
    }));

    out.push_back(guarded<T>("roots_are_eigenvalues", [&] {
        Worst<T> w;
        for (Side side : {Side::first, Side::second}) {
            const auto j = spectral_matrix(f, side).j;
            for (std::size_t k = 1; k <= j.rows(); ++k)
                w.add(Polynomial<T>(char_poly(j.leading(k))), f.poly(side, k));
        }
        return w.record("roots_are_eigenvalues");
    }));

    out.push_back(guarded<T>("abc_theorem", [&] {
        Worst<T> w;
        for (std::size_t l = 1; l <= n; ++l)
            for (std::size_t p = 0; p < options.points; ++p) {
                const T x = pt(), y = pt();
                w.add(abc_kernel(g, l, x, y), cd_kernel(f, l - 1, x, y));
            }
        return w.record("abc_theorem");
    }));

    out.push_back(guarded<T>("reproducing", [&] {
        Worst<T> w;
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t p = 0; p < options.points; ++p) {
                const T z1 = pt(), z2 = pt();
                w.add_form(g, cd_kernel_in_x(f, k, z2), cd_kernel_in_y(f, k, z1), cd_kernel(f, k, z1, z2));
            }
        return w.record("reproducing");
    }));

    out.push_back(guarded<T>("projection", [&] {
        Worst<T> w;
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t p = 0; p < options.points; ++p) {
                const T z = pt();
                T zl(1);
                for (std::size_t l = 0; l <= k; ++l) {
                    const auto mono = Polynomial<T>::monomial(l);
                    w.add_form(g, cd_kernel_in_x(f, k, z), mono, zl);
                    w.add_form(g, mono, cd_kernel_in_y(f, k, z), zl);
                    zl *= z;
                }
            }
        return w.record("projection");
    }));

    if (!f.hankel) {
        for (const char* name : {"spectral_link", "three_term_recurrence", "moment_identity", "cd_formula",
                                 "confluent_cd"})
            out.push_back(skipped<T>(name, "non-Hankel Gram"));
    } else {
        out.push_back(guarded<T>("spectral_link", [&] {
            Worst<T> w;
            const auto j1 = spectral_matrix(f, Side::first).j;
            const auto j2 = spectral_matrix(f, Side::second).j;
            const std::vector<T> hs(f.norms.begin(), f.norms.end() - 1);
            const Matrix<T> h = Matrix<T>::diagonal(hs);
            w.add(j1 * h, h * j2.transpose());
            return w.record("spectral_link");
        }));

        out.push_back(guarded<T>("three_term_recurrence", [&] {
            Worst<T> w;
            const auto rec = three_term_coeffs(f);
            const auto x = Polynomial<T>::monomial(1);
            for (std::size_t k = 0; k + 1 < n; ++k) {
                Polynomial<T> rhs = f.p1(k + 1) + f.p1(k) * rec.diagonal[k];
                if (k > 0) rhs += f.p1(k - 1) * rec.offdiagonal[k - 1];
                w.add(x * f.p1(k), rhs);
            }
            w.add(jacobi_from_recurrence(rec, n - 1), spectral_matrix(f, Side::first).j);
            return w.record("three_term_recurrence");
        }));

        out.push_back(guarded<T>("moment_identity", [&] {
            Worst<T> w;
            const auto j = spectral_matrix(f, Side::first).j;
            const std::size_t k = j.rows();
            Matrix<T> power = Matrix<T>::identity(k);
            for (std::size_t e = 0; e <= 2 * k - 1; ++e) {
                const std::size_t r = std::min(e, n - 1);
                w.add(power(0, 0) * f.norms[0], g(r, e - r));
                power = power * j;
            }
            return w.record("moment_identity");
        }));

        out.push_back(guarded<T>("cd_formula", [&] {
            Worst<T> w;
            for (std::size_t k = 0; k + 1 < n; ++k)
                for (std::size_t p = 0; p < options.points; ++p) {
                    const T x = pt(), y = pt();
                    const T rhs = (eval_poly(f, Side::first, k, y) * eval_poly(f, Side::first, k + 1, x) -
                                   eval_poly(f, Side::first, k + 1, y) * eval_poly(f, Side::first, k, x)) /
                                  f.norms[k];
                    w.add((x - y) * cd_kernel(f, k, x, y), rhs);
                }
            return w.record("cd_formula");
        }));

        out.push_back(guarded<T>("confluent_cd", [&] {
            Worst<T> w;
            Polynomial<T> lhs;
            for (std::size_t l = 1; l < n; ++l) {
                lhs += f.p1(l - 1) * f.p1(l - 1) * (T(1) / f.norms[l - 1]);
                const auto rhs = (f.p1(l).derivative() * f.p1(l - 1) - f.p1(l - 1).derivative() * f.p1(l)) *
                                 (T(1) / f.norms[l - 1]);
                w.add(lhs, rhs);
            }
            return w.record("confluent_cd");
        }));
    }

    if (measure && f.hankel && !measure->has_derivative_atoms()) {
        out.push_back(guarded<T>("mixed_cd_formula", [&] {
            Worst<T> w;
            for (std::size_t p = 0; p < options.points; ++p) {
                const Rational xr = sample.avoiding(atoms);
                const T x = from_rational<T>(xr);
                const auto c = second_kind_values(f, *measure, xr);
                for (std::size_t k = 0; k + 1 < n; ++k) {
                    const T y = pt();
                    const T rhs = (eval_poly(f, Side::first, k, y) * c.c1[k + 1] -
                                   eval_poly(f, Side::first, k + 1, y) * c.c1[k]) /
                                      f.norms[k] +
                                  T(1);
                    w.add((x - y) * mixed_cd_kernel(f, c, k, y), rhs);
                }
            }
            return w.record("mixed_cd_formula");
        }));

        out.push_back(guarded<T>("second_kind_from_cauchy", [&] {
            Worst<T> w;
            for (std::size_t p = 0; p < options.points; ++p) {
                const Rational ar = sample.avoiding(atoms);
                const auto c = second_kind_values(f, *measure, ar);
                for (std::size_t k = 0; k < n; ++k) {
                    T direct(0);
                    for (const auto& atom : measure->atoms)
                        direct += from_rational<T>(atom.weight) *
                                  eval_poly(f, Side::first, k, from_rational<T>(atom.position)) /
                                  from_rational<T>(ar - atom.position);
                    w.add(c.c1[k], direct);
                }
            }
            return w.record("second_kind_from_cauchy");
        }));

        const std::size_t atoms_count = measure->atoms.size();
        std::size_t kmax = std::min(options.heine_max_k, n - 1);
        while (kmax > 0 && std::pow(static_cast<double>(atoms_count), static_cast<double>(kmax)) > 2e5) --kmax;
        out.push_back(guarded<T>("heine_representation", [&] {
            Worst<T> w;
            for (std::size_t k = 0; k <= kmax; ++k)
                for (std::size_t p = 0; p < 3; ++p) {
                    const T x = pt();
                    w.add(heine_oracle<T>(*measure, k, x), eval_poly(f, Side::first, k, x));
                }
            return w.record("heine_representation", "k <= " + std::to_string(kmax));
        }));
    } else {
        for (const char* name : {"mixed_cd_formula", "second_kind_from_cauchy", "heine_representation"})
            out.push_back(skipped<T>(name, "needs a discrete measure of point masses"));
    }
    return out;
}

template <Scalar T>
std::vector<IdentityRecord> classical_checks(const ClassicalWeight& weight, std::size_t n) {
    if (n < 3) throw InvalidArgument("classical checks need n >= 3");
    const PearsonData p = pearson_data(weight);
    const auto moments = moments_classical(weight, 2 * n - 2);
    const Matrix<T> g = matrix_from_rational<T>(hankel_from_moments(moments, n));
    const auto f = build_families(g);
    residual_scale<T>() = std::max(T(1), max_abs_entry(g));
    std::vector<IdentityRecord> out;

    out.push_back(guarded<T>("subdiagonal_closed_form", [&] {
        Worst<T> w;
        for (std::size_t k = 0; k + 1 < n; ++k) w.add(f.s1(k + 1, k), from_rational<T>(classical_subdiagonal(p, k)));
        return w.record("subdiagonal_closed_form");
    }));

    out.push_back(guarded<T>("operator_symmetry", [&] {
        Worst<T> w;
        const auto t = diff_operator_matrix<T>(p, n);
        w.add(t * g, g * t.transpose());
        return w.record("operator_symmetry");
    }));

    out.push_back(guarded<T>("operator_diagonalization", [&] {
        Worst<T> w;
        const auto t = diff_operator_matrix<T>(p, n);
        const Matrix<T> conj = f.s1 * t * unit_lower_inverse(f.s1);
        Matrix<T> expected(n, n);
        for (std::size_t k = 0; k < n; ++k) expected(k, k) = from_rational<T>(classical_eigenvalue(p, k));
        w.add(conj, expected);
        return w.record("operator_diagonalization");
    }));

    out.push_back(guarded<T>("norm_ratio_shifted_family", [&] {
        // H_n(gamma) = c_n E_gamma[p2] H_{n-1}(gamma+1), all normalized to m_0 = 1;
        // anchored form: ratio_n / ratio_1 = c_n / c_1.
        Worst<T> w;
        const auto shifted = weight.shifted();
        const auto fs = build_families(matrix_from_rational<T>(gram_matrix(shifted, n)));
        const T ep2 = from_rational<T>(p.a * moments[2] + p.b * moments[1] + p.c);
        auto ratio = [&](std::size_t k) { return f.norms[k] * fs.norms[0] / (f.norms[0] * fs.norms[k - 1]); };
        const T c1 = from_rational<T>(classical_norm_ratio(p, 1));
        for (std::size_t k = 1; k < n; ++k) {
            const T ck = from_rational<T>(classical_norm_ratio(p, k));
            w.add(f.norms[k], ck * ep2 * fs.norms[k - 1]);
            w.add(ratio(k) / ratio(1), ck / c1);
        }
        return w.record("norm_ratio_shifted_family");
    }));

    switch (weight.family) {
        case ClassicalFamily::hermite:
            out.push_back(guarded<T>("hermite_norms", [&] {
                Worst<T> w;
                for (std::size_t k = 0; k < n; ++k)
                    w.add(f.norms[k] / f.norms[0],
                          from_rational<T>(factorial(static_cast<unsigned>(k)) / pow(Rational(2), static_cast<unsigned>(k))));
                return w.record("hermite_norms");
            }));
            break;
        case ClassicalFamily::laguerre:
            out.push_back(guarded<T>("laguerre_closed_forms", [&] {
                Worst<T> w;
                for (std::size_t k = 0; k < n; ++k) {
                    const Rational kk = static_cast<long>(k);
                    w.add(f.norms[k] / f.norms[0], from_rational<T>(factorial(static_cast<unsigned>(k)) *
                                                                    pochhammer(weight.alpha + 1, static_cast<unsigned>(k))));
                    if (k + 1 < n) w.add(f.s1(k + 1, k), from_rational<T>(-(kk + 1) * (kk + 1 + weight.alpha)));
                }
                return w.record("laguerre_closed_forms");
            }));
            break;
        case ClassicalFamily::jacobi:
            out.push_back(guarded<T>("jacobi_closed_forms", [&] {
                Worst<T> w;
                const Rational& al = weight.alpha;
                const Rational& be = weight.beta;
                for (std::size_t k = 0; k + 1 < n; ++k) {
                    const Rational kk = static_cast<long>(k);
                    w.add(f.s1(k + 1, k), from_rational<T>((kk + 1) * (al - be) / ((al + be + 2) + 2 * kk)));
                }
                if (al == 0 && be == 0) w.add(f.norms[1] / f.norms[0], from_rational<T>(Rational(1, 3)));
                return w.record("jacobi_closed_forms");
            }));
            break;
    }
    return out;
}

template std::vector<IdentityRecord> run_identities<Rational>(const GramSource&, const IdentityOptions&);
template std::vector<IdentityRecord> run_identities<double>(const GramSource&, const IdentityOptions&);
template std::vector<IdentityRecord> classical_checks<Rational>(const ClassicalWeight&, std::size_t);
template std::vector<IdentityRecord> classical_checks<double>(const ClassicalWeight&, std::size_t);

}  // namespace opgb
