#include <doctest.h>

#include "opgb/biorth.hpp"
#include "opgb/identities.hpp"
#include "support.hpp"

using namespace opgb;
using testing::R;

namespace {

using Poly = Polynomial<Rational>;

std::vector<GramSource> sources(std::uint64_t seed) {
    testing::MeasureGen gen(seed);
    std::vector<GramSource> out{ClassicalWeight{ClassicalFamily::hermite, 0, 0},
                                ClassicalWeight{ClassicalFamily::laguerre, R(1, 2), 0},
                                ClassicalWeight{ClassicalFamily::jacobi, R(1, 2), R(-1, 3)}};
    for (int i = 0; i < 6; ++i) out.emplace_back(gen.positive(10 + static_cast<std::size_t>(i % 3)));
    // signed weights keep the form quasi-definite but not positive
    auto signed_measure = gen.positive(11);
    signed_measure.atoms[3].weight = -signed_measure.atoms[3].weight;
    out.emplace_back(signed_measure);
    return out;
}

std::vector<Matrix<Rational>> tables(std::uint64_t seed, std::size_t n, std::size_t count) {
    testing::MeasureGen gen(seed);
    std::vector<Matrix<Rational>> out;
    while (out.size() < count) {
        auto g = gen.matrix(n);
        bool ok = true;
        for (std::size_t k = 1; k <= n && ok; ++k) ok = determinant(g.leading(k)) != 0;
        if (ok && !is_symmetric(g)) out.push_back(std::move(g));
    }
    return out;
}

Rational pair(const Matrix<Rational>& g, const Poly& p, const Poly& q) { return bilinear_form(g, p, q); }

}  // namespace

TEST_CASE("property: biorthogonality and orthogonality, k, l <= 8") {
    auto check = [](const BiorthFamilies<Rational>& f) {
        for (std::size_t k = 0; k < 9; ++k) {
            for (std::size_t l = 0; l < 9; ++l) {
                CHECK(pair(f.gram, f.p1(k), f.p2(l)) == (k == l ? f.norms[k] : Rational(0)));
                if (l < k) {
                    CHECK(pair(f.gram, f.p1(k), Poly::monomial(l)) == 0);
                    CHECK(pair(f.gram, Poly::monomial(l), f.p2(k)) == 0);
                }
            }
        }
    };
    for (const auto& s : sources(1)) check(testing::family(s, 9));
    for (const auto& t : tables(2, 9, 4)) check(build_families(t));
}

TEST_CASE("property: heredity of pivots and norms as determinant ratios") {
    for (const auto& t : tables(5, 6, 6)) {
        const auto f = build_families(t);
        for (std::size_t k = 0; k < 6; ++k) {
            CHECK(f.norms[k] == testing::cofactor_det(t.leading(k + 1)) / testing::cofactor_det(t.leading(k)));
            // the family of a leading block is the leading part of the family
            const auto g = build_families(t.leading(k + 1));
            CHECK(g.s1 == f.s1.leading(k + 1));
            CHECK(g.s2 == f.s2.leading(k + 1));
        }
    }
}

TEST_CASE("property: spectral matrices") {
    auto check = [](const BiorthFamilies<Rational>& f) {
        const std::size_t n = f.order();
        for (Side side : {Side::first, Side::second}) {
            const auto j = spectral_matrix(f, side).j;
            // Hessenberg with unit superdiagonal
            for (std::size_t r = 0; r < j.rows(); ++r)
                for (std::size_t c = r + 1; c < j.cols(); ++c) CHECK(j(r, c) == (c == r + 1 ? Rational(1) : Rational(0)));
            // x P_k = sum_l J_{k,l} P_l for rows that stay inside the block
            for (std::size_t k = 0; k + 2 < n; ++k) {
                Poly lhs = f.poly(side, k) * Poly::monomial(1);
                Poly rhs;
                for (std::size_t l = 0; l <= k + 1; ++l) rhs += f.poly(side, l) * j(k, l);
                CHECK(lhs == rhs);
            }
            // roots are eigenvalues: char_poly of J^{[k]} is P_k
            for (std::size_t k = 1; k < n; ++k) CHECK(Poly(char_poly(j.leading(k))) == f.poly(side, k));
        }
        if (f.hankel) {
            const auto j1 = spectral_matrix(f, Side::first).j;
            const auto j2 = spectral_matrix(f, Side::second).j;
            const auto h = Matrix<Rational>::diagonal(std::span<const Rational>(f.norms.data(), n - 1));
            CHECK(j1 * h == h * j2.transpose());
        }
    };
    for (const auto& s : sources(3)) check(testing::family(s, 10));
    for (const auto& t : tables(4, 8, 4)) check(build_families(t));
}

TEST_CASE("property: moment identity m_j = (J^j)_{00} H_0") {
    for (const auto& s : sources(6)) {
        const auto f = testing::family(s, 10);
        const auto j = spectral_matrix(f, Side::first).j;
        const auto mom = std::holds_alternative<DiscreteMeasure>(s) ? moments_discrete(std::get<DiscreteMeasure>(s), 20)
                                                                    : moments_classical(std::get<ClassicalWeight>(s), 20);
        for (std::size_t k = 1; k <= 9; ++k) {
            const auto jk = j.leading(k);
            auto p = Matrix<Rational>::identity(k);
            for (std::size_t e = 0; e < 2 * k; ++e) {
                CHECK(p(0, 0) * f.norms[0] == mom[e]);
                p = p * jk;
            }
        }
    }
}

TEST_CASE("property: kernel identities at random rational points") {
    RationalSampler pick(77);
    for (const auto& s : sources(8)) {
        const std::size_t order = 8;
        const auto f = testing::family(s, order);
        for (std::size_t n = 0; n + 1 < 7; ++n) {
            for (int t = 0; t < 20; ++t) {
                const Rational x = pick(), y = pick();
                const Rational k = cd_kernel(f, n, x, y);
                // ABC
                CHECK(abc_kernel(f.gram, n + 1, x, y) == k);
                // CD formula
                const Rational rhs = (eval_poly(f, Side::second, n, y) * eval_poly(f, Side::first, n + 1, x) -
                                      eval_poly(f, Side::second, n + 1, y) * eval_poly(f, Side::first, n, x)) /
                                     f.norms[n];
                CHECK((x - y) * k == rhs);
            }
            // confluent form as a polynomial identity
            const std::size_t l = n + 1;
            Poly lhs;
            for (std::size_t k = 0; k < l; ++k) lhs += f.p1(k) * f.p1(k) * (Rational(1) / f.norms[k]);
            const Poly rhs = (f.p1(l).derivative() * f.p1(l - 1) - f.p1(l - 1).derivative() * f.p1(l)) *
                             (Rational(1) / f.norms[l - 1]);
            CHECK(lhs == rhs);
            // projection: <K_n(x, z), y^l> = z^l
            const Rational z = pick();
            const auto kx = cd_kernel_in_x(f, n, z);
            Rational zl = 1;
            for (std::size_t p = 0; p <= n; ++p, zl *= z) CHECK(pair(f.gram, kx, Poly::monomial(p)) == zl);
            // reproducing
            const Rational z1 = pick(), z2 = pick();
            CHECK(pair(f.gram, cd_kernel_in_x(f, n, z2), cd_kernel_in_y(f, n, z1)) == cd_kernel(f, n, z1, z2));
        }
    }
}

TEST_CASE("property: mixed CD formula off the atoms") {
    RationalSampler pick(91);
    for (const auto& s : sources(10)) {
        const auto* m = std::get_if<DiscreteMeasure>(&s);
        if (!m) continue;
        const auto f = testing::family(*m, 8);
        std::vector<Rational> atoms;
        for (const auto& a : m->atoms) atoms.push_back(a.position);
        for (int t = 0; t < 20; ++t) {
            const Rational x = pick.avoiding(atoms), y = pick();
            const auto c = second_kind_values(f, *m, x);
            for (std::size_t n = 0; n + 1 < 8; ++n) {
                const Rational rhs = (eval_poly(f, Side::second, n, y) * c.c1[n + 1] -
                                      eval_poly(f, Side::second, n + 1, y) * c.c1[n]) /
                                         f.norms[n] +
                                     1;
                CHECK((x - y) * mixed_cd_kernel(f, c, n, y) == rhs);
            }
        }
    }
}

TEST_CASE("property: Heine representation, k <= 4, up to 6 atoms") {
    testing::MeasureGen gen(12);
    RationalSampler pick(13);
    for (int t = 0; t < 12; ++t) {
        const std::size_t atoms = 4 + static_cast<std::size_t>(t % 3);
        const auto m = gen.positive(atoms);
        // P_4 of a 4-atom measure has a vanishing norm
            const auto f = build_families(gram_matrix(m, 5), BuildOptions{true});
        for (std::size_t k = 0; k <= 4; ++k)
            for (int p = 0; p < 3; ++p) {
                const Rational x = pick();
                CHECK(heine_oracle<Rational>(m, k, x) == eval_poly(f, Side::first, k, x));
            }
    }
}

TEST_CASE("property: identity suite passes on random sources in both modes") {
    IdentityOptions opt;
    opt.n = 6;
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        opt.seed = seed;
        for (const auto& s : sources(20 + seed)) {
            for (const auto& r : run_identities<Rational>(s, opt)) {
                INFO(r.name, " ", r.residual, " ", r.note);
                CHECK(r.passed);
            }
            for (const auto& r : run_identities<double>(s, opt)) {
                INFO("float ", r.name, " ", r.residual, " ", r.note);
                CHECK(r.passed);
            }
        }
        for (const auto& t : tables(30 + seed, 6, 2))
            for (const auto& r : run_identities<Rational>(BivariateTable{t}, opt)) {
                INFO(r.name, " ", r.note);
                CHECK(r.passed);
            }
    }
}

TEST_CASE("sampler avoids excluded points") {
    RationalSampler pick(1, 2, 1);
    const std::vector<Rational> ex{-2, -1, 0, 1};
    for (int i = 0; i < 50; ++i) CHECK(pick.avoiding(ex) == 2);
}
