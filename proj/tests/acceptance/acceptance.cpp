// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// usage: acceptance <path-to-opgb> <data-dir>

#include "opgb/classical.hpp"
#include "opgb/cli.hpp"
#include "opgb/identities.hpp"
#include "opgb/quad.hpp"
#include "opgb/transforms.hpp"
#include "support.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using namespace opgb;
using testing::R;

namespace {

using Fam = BiorthFamilies<Rational>;
using Poly = Polynomial<Rational>;

// Collects failures; a criterion passes when nothing was recorded.
struct Tally {
    std::size_t checks = 0;
    std::vector<std::string> failures;
    void expect(bool ok, const std::string& what) {
        ++checks;
        if (!ok && failures.size() < 5) failures.push_back(what);
        if (!ok && failures.size() == 5) failures.push_back("...");
    }
};

ClassicalWeight hermite() { return {ClassicalFamily::hermite, 0, 0}; }
ClassicalWeight laguerre(Rational a) { return {ClassicalFamily::laguerre, a, 0}; }
ClassicalWeight jacobi(Rational a, Rational b) { return {ClassicalFamily::jacobi, a, b}; }

bool same_family(const Fam& a, const Fam& b) { return a.norms == b.norms && a.s1 == b.s1 && a.s2 == b.s2; }

Rational markov(const DiscreteMeasure& m, const Rational& y) {
    Rational acc = 0;
    for (const auto& a : m.atoms) acc += a.weight / (y - a.position);
    return acc;
}

DiscreteMeasure divided(const DiscreteMeasure& m, const Rational& q, const Rational& xi) {
    DiscreteMeasure out;
    for (const auto& a : m.atoms) out.atoms.push_back({a.position, a.weight / (a.position - q), 0});
    if (xi != 0) out.atoms.push_back({q, xi, 0});
    return out;
}

std::optional<Fam> try_build(const Matrix<Rational>& g) {
    try {
        return build_families(g);
    } catch (const NotQuasiDefinite&) {
        return std::nullopt;
    }
}

// atoms k/d for k in [-d, d] with varying positive weights, total mass one
DiscreteMeasure grid_measure(long d, long stride) {
    DiscreteMeasure m;
    Rational total = 0;
    for (long k = -d; k <= d; k += stride) {
        const Rational w = R(1 + ((k + d) % 3), 1);
        m.atoms.push_back({R(k, d), w, 0});
        total += w;
    }
    for (auto& a : m.atoms) a.weight /= total;
    return m;
}

std::vector<DiscreteMeasure> discrete_sources() {
    testing::MeasureGen gen(5);
    return {grid_measure(5, 1), grid_measure(12, 2), gen.positive(10)};
}

std::vector<ClassicalWeight> classical_sources() { return {hermite(), laguerre(R(1, 2)), jacobi(R(1, 2), R(-1, 3))}; }

std::vector<Matrix<Rational>> bivariate_sources() {
    testing::MeasureGen gen(9);
    std::vector<Matrix<Rational>> out;
    while (out.size() < 2) {
        auto g = gen.matrix(9);
        bool ok = !is_symmetric(g);
        for (std::size_t k = 1; k <= 9 && ok; ++k) ok = determinant(g.leading(k)) != 0;
        if (ok) out.push_back(std::move(g));
    }
    return out;
}

std::vector<GramSource> all_sources() {
    std::vector<GramSource> s;
    for (auto& m : discrete_sources()) s.emplace_back(m);
    for (auto& w : classical_sources()) s.emplace_back(w);
    for (auto& t : bivariate_sources()) s.emplace_back(BivariateTable{t});
    return s;
}

// --- criteria -------------------------------------------------------------

void hermite_norms(Tally& t) {
    const auto f = testing::family(hermite(), 13);
    for (unsigned n = 0; n <= 12; ++n)
        t.expect(f.norms[n] / f.norms[0] == factorial(n) / pow(Rational(2), n), "H_" + std::to_string(n));
}

void laguerre_forms(Tally& t) {
    for (const auto& a : {R(0), R(1, 2), R(1)}) {
        const auto f = testing::family(laguerre(a), 12);
        for (unsigned n = 0; n <= 10; ++n) {
            t.expect(f.s1(n + 1, n) == -Rational(n + 1) * (Rational(n + 1) + a), "S alpha=" + to_string(a));
            t.expect(f.norms[n] / f.norms[0] == factorial(n) * pochhammer(a + 1, n), "H alpha=" + to_string(a));
        }
    }
}

void jacobi_forms(Tally& t) {
    for (const auto& [a, b] : {std::pair{R(0), R(0)}, std::pair{R(1), R(0)}, std::pair{R(1, 2), R(1, 2)}}) {
        const auto f = testing::family(jacobi(a, b), 12);
        for (unsigned n = 0; n <= 10; ++n) {
            const Rational closed = Rational(n + 1) * (a - b) / ((a + b + 2) + Rational(2 * n));
            t.expect(f.s1(n + 1, n) == closed, "S (" + to_string(a) + "," + to_string(b) + ") n=" + std::to_string(n));
        }
    }
    const auto leg = testing::family(jacobi(0, 0), 2);
    t.expect(leg.norms[1] / leg.norms[0] == R(1, 3), "Legendre H1/H0");
}

void operator_diagonalization(Tally& t) {
    for (const auto& w : {hermite(), laguerre(0), laguerre(R(1, 2)), jacobi(0, 0), jacobi(R(1, 2), R(-1, 3))}) {
        const auto p = pearson_data(w);
        const std::size_t n = 13;  // degrees 0..12
        const auto f = testing::family(w, n);
        const auto conj = f.s1 * diff_operator_matrix<Rational>(p, n) * unit_lower_inverse(f.s1);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const Rational expected = i == j ? Rational(static_cast<long>(i)) * (p.A + Rational(static_cast<long>(i) - 1) * p.a) : Rational(0);
                t.expect(conj(i, j) == expected, std::string(family_name(w.family)) + " entry " + std::to_string(i) + "," + std::to_string(j));
            }
    }
}

void biorthogonality(Tally& t) {
    const auto sources = all_sources();
    t.expect(sources.size() == 8, "eight sources");
    for (const auto& s : sources) {
        const auto f = testing::family(s, 9);
        for (std::size_t k = 0; k <= 8; ++k)
            for (std::size_t l = 0; l <= 8; ++l) {
                t.expect(bilinear_form(f.gram, f.p1(k), f.p2(l)) == (k == l ? f.norms[k] : Rational(0)), "biorthogonality");
                if (l < k) {
                    t.expect(bilinear_form(f.gram, f.p1(k), Poly::monomial(l)) == 0, "orthogonality P1");
                    t.expect(bilinear_form(f.gram, Poly::monomial(l), f.p2(k)) == 0, "orthogonality P2");
                }
            }
    }
}

void roots_eigenvalues(Tally& t) {
    for (const auto& s : all_sources()) {
        const auto f = testing::family(s, 9);
        for (Side side : {Side::first, Side::second}) {
            const auto j = spectral_matrix(f, side).j;
            for (std::size_t k = 1; k <= 8; ++k)
                t.expect(Poly(char_poly(j.leading(k))) == f.poly(side, k), "char_poly k=" + std::to_string(k));
        }
    }
}

std::vector<double> float_moments(const GramSource& s, std::size_t count) {
    std::vector<Rational> m = std::holds_alternative<DiscreteMeasure>(s) ? moments_discrete(std::get<DiscreteMeasure>(s), count)
                                                                           : moments_classical(std::get<ClassicalWeight>(s), count);
    std::vector<double> out;
    for (const auto& v : m) out.push_back(static_cast<double>(v));
    return out;
}

void quadrature(Tally& t) {
    std::vector<std::pair<GramSource, std::pair<double, double>>> cases{{jacobi(0, 0), {-1.0, 1.0}}};
    for (int i = 0; i < 2; ++i) {
        const auto m = discrete_sources()[static_cast<std::size_t>(i)];
        double lo = 1e300, hi = -1e300;
        for (const auto& a : m.atoms) {
            lo = std::min(lo, static_cast<double>(a.position));
            hi = std::max(hi, static_cast<double>(a.position));
        }
        cases.emplace_back(m, std::pair{lo, hi});
    }
    for (const auto& [s, support] : cases) {
        const auto f = testing::family(s, 9);
        const auto mom = float_moments(s, 16);
        for (std::size_t k = 1; k <= 8; ++k) {
            const auto rule = gauss_rule(f, k, static_cast<double>(f.norms[0]));
            const double err = exactness_check(rule, mom);
            t.expect(err < 1e-12, "exactness k=" + std::to_string(k) + " err=" + to_string(err));
            for (std::size_t l = 0; l < k; ++l) {
                t.expect(rule.nodes[l] > support.first && rule.nodes[l] < support.second, "support");
                if (l > 0) t.expect(rule.nodes[l] > rule.nodes[l - 1], "simple nodes");
                t.expect(rule.weights[l] > 0, "positive weight");
            }
        }
    }
}

void moment_identity(Tally& t) {
    for (const auto& s : all_sources()) {
        if (std::holds_alternative<BivariateTable>(s)) continue;
        const auto f = testing::family(s, 10);
        const auto j = spectral_matrix(f, Side::first).j;
        std::vector<Rational> mom = std::holds_alternative<DiscreteMeasure>(s) ? moments_discrete(std::get<DiscreteMeasure>(s), 18)
                                                                                : moments_classical(std::get<ClassicalWeight>(s), 18);
        for (std::size_t k = 1; k <= 9; ++k) {
            auto p = Matrix<Rational>::identity(k);
            for (std::size_t e = 0; e < 2 * k; ++e) {
                t.expect(p(0, 0) * f.norms[0] == mom[e], "m_" + std::to_string(e) + " k=" + std::to_string(k));
                p = p * j.leading(k);
            }
        }
    }
}

void kernel_identities(Tally& t) {
    const std::vector<std::string> wanted{"cd_formula", "confluent_cd", "mixed_cd_formula", "abc_theorem", "reproducing", "projection"};
    IdentityOptions opt;
    opt.n = 7;  // kernels K_0..K_6
    opt.points = 20;
    for (const auto& s : all_sources()) {
        for (std::uint64_t seed : {0u, 1u}) {
            opt.seed = seed;
            for (const auto& r : run_identities<Rational>(s, opt)) {
                if (std::find(wanted.begin(), wanted.end(), r.name) == wanted.end()) continue;
                if (r.note.rfind("skipped", 0) == 0) continue;
                t.expect(r.passed && r.residual == "0", r.name + " residual " + r.residual);
            }
        }
    }
    // independent pass over the CD formula and ABC theorem
    RationalSampler pick(4242);
    for (const auto& m : discrete_sources()) {
        const auto f = testing::family(m, 7);
        for (std::size_t n = 0; n < 6; ++n)
            for (int p = 0; p < 20; ++p) {
                const Rational x = pick(), y = pick();
                const Rational k = cd_kernel(f, n, x, y);
                t.expect(abc_kernel(f.gram, n + 1, x, y) == k, "abc");
                t.expect((x - y) * k == (eval_poly(f, Side::first, n, y) * eval_poly(f, Side::first, n + 1, x) -
                                         eval_poly(f, Side::first, n + 1, y) * eval_poly(f, Side::first, n, x)) /
                                            f.norms[n],
                         "cd");
            }
    }
}

void heine(Tally& t) {
    testing::MeasureGen gen(77);
    RationalSampler pick(78);
    for (std::size_t atoms = 4; atoms <= 6; ++atoms)
        for (int rep = 0; rep < 3; ++rep) {
            const auto m = gen.positive(atoms);
            // P_4 of a 4-atom measure has a vanishing norm
            const auto f = build_families(gram_matrix(m, 5), BuildOptions{true});
            for (std::size_t k = 0; k <= 4; ++k)
                for (int p = 0; p < 4; ++p) {
                    const Rational x = pick();
                    t.expect(heine_oracle<Rational>(m, k, x) == eval_poly(f, Side::first, k, x), "heine k=" + std::to_string(k));
                }
        }
}

void christoffel_master(Tally& t) {
    testing::MeasureGen gen(1001);
    int cases = 0;
    for (int attempt = 0; cases < 50 && attempt < 500; ++attempt) {
        const std::size_t atoms = 5 + static_cast<std::size_t>(gen.uniform(0, 4));
        const auto m = gen.positive(atoms);
        PolyPerturbation w;
        std::vector<Rational> used;
        const std::size_t degree = static_cast<std::size_t>(gen.uniform(1, 3));
        while (w.degree() < degree) {
            const Rational r = gen.avoiding(m, used);
            used.push_back(r);
            const auto mult = static_cast<unsigned>(std::min<long>(gen.uniform(1, 2), static_cast<long>(degree - w.degree())));
            w.roots.emplace_back(r, mult);
        }
        const auto f = testing::family(m, atoms);
        const auto oracle = try_build(christoffel_gram(f.gram, w));
        if (!oracle) continue;
        const auto fhat = christoffel_family(f, w);
        t.expect(same_family(fhat, *oracle), "case " + std::to_string(cases));
        // the two Hankel alternatives at a root of W
        const Rational a = w.roots[0].first;
        const auto f1 = christoffel_family(f, PolyPerturbation{{{a, 1}}});
        for (std::size_t n = 0; n < f1.order(); ++n) {
            const auto d = christoffel_polys_deg1(f, a, n);
            t.expect(d.p1 == christoffel_kernel_formula(f, a, n) && d.p1 == f1.p1(n), "Hankel alternatives");
        }
        ++cases;
    }
    t.expect(cases == 50, "50 cases evaluated, got " + std::to_string(cases));
}

void geronimus_master(Tally& t) {
    testing::MeasureGen gen(2002);
    const std::vector<Rational> xis{0, 1, R(-1, 2)};
    int cases = 0, iterated = 0;
    for (int attempt = 0; cases < 50 && attempt < 500; ++attempt) {
        const std::size_t atoms = 5 + static_cast<std::size_t>(gen.uniform(0, 4));
        const auto m = gen.positive(atoms);
        const std::size_t steps = attempt % 2 == 0 ? 1 : static_cast<std::size_t>(gen.uniform(2, 3));
        std::vector<GeronimusFreeData<Rational>> data;
        std::vector<Rational> used;
        DiscreteMeasure target = m;
        for (std::size_t s = 0; s < steps; ++s) {
            const Rational q = gen.avoiding(m, used);
            used.push_back(q);
            const Rational xi = xis[static_cast<std::size_t>(gen.uniform(0, 2))];
            data.push_back({q, xi, markov(m, q)});
            target = divided(target, q, xi);
        }
        const auto direct_gram = gram_matrix(target, atoms);
        const auto oracle = try_build(direct_gram);
        if (!oracle) continue;
        const auto f = testing::family(m, atoms);
        const auto out = geronimus_iterated(f, data);
        t.expect(out.back().gram == direct_gram, "constructed Gram");
        t.expect(same_family(out.back().family, *oracle), "formula family");

        // structure of every step
        const Fam* prev = &f;
        for (const auto& st : out) {
            const auto conn = geronimus_connector(*prev, st.family).omega;
            const Rational q = st.data.q;
            const auto c1 = second_kind_from_markov(*prev, q, st.data.markov);
            const auto xi = xi_pairing_single_mass(*prev, q, st.data.xi);
            for (std::size_t i = 0; i < atoms; ++i)
                for (std::size_t j = 0; j < atoms; ++j)
                    if (j != i && j + 1 != i) t.expect(conn(i, j) == 0, "band");
            for (std::size_t n = 1; n < atoms; ++n) {
                t.expect(conn(n, n) == 1, "unit diagonal");
                const auto d = geronimus_polys_deg1(*prev, c1, xi, n);
                t.expect(conn(n, n - 1) == d.omega, "subdiagonal");
                const Rational x = gen.small_rational(), y = gen.small_rational();
                const Rational rhs = (y - q) * cd_kernel(*prev, n - 1, x, y) -
                                     eval_poly(st.family, Side::second, n, y) / st.family.norms[n] * d.omega *
                                         eval_poly(*prev, Side::first, n - 1, x);
                t.expect(cd_kernel(st.family, n - 1, x, y) == rhs, "kernel connection");
            }
            prev = &st.family;
        }
        if (steps > 1) ++iterated;
        ++cases;
    }
    t.expect(cases == 50, "50 cases evaluated, got " + std::to_string(cases));
    t.expect(iterated >= 10, "iterated cases");
}

void markov_identities(Tally& t) {
    testing::MeasureGen gen(3003);
    const auto base = testing::three_atoms();
    for (const auto& xi : {R(0), R(7)}) {
        const auto r = markov_transform_check(base, 3, 2, xi, 0, 10);
        t.expect(r.christoffel == 0 && r.geronimus == 0 && r.linear_spectral == 0, "three atoms");
    }
    for (int c = 0; c < 20; ++c) {
        const auto m = gen.positive(4 + static_cast<std::size_t>(c % 5));
        const Rational q = gen.avoiding(m);
        const auto r = markov_transform_check(m, gen.small_rational(), q, gen.small_rational(), static_cast<std::uint64_t>(c), 10);
        t.expect(r.christoffel == 0 && r.geronimus == 0 && r.linear_spectral == 0, "case " + std::to_string(c));
    }
}

void failure_surfacing(Tally& t, const std::string& exe, const std::string& data) {
    const auto m = testing::measure({{R(-1), R(2)}, {R(0), R(-8, 3)}, {R(1), R(1)}});
    const auto g = gram_matrix(m, 3);
    t.expect(testing::cofactor_det(g.leading(2)) == 0, "det G[2] = 0");
    try {
        build_families(g);
        t.expect(false, "no error raised");
    } catch (const NotQuasiDefinite& e) {
        t.expect(e.index() == 1, "index " + std::to_string(e.index()));
    }

    const std::string spec = data + "/degenerate_minor.json";
    const char* argv[] = {"opgb", "polys", "--spec", spec.c_str(), "--n", "3"};
    const auto in_process = run_cli(6, argv);
    t.expect(in_process.exit_code == 2, "in-process exit " + std::to_string(in_process.exit_code));
    const auto doc = nlohmann::json::parse(in_process.output);
    t.expect(doc["error"]["kind"] == "NotQuasiDefinite" && doc["error"]["index"] == 1, "payload");

    const std::string cmd = "\"" + exe + "\" polys --spec \"" + spec + "\" --n 3";
    FILE* pipe = popen(cmd.c_str(), "r");
    t.expect(pipe != nullptr, "spawn");
    if (!pipe) return;
    std::string out;
    char buf[512];
    while (std::fgets(buf, sizeof buf, pipe)) out += buf;
    const int status = pclose(pipe);
    t.expect(WIFEXITED(status) && WEXITSTATUS(status) == 2, "process exit status");
    t.expect(out == in_process.output, "process output");
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::cerr << "usage: acceptance <opgb> <data-dir>\n";
        return 1;
    }
    const std::string exe = argv[1], data = argv[2];
    const std::vector<std::pair<std::string, std::function<void(Tally&)>>> criteria{
        {"hermite norms", hermite_norms},
        {"laguerre closed forms", laguerre_forms},
        {"jacobi closed forms", jacobi_forms},
        {"operator diagonalization", operator_diagonalization},
        {"biorthogonality and orthogonality", biorthogonality},
        {"roots are truncation eigenvalues", roots_eigenvalues},
        {"gauss quadrature", quadrature},
        {"moment identity", moment_identity},
        {"kernel identities", kernel_identities},
        {"heine representation", heine},
        {"christoffel master oracle", christoffel_master},
        {"geronimus master oracle", geronimus_master},
        {"markov function identities", markov_identities},
        {"failure surfacing", [&](Tally& t) { failure_surfacing(t, exe, data); }},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Tally t;
        const auto start = std::chrono::steady_clock::now();
        try {
            criteria[i].second(t);
        } catch (const std::exception& e) {
            t.failures.push_back(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool ok = t.failures.empty() && t.checks > 0;
        failed += ok ? 0 : 1;
        std::ostringstream line;
        line << (ok ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].first << "  (" << t.checks << " checks, "
             << std::fixed;
        line.precision(2);
        line << secs << " s)";
        std::cout << line.str() << "\n";
        for (const auto& f : t.failures) std::cout << "      " << f << "\n";
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << "\n";
    return failed == 0 ? 0 : 1;
}
