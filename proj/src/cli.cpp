#include "opgb/cli.hpp"

#include "opgb/classical.hpp"
#include "opgb/gram.hpp"
#include "opgb/identities.hpp"
#include "opgb/quad.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <sstream>

namespace opgb {

using nlohmann::json;

namespace {

Rational rational_field(const json& j, const char* key, const char* where) {
    if (!j.contains(key)) throw ParseError(std::string(where) + ": missing \"" + key + "\"");
    const json& v = j.at(key);
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(Integer(v.get<long long>()));
    throw ParseError(std::string(where) + ": \"" + key + "\" must be a decimal or fraction string");
}

Rational rational_value(const json& v, const char* where) {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(Integer(v.get<long long>()));
    throw ParseError(std::string(where) + ": expected a decimal or fraction string");
}

std::size_t positive_size(const json& v, const char* what) {
    if (!v.is_number_integer() || v.get<long long>() < 1) throw ParseError(std::string(what) + " must be an integer >= 1");
    return static_cast<std::size_t>(v.get<long long>());
}

template <Scalar T>
json poly_json(const Polynomial<T>& p) {
    json out = json::array();
    for (const auto& c : p.coeffs()) out.push_back(scalar_json(c));
    return out;
}

template <Scalar T>
json vector_json(const std::vector<T>& v) {
    json out = json::array();
    for (const auto& c : v) out.push_back(scalar_json(c));
    return out;
}

template <Scalar T>
json matrix_json(const Matrix<T>& m) {
    json out = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(scalar_json(m(i, j)));
        out.push_back(std::move(row));
    }
    return out;
}

template <Scalar T>
json family_json(const BiorthFamilies<T>& f) {
    json out;
    out["order"] = f.order();
    out["hankel"] = f.hankel;
    json p1 = json::array(), p2 = json::array();
    for (std::size_t k = 0; k < f.order(); ++k) {
        p1.push_back(poly_json(f.p1(k)));
        p2.push_back(poly_json(f.p2(k)));
    }
    out["p1"] = std::move(p1);
    out["p2"] = std::move(p2);
    out["norms"] = vector_json(f.norms);
    if (f.order() >= 2) {
        if (f.hankel) {
            const auto rec = three_term_coeffs(f);
            out["jacobi"] = {{"diagonal", vector_json(rec.diagonal)}, {"offdiagonal", vector_json(rec.offdiagonal)}};
        } else {
            out["spectral"] = {{"j1", matrix_json(spectral_matrix(f, Side::first).j)},
                               {"j2", matrix_json(spectral_matrix(f, Side::second).j)}};
        }
    }
    return out;
}

json records_json(const std::vector<IdentityRecord>& records, bool& all_passed) {
    json out = json::array();
    for (const auto& r : records) {
        all_passed = all_passed && r.passed;
        json rec{{"name", r.name}, {"passed", r.passed}, {"residual", r.residual}, {"cases", r.cases}};
        if (!r.note.empty()) rec["note"] = r.note;
        out.push_back(std::move(rec));
    }
    return out;
}

const char* mode_name(ScalarMode m) { return m == ScalarMode::exact ? "exact" : "float"; }

json header(const JobSpec& job) {
    return json{{"schema", kSchemaVersion}, {"command", job.command}, {"mode", mode_name(job.mode)}};
}

template <Scalar T>
BiorthFamilies<T> family_of(const GramSource& source, std::size_t n) {
    return build_families(matrix_from_rational<T>(gram_matrix(source, n)));
}

template <Scalar T>
json run_polys(const JobSpec& job) {
    json out = header(job);
    out["n"] = job.n;
    const auto f = family_of<T>(job.source, job.n);
    out["family"] = family_json(f);
    if (job.plot) {
        const auto fd = family_of<double>(job.source, job.n);
        std::ofstream csv(job.plot->csv_path);
        if (!csv) throw InvalidArgument("cannot write " + job.plot->csv_path);
        csv << emit_plot_data(fd, job.plot->lo, job.plot->hi, job.plot->samples);
        out["plot_csv"] = job.plot->csv_path;
    }
    return out;
}

template <Scalar T>
json run_quadrature(const JobSpec& job) {
    json out = header(job);
    const std::size_t order = std::max(job.n, job.k + 1);
    const auto f = family_of<T>(job.source, order);
    const double h0 = to_double(f.norms[0]);
    const auto rule = gauss_rule(f, job.k, h0);
    std::vector<double> moments;
    for (std::size_t j = 0; j < f.gram.cols(); ++j) moments.push_back(to_double(f.gram(0, j)));
    for (std::size_t i = 1; i < f.gram.rows(); ++i) moments.push_back(to_double(f.gram(i, f.gram.cols() - 1)));
    out["k"] = job.k;
    out["nodes"] = rule.nodes;
    out["weights"] = rule.weights;
    out["h0"] = h0;
    out["exactness_residual"] = exactness_check(rule, moments);
    out["weight_crosscheck"] = rule.weight_crosscheck;
    out["moment_crosscheck"] = rule.moment_crosscheck;
    out["fallback"] = rule.fallback;
    if (const auto* w = std::get_if<ClassicalWeight>(&job.source)) out["physical_mass"] = classical_physical_mass(*w);
    return out;
}

template <Scalar T>
json run_transform(const JobSpec& job) {
    if (!job.transform) throw ParseError("transform command needs a \"transform\" object in the spec");
    const auto& ts = *job.transform;
    const std::size_t big_n = ts.christoffel.degree();
    const auto f = family_of<T>(job.source, job.n + big_n);

    std::vector<GeronimusFreeData<T>> wg;
    const auto* measure = std::get_if<DiscreteMeasure>(&job.source);
    for (std::size_t i = 0; i < ts.geronimus.size(); ++i) {
        const auto& g = ts.geronimus[i];
        Rational markov;
        if (g.markov) {
            markov = *g.markov;
        } else if (measure) {
            markov = cauchy_moments(*measure, g.q, 0)[0];
        } else {
            throw ParseError("geronimus root " + std::to_string(i) + " needs a \"markov\" value for this source");
        }
        wg.push_back({from_rational<T>(g.q), from_rational<T>(g.xi), from_rational<T>(markov)});
    }

    const auto result = linear_spectral(f, ts.christoffel, wg);
    const auto oracle = build_families(result.gram);
    const bool match = approx_equal(oracle.s1, result.family.s1) && approx_equal(oracle.s2, result.family.s2) &&
                       approx_equal(Matrix<T>::diagonal(oracle.norms), Matrix<T>::diagonal(result.family.norms));

    json out = header(job);
    out["n"] = job.n;
    out["christoffel_degree"] = big_n;
    out["geronimus_roots"] = ts.geronimus.size();
    out["family"] = family_json(result.family);
    out["gram"] = matrix_json(result.gram);
    out["oracle_match"] = match;
    json steps = json::array();
    const BiorthFamilies<T>* prev = &f;
    for (const auto& s : result.geronimus) {
        steps.push_back({{"q", scalar_json(s.data.q)},
                         {"xi", scalar_json(s.data.xi)},
                         {"markov", scalar_json(s.data.markov)},
                         {"connector", matrix_json(geronimus_connector(*prev, s.family).omega)}});
        prev = &s.family;
    }
    out["geronimus_steps"] = std::move(steps);
    if (big_n > 0) out["christoffel_connector"] = matrix_json(christoffel_connector(*prev, result.family, ts.christoffel).omega);
    return out;
}

template <Scalar T>
json run_classical_check(const JobSpec& job) {
    const auto* w = std::get_if<ClassicalWeight>(&job.source);
    if (!w) throw ParseError("classical-check needs a classical source");
    const std::size_t n = std::max<std::size_t>(job.n, 3);
    const PearsonData p = pearson_data(*w);
    json out = header(job);
    out["n"] = n;
    out["family"] = family_name(w->family);
    out["pearson"] = {{"a", scalar_json(p.a)}, {"b", scalar_json(p.b)}, {"c", scalar_json(p.c)},
                      {"A", scalar_json(p.A)}, {"B", scalar_json(p.B)}};
    json eig = json::array();
    for (std::size_t k = 0; k < n; ++k) eig.push_back(scalar_json(classical_eigenvalue(p, k)));
    out["eigenvalues"] = std::move(eig);
    bool passed = true;
    out["checks"] = records_json(classical_checks<T>(*w, n), passed);
    out["passed"] = passed;
    return out;
}

template <Scalar T>
json run_identities_cmd(const JobSpec& job) {
    json out = header(job);
    out["n"] = job.n;
    out["seed"] = job.seed;
    IdentityOptions options;
    options.n = job.n;
    options.seed = job.seed;
    auto records = run_identities<T>(job.source, options);
    if (const auto* w = std::get_if<ClassicalWeight>(&job.source)) {
        auto more = classical_checks<T>(*w, std::max<std::size_t>(job.n, 3));
        records.insert(records.end(), more.begin(), more.end());
    }
    const auto* m = std::get_if<DiscreteMeasure>(&job.source);
    if (m && job.transform && job.transform->christoffel.roots.size() == 1 && job.transform->geronimus.size() == 1) {
        const auto& t = *job.transform;
        const auto res = markov_transform_check(*m, t.christoffel.roots[0].first, t.geronimus[0].q, t.geronimus[0].xi,
                                                job.seed, 10);
        for (const auto& [name, value] : {std::pair{"markov_christoffel", res.christoffel},
                                          std::pair{"markov_geronimus", res.geronimus},
                                          std::pair{"markov_linear_spectral", res.linear_spectral}})
            records.push_back({name, value == 0, to_string(value), 10, {}});
    }
    bool passed = true;
    out["checks"] = records_json(records, passed);
    out["passed"] = passed;
    return out;
}

template <Scalar T>
json dispatch(const JobSpec& job) {
    if (job.command == "polys") return run_polys<T>(job);
    if (job.command == "quadrature") return run_quadrature<T>(job);
    if (job.command == "transform") return run_transform<T>(job);
    if (job.command == "classical-check") return run_classical_check<T>(job);
    if (job.command == "identities") return run_identities_cmd<T>(job);
    throw ParseError("unknown command \"" + job.command + "\"");
}

}  // namespace

json scalar_json(const Rational& v) { return to_string(v); }
json scalar_json(double v) { return v; }

GramSource parse_source(const json& j) {
    if (!j.is_object()) throw ParseError("source must be a JSON object");
    if (!j.contains("type") || !j.at("type").is_string()) throw ParseError("source: missing \"type\"");
    const std::string type = j.at("type").get<std::string>();
    if (type == "discrete") {
        if (!j.contains("atoms") || !j.at("atoms").is_array() || j.at("atoms").empty())
            throw ParseError("discrete source needs a nonempty \"atoms\" array");
        DiscreteMeasure m;
        for (const auto& a : j.at("atoms")) {
            if (!a.is_object()) throw ParseError("atom must be an object");
            Atom atom{rational_field(a, "q", "atom"), rational_field(a, "w", "atom"), 0};
            if (a.contains("d")) {
                const json& d = a.at("d");
                if (!d.is_number_integer() || d.get<long long>() < 0)
                    throw ParseError("atom: \"d\" must be a nonnegative integer");
                atom.derivative_order = static_cast<unsigned>(d.get<long long>());
            }
            m.atoms.push_back(std::move(atom));
        }
        return m;
    }
    if (type == "classical") {
        if (!j.contains("family") || !j.at("family").is_string()) throw ParseError("classical source needs \"family\"");
        const std::string fam = j.at("family").get<std::string>();
        ClassicalWeight w;
        if (fam == "hermite") {
            w.family = ClassicalFamily::hermite;
        } else if (fam == "laguerre") {
            w.family = ClassicalFamily::laguerre;
            w.alpha = j.contains("alpha") ? rational_field(j, "alpha", "laguerre") : Rational(0);
        } else if (fam == "jacobi") {
            w.family = ClassicalFamily::jacobi;
            w.alpha = j.contains("alpha") ? rational_field(j, "alpha", "jacobi") : Rational(0);
            w.beta = j.contains("beta") ? rational_field(j, "beta", "jacobi") : Rational(0);
        } else {
            throw ParseError("unknown classical family \"" + fam + "\"");
        }
        if (w.alpha <= -1 || w.beta <= -1) throw ParseError("classical parameters must exceed -1");
        return w;
    }
    if (type == "bivariate") {
        if (!j.contains("entries") || !j.at("entries").is_array() || j.at("entries").empty())
            throw ParseError("bivariate source needs a nonempty \"entries\" array");
        const auto& rows = j.at("entries");
        const std::size_t n = rows.size();
        Matrix<Rational> m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            if (!rows[i].is_array() || rows[i].size() != n) throw ParseError("bivariate entries must form a square table");
            for (std::size_t k = 0; k < n; ++k) m(i, k) = rational_value(rows[i][k], "entries");
        }
        return BivariateTable{std::move(m)};
    }
    throw ParseError("unknown source type \"" + type + "\"");
}

TransformSpec parse_transform(const json& j) {
    if (!j.is_object()) throw ParseError("transform must be an object");
    TransformSpec t;
    if (j.contains("christoffel")) {
        if (!j.at("christoffel").is_array()) throw ParseError("\"christoffel\" must be an array");
        for (const auto& r : j.at("christoffel")) {
            unsigned m = 1;
            if (r.contains("m")) m = static_cast<unsigned>(positive_size(r.at("m"), "multiplicity"));
            t.christoffel.roots.emplace_back(rational_field(r, "r", "christoffel root"), m);
        }
    }
    if (j.contains("geronimus")) {
        if (!j.at("geronimus").is_array()) throw ParseError("\"geronimus\" must be an array");
        for (const auto& r : j.at("geronimus")) {
            GeronimusRootSpec g;
            g.q = rational_field(r, "q", "geronimus root");
            if (r.contains("xi")) g.xi = rational_field(r, "xi", "geronimus root");
            if (r.contains("markov")) g.markov = rational_field(r, "markov", "geronimus root");
            if (r.contains("m") && positive_size(r.at("m"), "multiplicity") != 1)
                throw ParseError("geronimus roots must be simple");
            t.geronimus.push_back(std::move(g));
        }
    }
    return t;
}

JobSpec parse_job(const json& j, const std::string& command) {
    if (!j.is_object()) throw ParseError("spec must be a JSON object");
    JobSpec job;
    job.command = command;
    const bool wrapped = j.contains("source");
    job.source = parse_source(wrapped ? j.at("source") : j);
    if (j.contains("transform")) job.transform = parse_transform(j.at("transform"));
    if (wrapped) {
        if (j.contains("n")) job.n = positive_size(j.at("n"), "n");
        if (j.contains("k")) job.k = positive_size(j.at("k"), "k");
        if (j.contains("seed")) {
            if (!j.at("seed").is_number_unsigned()) throw ParseError("seed must be a nonnegative integer");
            job.seed = j.at("seed").get<std::uint64_t>();
        }
        if (j.contains("mode")) {
            const std::string mode = j.at("mode").is_string() ? j.at("mode").get<std::string>() : "";
            if (mode == "exact") job.mode = ScalarMode::exact;
            else if (mode == "float") job.mode = ScalarMode::floating;
            else throw ParseError("mode must be \"exact\" or \"float\"");
        }
    }
    return job;
}

json run_job(const JobSpec& job) {
    return job.mode == ScalarMode::exact ? dispatch<Rational>(job) : dispatch<double>(job);
}

std::string emit_plot_data(const BiorthFamilies<double>& f, double lo, double hi, std::size_t samples) {
    if (samples == 0) throw InvalidArgument("samples must be >= 1");
    std::ostringstream os;
    os << "x";
    for (std::size_t k = 0; k < f.order(); ++k) os << ",P" << k;
    os << "\n";
    for (std::size_t s = 0; s < samples; ++s) {
        const double x = samples == 1 ? lo : lo + (hi - lo) * static_cast<double>(s) / static_cast<double>(samples - 1);
        os << to_string(x);
        for (std::size_t k = 0; k < f.order(); ++k) os << "," << to_string(eval_poly(f, Side::first, k, x));
        os << "\n";
    }
    return os.str();
}

json error_json(const std::string& kind, const std::string& message, std::optional<std::size_t> index) {
    json err{{"kind", kind}, {"message", message}};
    if (index) err["index"] = *index;
    return json{{"schema", kSchemaVersion}, {"error", std::move(err)}};
}

CliOutcome run_cli(int argc, const char* const* argv) {
    CLI::App app{"Biorthogonal polynomials from Gram matrix factorizations"};
    std::string command, spec_path, out_path, mode, plot_path, range;
    std::optional<std::size_t> n, k, samples;
    std::optional<std::uint64_t> seed;
    app.add_option("command", command, "polys | quadrature | transform | classical-check | identities")
        ->required()
        ->check(CLI::IsMember({"polys", "quadrature", "transform", "classical-check", "identities"}));
    app.add_option("--spec", spec_path, "measure or job JSON file")->required();
    app.add_option("--n", n, "truncation order");
    app.add_option("--k", k, "quadrature order");
    app.add_option("--mode", mode, "exact | float")->check(CLI::IsMember({"exact", "float"}));
    app.add_option("--seed", seed, "seed for randomized identity points");
    app.add_option("--out", out_path, "write the JSON result here instead of stdout");
    app.add_option("--plot-csv", plot_path, "polys: also write plot data as CSV");
    app.add_option("--range", range, "polys plot range lo:hi (default -1:1)");
    app.add_option("--samples", samples, "polys plot samples (default 101)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        return {0, app.help()};
    } catch (const CLI::ParseError& e) {
        return {1, error_json("usage", e.what(), std::nullopt).dump(2)};
    }

    try {
        std::ifstream in(spec_path);
        if (!in) throw ParseError("cannot read spec file " + spec_path);
        json spec;
        try {
            spec = json::parse(in);
        } catch (const json::exception& e) {
            throw ParseError(std::string("invalid JSON: ") + e.what());
        }
        JobSpec job = parse_job(spec, command);
        if (n) job.n = *n;
        if (k) job.k = *k;
        if (seed) job.seed = *seed;
        if (!mode.empty()) job.mode = mode == "exact" ? ScalarMode::exact : ScalarMode::floating;
        if (job.n == 0 || job.k == 0) throw ParseError("n and k must be >= 1");
        if (!plot_path.empty()) {
            PlotOptions p;
            p.csv_path = plot_path;
            if (!range.empty()) {
                const auto colon = range.find(':');
                if (colon == std::string::npos) throw ParseError("range must look like lo:hi");
                p.lo = static_cast<double>(parse_rational(range.substr(0, colon)));
                p.hi = static_cast<double>(parse_rational(range.substr(colon + 1)));
            }
            if (samples) p.samples = *samples;
            job.plot = p;
        }

        const std::string text = run_job(job).dump(2) + "\n";
        if (!out_path.empty()) {
            std::ofstream out(out_path);
            if (!out) throw InvalidArgument("cannot write " + out_path);
            out << text;
            return {0, {}};
        }
        return {0, text};
    } catch (const ParseError& e) {
        return {1, error_json("schema", e.what(), std::nullopt).dump(2) + "\n"};
    } catch (const IndexedError& e) {
        return {e.admissibility() ? 2 : 1, error_json(e.kind(), e.what(), e.index()).dump(2) + "\n"};
    } catch (const Error& e) {
        return {1, error_json(e.kind(), e.what(), std::nullopt).dump(2) + "\n"};
    } catch (const json::exception& e) {
        return {1, error_json("schema", e.what(), std::nullopt).dump(2) + "\n"};
    } catch (const std::exception& e) {
        return {1, error_json("internal", e.what(), std::nullopt).dump(2) + "\n"};
    }
}

}  // namespace opgb
