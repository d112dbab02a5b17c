#include "opgb/cli.hpp"
#include "opgb/gram.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using nlohmann::json;

namespace {

json strings(const std::vector<opgb::Rational>& v) {
    json out = json::array();
    for (const auto& x : v) out.push_back(opgb::to_string(x));
    return out;
}

std::string run(const std::string& command, const std::string& spec, std::optional<std::size_t> n,
                std::optional<std::size_t> k, std::optional<std::string> mode, std::optional<std::uint64_t> seed) {
    opgb::JobSpec job = opgb::parse_job(json::parse(spec), command);
    if (n) job.n = *n;
    if (k) job.k = *k;
    if (seed) job.seed = *seed;
    if (mode) {
        if (*mode != "exact" && *mode != "float") throw opgb::InvalidArgument("mode must be exact or float");
        job.mode = *mode == "exact" ? opgb::ScalarMode::exact : opgb::ScalarMode::floating;
    }
    if (job.n == 0 || job.k == 0) throw opgb::ParseError("n and k must be >= 1");
    return opgb::run_job(job).dump();
}

std::string gram(const std::string& source, std::size_t n) {
    const auto g = opgb::gram_matrix(opgb::parse_source(json::parse(source)), n);
    json out = json::array();
    for (std::size_t i = 0; i < g.rows(); ++i) {
        const auto row = g.row(i);
        out.push_back(strings(std::vector<opgb::Rational>(row.begin(), row.end())));
    }
    return out.dump();
}

std::string moments(const std::string& source, std::size_t j_max) {
    const auto s = opgb::parse_source(json::parse(source));
    if (const auto* m = std::get_if<opgb::DiscreteMeasure>(&s)) return strings(opgb::moments_discrete(*m, j_max)).dump();
    if (const auto* w = std::get_if<opgb::ClassicalWeight>(&s)) return strings(opgb::moments_classical(*w, j_max)).dump();
    throw opgb::InvalidArgument("a bivariate table has no moment sequence");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    static py::exception<opgb::Error> error(m, "Error");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const opgb::Error& e) {
            py::object index = py::none();
            if (const auto* ie = dynamic_cast<const opgb::IndexedError*>(&e)) index = py::int_(ie->index());
            PyErr_SetObject(error.ptr(), py::make_tuple(e.what(), e.kind(), index, e.admissibility()).ptr());
        } catch (const json::exception& e) {
            PyErr_SetObject(error.ptr(), py::make_tuple(e.what(), "schema", py::none(), false).ptr());
        }
    });
    m.attr("schema_version") = opgb::kSchemaVersion;
    m.def("run", &run, py::arg("command"), py::arg("spec"), py::arg("n") = py::none(), py::arg("k") = py::none(),
          py::arg("mode") = py::none(), py::arg("seed") = py::none());
    m.def("gram", &gram, py::arg("source"), py::arg("n"));
    m.def("moments", &moments, py::arg("source"), py::arg("j_max"));
}
