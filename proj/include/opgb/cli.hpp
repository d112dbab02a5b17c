#pragma once

// Job specification, JSON input parsing and the command runner behind the
// `opgb` executable.

#include "opgb/biorth.hpp"
#include "opgb/measure.hpp"
#include "opgb/scalar.hpp"
#include "opgb/transforms.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace opgb {

enum class ScalarMode { exact, floating };

struct GeronimusRootSpec {
    Rational q;
    Rational xi = 0;
    std::optional<Rational> markov;  // required unless the source is a discrete measure
};

struct TransformSpec {
    PolyPerturbation christoffel;
    std::vector<GeronimusRootSpec> geronimus;
};

struct PlotOptions {
    std::string csv_path;
    double lo = -1.0;
    double hi = 1.0;
    std::size_t samples = 101;
};

struct JobSpec {
    std::string command;
    GramSource source;
    std::size_t n = 4;
    std::size_t k = 2;
    ScalarMode mode = ScalarMode::exact;
    std::uint64_t seed = 0;
    std::optional<TransformSpec> transform;
    std::optional<PlotOptions> plot;
};

/// Measure spec: {"type":"discrete","atoms":[{"q":"-1","w":"1","d":0},...]},
/// {"type":"classical","family":"jacobi","alpha":"1/2","beta":"0"} or
/// {"type":"bivariate","entries":[["1","0"],["1","1"]]}. Throws ParseError.
GramSource parse_source(const nlohmann::json& j);

/// {"christoffel":[{"r":"2","m":1}],"geronimus":[{"q":"3","xi":"0","markov":"..."}]}
TransformSpec parse_transform(const nlohmann::json& j);

/// Spec file contents: a bare measure (optionally with "transform") or a job
/// object {"source": {...}, "n": 3, "k": 2, "mode": "exact", "seed": 0,
/// "transform": {...}}. The command comes from the command line.
JobSpec parse_job(const nlohmann::json& j, const std::string& command);

/// Rational as "p/q" string, double as a JSON number.
nlohmann::json scalar_json(const Rational& v);
nlohmann::json scalar_json(double v);

/// Runs a job; throws library errors unchanged.
nlohmann::json run_job(const JobSpec& job);

/// CSV with columns x, P0(x), ..., P_{m-1}(x) on a uniform grid.
std::string emit_plot_data(const BiorthFamilies<double>& f, double lo, double hi, std::size_t samples);

/// Error document {"schema":"1","error":{"kind":...,"message":...,"index":...}}.
nlohmann::json error_json(const std::string& kind, const std::string& message, std::optional<std::size_t> index);

struct CliOutcome {
    int exit_code = 0;
    std::string output;  // serialized JSON document
};

/// Full command line handling without touching the process streams except
/// for files named by --out / --plot-csv.
CliOutcome run_cli(int argc, const char* const* argv);

inline constexpr const char* kSchemaVersion = "1";

}  // namespace opgb
