#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "riesz/drift.hpp"
#include "riesz/dynamics.hpp"
#include "riesz/potentials.hpp"

namespace riesz {

enum class Experiment { Sample, DriftCheck, Simulate, Msd, Rigidity, Compare };

std::string_view to_string(Experiment experiment) noexcept;
/// Throws UnknownExperiment.
Experiment parse_experiment(std::string_view name);

enum class OutputFormat { Csv, Jsonl };

struct ModelConfig {
    PotentialSpec spec = ginibre_spec();
    TruncationScheme scheme = TruncationScheme::origin(std::numeric_limits<double>::infinity());
    std::size_t n = 256;
    std::string initial = "ginibre";  // ginibre | mcmc | poisson
    std::size_t sweeps = 1;
    std::optional<std::size_t> burn_in;     // unset: 100 n
    std::optional<double> proposal_scale;   // unset: 0.5 / sqrt(intensity)
    double intensity = 0.3183098861837907;  // 1/pi, the Ginibre bulk density

    friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

struct AnalysisConfig {
    std::vector<double> radius_fractions{0.2, 0.4, 0.6, 0.8};  // drift-check cutoffs, in units of sqrt(n)
    std::vector<double> shell_radii{4.0, 8.0, 16.0};
    std::vector<double> variance_radii{2.0, 4.0, 8.0};
    double window_lo = 1.0;
    double window_hi = 10.0;
    std::size_t bootstrap = 1000;
    double control_gamma = 5.0;
    std::size_t free_replicas = 1024;

    friend bool operator==(const AnalysisConfig&, const AnalysisConfig&) = default;
};

/// Everything needed to reproduce one experiment. Every field has a default;
/// the defaults run the Ginibre drift check at n = 256.
struct ExperimentConfig {
    Experiment experiment = Experiment::DriftCheck;
    std::uint64_t seed = 1;
    std::size_t replicas = 20;
    std::size_t threads = 1;
    std::string out = "riesz_";
    OutputFormat format = OutputFormat::Csv;
    ModelConfig model;
    IntegratorConfig integrator{1e-4, 1000, 50.0, 1e-4, 10, 0, 100};
    AnalysisConfig analysis;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Sectioned key = value text ([run], [model], [integrator], [analysis]).
/// Doubles use shortest round-trip form, so parse_ini(to_ini(c)) == c.
std::string to_ini(const ExperimentConfig& config);

/// Throws ConfigError on syntax errors, unknown keys, bad values or a
/// missing `experiment` key; UnknownExperiment on an unrecognised name.
ExperimentConfig parse_ini(std::string_view text);

/// Sets one dotted key ("model.n", "run.seed", ...) from its textual value.
void set_option(ExperimentConfig& config, std::string_view dotted_key, std::string_view value);

/// Resolved config (minus the thread count) plus code version; embedded in every output.
nlohmann::json provenance(const ExperimentConfig& config);

struct RunResult {
    std::vector<std::string> files;
    nlohmann::json summary;
};

/// Runs the configured experiment and writes its outputs under `config.out`.
/// Outputs depend on the config alone; the thread count never changes them.
RunResult run(const ExperimentConfig& config);

}  // namespace riesz
