#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "riesz/configuration.hpp"
#include "riesz/diagnostics.hpp"
#include "riesz/drift.hpp"
#include "riesz/dynamics.hpp"
#include "riesz/potentials.hpp"

namespace riesz {

using Json = nlohmann::json;

// JSON encodings. Doubles are written in shortest round-trip form, so every
// record below reads back bit-identical. Non-finite values (an untruncated
// scheme radius) are written as null and read back as +inf.

Json to_json(const PotentialSpec& spec);
PotentialSpec potential_spec_from_json(const Json& j);

Json to_json(const TruncationScheme& scheme);
TruncationScheme truncation_scheme_from_json(const Json& j);

Json to_json(const IntegratorConfig& icfg);
IntegratorConfig integrator_config_from_json(const Json& j);

/// {dim, n, points (row-major), label_order, seed, sampler, params}
Json to_json(const Configuration& config);
Configuration configuration_from_json(const Json& j);

/// {x, scheme, radii, partials, value, terms}
Json drift_record(const Point& x, const TruncationScheme& scheme, const DriftResult& result);

void write_configurations_jsonl(std::ostream& out, std::span<const Configuration> configs);
std::vector<Configuration> read_configurations_jsonl(std::istream& in);

// Trajectory JSON-lines format:
//   line 1: header {"format": "riesz-trajectory", "version": 1, "dim", "n",
//           "frames", "label_order", "spec", "scheme", "integrator", "stats",
//           "provenance"}
//   lines 2..: one frame each {"t": time, "points": [row-major coordinates]}
void write_trajectory(std::ostream& out, const Trajectory& traj, const Json& provenance = Json::object());
Trajectory read_trajectory(std::istream& in);
Json read_trajectory_header(std::istream& in);

/// Shortest round-trip decimal form of a double ("inf", "-inf", "nan" for non-finite).
std::string format_double(double value);

/// RFC-4180 CSV with a header row. Provenance, if any, goes on leading '#' lines.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};
void write_csv(std::ostream& out, const CsvTable& table, const std::vector<std::string>& comments = {});

CsvTable msd_table(const MsdSeries& series);
CsvTable variance_table(const VarianceSeries& series);

Json to_json(const MsdSeries& series);
Json to_json(const VarianceSeries& series);
Json to_json(const MsdRun& run);
Json to_json(const DiffusionReport& report);

/// One JSON object per row keyed by the header, preceded by a provenance line if given.
void write_jsonl(std::ostream& out, const CsvTable& table, const Json& provenance = Json());

}  // namespace riesz
