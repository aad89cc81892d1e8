#include "riesz/serialization.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

namespace riesz {
namespace {

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

double number_or_inf(const Json& j) {
    return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

Json point_json(const Point& x) {
    Json out = Json::array();
    for (Eigen::Index c = 0; c < x.size(); ++c) out.push_back(x(c));
    return out;
}

Json flatten(const Points& points) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < points.rows(); ++i)
        for (Eigen::Index c = 0; c < points.cols(); ++c) out.push_back(points(i, c));
    return out;
}

Points unflatten(const Json& flat, std::size_t n, int dim) {
    if (flat.size() != n * static_cast<std::size_t>(dim)) throw DomainError("point array has the wrong length");
    Points points(static_cast<Eigen::Index>(n), dim);
    std::size_t k = 0;
    for (Eigen::Index i = 0; i < points.rows(); ++i)
        for (Eigen::Index c = 0; c < dim; ++c) points(i, c) = flat.at(k++).get<double>();
    return points;
}

Json stats_json(const StepStats& s) {
    return {{"steps", s.steps}, {"particle_steps", s.particle_steps}, {"tamed", s.tamed}, {"rejected", s.rejected}};
}

StepStats stats_from_json(const Json& j) {
    return {j.at("steps").get<std::size_t>(), j.at("particle_steps").get<std::size_t>(),
            j.at("tamed").get<std::size_t>(), j.at("rejected").get<std::size_t>()};
}

}  // namespace

Json to_json(const PotentialSpec& spec) {
    const bool harmonic = spec.free.kind == FreePotential::Kind::Harmonic;
    return {{"gamma", spec.gamma},
            {"dim", spec.dim},
            {"beta", spec.beta},
            {"free", harmonic ? "harmonic" : "none"},
            {"harmonic", spec.free.coefficient},
            {"regime", std::string(to_string(classify(spec)))}};
}

PotentialSpec potential_spec_from_json(const Json& j) {
    PotentialSpec spec;
    spec.gamma = j.at("gamma").get<double>();
    spec.dim = j.at("dim").get<int>();
    spec.beta = j.at("beta").get<double>();
    const std::string kind = j.at("free").get<std::string>();
    if (kind == "harmonic") {
        spec.free = FreePotential::harmonic(j.at("harmonic").get<double>());
    } else if (kind == "none") {
        spec.free = FreePotential::none();
    } else {
        throw DomainError("unknown free potential '" + kind + "'");
    }
    return spec;
}

Json to_json(const TruncationScheme& scheme) {
    return {{"centre", scheme.centre == TruncationScheme::Centre::Particle ? "particle" : "origin"},
            {"radius", number_or_null(scheme.radius)}};
}

TruncationScheme truncation_scheme_from_json(const Json& j) {
    const std::string centre = j.at("centre").get<std::string>();
    TruncationScheme scheme;
    if (centre == "particle") {
        scheme.centre = TruncationScheme::Centre::Particle;
    } else if (centre == "origin") {
        scheme.centre = TruncationScheme::Centre::Origin;
    } else {
        throw DomainError("unknown truncation centre '" + centre + "'");
    }
    scheme.radius = number_or_inf(j.at("radius"));
    return scheme;
}

Json to_json(const IntegratorConfig& icfg) {
    return {{"dt", icfg.dt},
            {"steps", icfg.steps},
            {"taming_cap", icfg.taming_cap},
            {"min_separation", icfg.min_separation},
            {"record_every", icfg.record_every},
            {"seed", icfg.seed},
            {"max_retries", icfg.max_retries}};
}

IntegratorConfig integrator_config_from_json(const Json& j) {
    IntegratorConfig icfg;
    icfg.dt = j.at("dt").get<double>();
    icfg.steps = j.at("steps").get<std::size_t>();
    icfg.taming_cap = j.at("taming_cap").get<double>();
    icfg.min_separation = j.at("min_separation").get<double>();
    icfg.record_every = j.at("record_every").get<std::size_t>();
    icfg.seed = j.at("seed").get<std::uint64_t>();
    icfg.max_retries = j.at("max_retries").get<std::size_t>();
    return icfg;
}

Json to_json(const Configuration& config) {
    Json params = Json::object();
    for (const auto& [key, value] : config.info.params) params[key] = number_or_null(value);
    return {{"dim", config.dim},
            {"n", config.size()},
            {"points", flatten(config.points)},
            {"label_order", config.label_order},
            {"seed", config.info.seed},
            {"sampler", config.info.sampler},
            {"params", params}};
}

Configuration configuration_from_json(const Json& j) {
    Configuration config;
    config.dim = j.at("dim").get<int>();
    const auto n = j.at("n").get<std::size_t>();
    config.points = unflatten(j.at("points"), n, config.dim);
    config.label_order = j.at("label_order").get<std::vector<std::size_t>>();
    config.info.seed = j.at("seed").get<std::uint64_t>();
    config.info.sampler = j.at("sampler").get<std::string>();
    for (const auto& [key, value] : j.at("params").items()) config.info.params[key] = number_or_inf(value);
    config.validate();
    return config;
}

Json drift_record(const Point& x, const TruncationScheme& scheme, const DriftResult& result) {
    Json radii = Json::array();
    Json partials = Json::array();
    for (const ShellPartial& shell : result.shells) {
        radii.push_back(number_or_null(shell.radius));
        partials.push_back(point_json(shell.value));
    }
    return {{"x", point_json(x)},
            {"scheme", to_json(scheme)},
            {"radii", radii},
            {"partials", partials},
            {"value", point_json(result.value)},
            {"terms", result.terms_used}};
}

void write_configurations_jsonl(std::ostream& out, std::span<const Configuration> configs) {
    for (const Configuration& config : configs) out << to_json(config).dump() << '\n';
}

std::vector<Configuration> read_configurations_jsonl(std::istream& in) {
    std::vector<Configuration> configs;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        configs.push_back(configuration_from_json(Json::parse(line)));
    }
    return configs;
}

void write_trajectory(std::ostream& out, const Trajectory& traj, const Json& provenance) {
    const Json header = {{"format", "riesz-trajectory"},
                         {"version", 1},
                         {"dim", traj.dim},
                         {"n", traj.particles()},
                         {"frames", traj.frames.size()},
                         {"label_order", traj.label_order},
                         {"spec", to_json(traj.spec)},
                         {"scheme", to_json(traj.scheme)},
                         {"integrator", to_json(traj.integrator)},
                         {"stats", stats_json(traj.stats)},
                         {"provenance", provenance}};
    out << header.dump() << '\n';
    for (std::size_t k = 0; k < traj.frames.size(); ++k) {
        const Json frame = {{"t", traj.times[k]}, {"points", flatten(traj.frames[k])}};
        out << frame.dump() << '\n';
    }
}

Json read_trajectory_header(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw DomainError("trajectory file is empty");
    Json header = Json::parse(line);
    if (header.value("format", "") != "riesz-trajectory") throw DomainError("not a trajectory file");
    if (header.value("version", 0) != 1) throw DomainError("unsupported trajectory version");
    return header;
}

Trajectory read_trajectory(std::istream& in) {
    const Json header = read_trajectory_header(in);
    Trajectory traj;
    traj.dim = header.at("dim").get<int>();
    const auto n = header.at("n").get<std::size_t>();
    const auto frames = header.at("frames").get<std::size_t>();
    traj.label_order = header.at("label_order").get<std::vector<std::size_t>>();
    traj.spec = potential_spec_from_json(header.at("spec"));
    traj.scheme = truncation_scheme_from_json(header.at("scheme"));
    traj.integrator = integrator_config_from_json(header.at("integrator"));
    traj.stats = stats_from_json(header.at("stats"));
    std::string line;
    while (traj.frames.size() < frames && std::getline(in, line)) {
        const Json frame = Json::parse(line);
        traj.times.push_back(frame.at("t").get<double>());
        traj.frames.push_back(unflatten(frame.at("points"), n, traj.dim));
    }
    if (traj.frames.size() != frames) throw DomainError("trajectory file is truncated");
    return traj;
}

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, result.ptr);
}

namespace {

std::string csv_field(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string quoted = "\"";
    for (char c : field) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    return quoted + '"';
}

}  // namespace

void write_csv(std::ostream& out, const CsvTable& table, const std::vector<std::string>& comments) {
    for (const std::string& line : comments) out << "# " << line << "\r\n";
    for (std::size_t c = 0; c < table.header.size(); ++c) out << (c ? "," : "") << csv_field(table.header[c]);
    out << "\r\n";
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_double(row[c]);
        out << "\r\n";
    }
}

CsvTable msd_table(const MsdSeries& series) {
    CsvTable table{{"t", "msd", "msd_over_t", "samples"}, {}};
    const auto samples = static_cast<double>(series.samples.rows());
    for (std::size_t k = 0; k < series.times.size(); ++k) {
        const double t = series.times[k];
        table.rows.push_back({t, series.msd[k], t > 0.0 ? series.msd[k] / t : 0.0, samples});
    }
    return table;
}

CsvTable variance_table(const VarianceSeries& series) {
    CsvTable table{{"radius", "count_mean", "count_variance", "variance_over_area", "beyond_bulk", "replicas"}, {}};
    for (std::size_t k = 0; k < series.radii.size(); ++k) {
        const double r = series.radii[k];
        table.rows.push_back({r, series.count_mean[k], series.count_variance[k],
                              series.count_variance[k] / (std::numbers::pi * r * r),
                              series.beyond_bulk[k] ? 1.0 : 0.0, static_cast<double>(series.replicas)});
    }
    return table;
}

Json to_json(const MsdSeries& series) {
    return {{"times", series.times}, {"msd", series.msd}, {"replicas", series.replicas}, {"tags", series.tags}};
}

Json to_json(const VarianceSeries& series) {
    return {{"radii", series.radii},
            {"count_mean", series.count_mean},
            {"count_variance", series.count_variance},
            {"beyond_bulk", series.beyond_bulk},
            {"replicas", series.replicas}};
}

Json to_json(const MsdRun& run) {
    return {{"name", run.name},
            {"spec", to_json(run.spec)},
            {"scheme", to_json(run.scheme)},
            {"exponent", run.exponent.exponent},
            {"half_width", run.exponent.half_width},
            {"window_points", run.exponent.points},
            {"decade_times", run.ratios.times},
            {"msd_over_t", run.ratios.msd_over_t},
            {"msd_over_t_decreasing", run.ratios.strictly_decreasing()},
            {"samples", run.series.samples.rows()},
            {"stats", stats_json(run.stats)}};
}

Json to_json(const DiffusionReport& report) {
    Json runs = Json::array();
    for (const MsdRun& run : report.runs) runs.push_back(to_json(run));
    return {{"runs", runs}, {"exponent_gap", report.exponent_gap}};
}

void write_jsonl(std::ostream& out, const CsvTable& table, const Json& provenance) {
    if (!provenance.is_null()) out << Json{{"provenance", provenance}}.dump() << '\n';
    for (const auto& row : table.rows) {
        Json line = Json::object();
        for (std::size_t c = 0; c < table.header.size() && c < row.size(); ++c) line[table.header[c]] = number_or_null(row[c]);
        out << line.dump() << '\n';
    }
}

}  // namespace riesz
