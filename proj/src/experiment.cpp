#include "riesz/experiment.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "riesz/diagnostics.hpp"
#include "riesz/pointfields.hpp"
#include "riesz/random.hpp"
#include "riesz/serialization.hpp"

namespace riesz {

std::string_view to_string(Experiment experiment) noexcept {
    switch (experiment) {
        case Experiment::Sample: return "sample";
        case Experiment::DriftCheck: return "drift-check";
        case Experiment::Simulate: return "simulate";
        case Experiment::Msd: return "msd";
        case Experiment::Rigidity: return "rigidity";
        case Experiment::Compare: return "compare";
    }
    return "unknown";
}

Experiment parse_experiment(std::string_view name) {
    for (Experiment e : {Experiment::Sample, Experiment::DriftCheck, Experiment::Simulate, Experiment::Msd,
                         Experiment::Rigidity, Experiment::Compare})
        if (to_string(e) == name) return e;
    throw UnknownExperiment("unknown experiment '" + std::string(name) + "'");
}

namespace {

// ---- value codecs -------------------------------------------------------

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

double parse_double(std::string_view text) {
    const std::string s = trim(text);
    if (s == "inf") return std::numeric_limits<double>::infinity();
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw ConfigError("expected a number, got '" + s + "'");
    return value;
}

std::uint64_t parse_u64(std::string_view text) {
    const std::string s = trim(text);
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw ConfigError("expected a non-negative integer, got '" + s + "'");
    return value;
}

std::size_t parse_size(std::string_view text) { return static_cast<std::size_t>(parse_u64(text)); }

std::vector<double> parse_list(std::string_view text) {
    std::vector<double> out;
    const std::string s = trim(text);
    if (s.empty()) return out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto comma = s.find(',', start);
        const auto end = comma == std::string::npos ? s.size() : comma;
        out.push_back(parse_double(std::string_view(s).substr(start, end - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

std::string format_list(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + format_double(values[i]);
    return out;
}

template <typename T>
std::string format_optional(const std::optional<T>& value) {
    if (!value) return "auto";
    if constexpr (std::is_same_v<T, double>) {
        return format_double(*value);
    } else {
        return std::to_string(*value);
    }
}

// ---- field table --------------------------------------------------------

struct Field {
    const char* section;
    const char* key;
    std::function<std::string(const ExperimentConfig&)> get;
    std::function<void(ExperimentConfig&, std::string_view)> set;
};

#define RIESZ_DOUBLE(sec, name, member)                                            \
    Field {                                                                        \
        sec, name, [](const ExperimentConfig& c) { return format_double(c.member); }, \
            [](ExperimentConfig& c, std::string_view v) { c.member = parse_double(v); } \
    }
#define RIESZ_SIZE(sec, name, member)                                              \
    Field {                                                                        \
        sec, name, [](const ExperimentConfig& c) { return std::to_string(c.member); }, \
            [](ExperimentConfig& c, std::string_view v) { c.member = parse_size(v); } \
    }

const std::vector<Field>& fields() {
    static const std::vector<Field> table = {
        {"run", "experiment", [](const ExperimentConfig& c) { return std::string(to_string(c.experiment)); },
         [](ExperimentConfig& c, std::string_view v) { c.experiment = parse_experiment(trim(v)); }},
        {"run", "seed", [](const ExperimentConfig& c) { return std::to_string(c.seed); },
         [](ExperimentConfig& c, std::string_view v) { c.seed = parse_u64(v); }},
        RIESZ_SIZE("run", "replicas", replicas),
        RIESZ_SIZE("run", "threads", threads),
        {"run", "out", [](const ExperimentConfig& c) { return c.out; },
         [](ExperimentConfig& c, std::string_view v) { c.out = trim(v); }},
        {"run", "format", [](const ExperimentConfig& c) { return std::string(c.format == OutputFormat::Csv ? "csv" : "jsonl"); },
         [](ExperimentConfig& c, std::string_view v) {
             const std::string s = trim(v);
             if (s == "csv") c.format = OutputFormat::Csv;
             else if (s == "jsonl") c.format = OutputFormat::Jsonl;
             else throw ConfigError("format must be csv or jsonl, got '" + s + "'");
         }},
        RIESZ_SIZE("model", "n", model.n),
        {"model", "dim", [](const ExperimentConfig& c) { return std::to_string(c.model.spec.dim); },
         [](ExperimentConfig& c, std::string_view v) { c.model.spec.dim = static_cast<int>(parse_u64(v)); }},
        RIESZ_DOUBLE("model", "beta", model.spec.beta),
        RIESZ_DOUBLE("model", "gamma", model.spec.gamma),
        {"model", "free",
         [](const ExperimentConfig& c) {
             return std::string(c.model.spec.free.kind == FreePotential::Kind::Harmonic ? "harmonic" : "none");
         },
         [](ExperimentConfig& c, std::string_view v) {
             const std::string s = trim(v);
             if (s == "harmonic") c.model.spec.free.kind = FreePotential::Kind::Harmonic;
             else if (s == "none") c.model.spec.free.kind = FreePotential::Kind::None;
             else throw ConfigError("free must be none or harmonic, got '" + s + "'");
         }},
        RIESZ_DOUBLE("model", "harmonic", model.spec.free.coefficient),
        {"model", "scheme",
         [](const ExperimentConfig& c) {
             return std::string(c.model.scheme.centre == TruncationScheme::Centre::Particle ? "particle" : "origin");
         },
         [](ExperimentConfig& c, std::string_view v) {
             const std::string s = trim(v);
             if (s == "particle") c.model.scheme.centre = TruncationScheme::Centre::Particle;
             else if (s == "origin") c.model.scheme.centre = TruncationScheme::Centre::Origin;
             else throw ConfigError("scheme must be particle or origin, got '" + s + "'");
         }},
        RIESZ_DOUBLE("model", "radius", model.scheme.radius),
        {"model", "initial", [](const ExperimentConfig& c) { return c.model.initial; },
         [](ExperimentConfig& c, std::string_view v) {
             const std::string s = trim(v);
             if (s != "ginibre" && s != "mcmc" && s != "poisson")
                 throw ConfigError("initial must be ginibre, mcmc or poisson, got '" + s + "'");
             c.model.initial = s;
         }},
        RIESZ_SIZE("model", "sweeps", model.sweeps),
        {"model", "burn_in", [](const ExperimentConfig& c) { return format_optional(c.model.burn_in); },
         [](ExperimentConfig& c, std::string_view v) {
             if (trim(v) == "auto") c.model.burn_in.reset();
             else c.model.burn_in = parse_size(v);
         }},
        {"model", "proposal_scale", [](const ExperimentConfig& c) { return format_optional(c.model.proposal_scale); },
         [](ExperimentConfig& c, std::string_view v) {
             if (trim(v) == "auto") c.model.proposal_scale.reset();
             else c.model.proposal_scale = parse_double(v);
         }},
        RIESZ_DOUBLE("model", "intensity", model.intensity),
        RIESZ_DOUBLE("integrator", "dt", integrator.dt),
        RIESZ_SIZE("integrator", "steps", integrator.steps),
        RIESZ_DOUBLE("integrator", "taming_cap", integrator.taming_cap),
        RIESZ_DOUBLE("integrator", "min_separation", integrator.min_separation),
        RIESZ_SIZE("integrator", "record_every", integrator.record_every),
        RIESZ_SIZE("integrator", "max_retries", integrator.max_retries),
        {"analysis", "radius_fractions", [](const ExperimentConfig& c) { return format_list(c.analysis.radius_fractions); },
         [](ExperimentConfig& c, std::string_view v) { c.analysis.radius_fractions = parse_list(v); }},
        {"analysis", "shell_radii", [](const ExperimentConfig& c) { return format_list(c.analysis.shell_radii); },
         [](ExperimentConfig& c, std::string_view v) { c.analysis.shell_radii = parse_list(v); }},
        {"analysis", "variance_radii", [](const ExperimentConfig& c) { return format_list(c.analysis.variance_radii); },
         [](ExperimentConfig& c, std::string_view v) { c.analysis.variance_radii = parse_list(v); }},
        RIESZ_DOUBLE("analysis", "window_lo", analysis.window_lo),
        RIESZ_DOUBLE("analysis", "window_hi", analysis.window_hi),
        RIESZ_SIZE("analysis", "bootstrap", analysis.bootstrap),
        RIESZ_DOUBLE("analysis", "control_gamma", analysis.control_gamma),
        RIESZ_SIZE("analysis", "free_replicas", analysis.free_replicas),
    };
    return table;
}

#undef RIESZ_DOUBLE
#undef RIESZ_SIZE

const Field* find_field(std::string_view section, std::string_view key) {
    for (const Field& f : fields())
        if (section == f.section && key == f.key) return &f;
    return nullptr;
}

}  // namespace

std::string to_ini(const ExperimentConfig& config) {
    std::string out;
    std::string_view current;
    for (const Field& f : fields()) {
        if (current != f.section) {
            if (!current.empty()) out += '\n';
            current = f.section;
            out += "[" + std::string(current) + "]\n";
        }
        out += std::string(f.key) + " = " + f.get(config) + "\n";
    }
    return out;
}

void set_option(ExperimentConfig& config, std::string_view dotted_key, std::string_view value) {
    const auto dot = dotted_key.find('.');
    if (dot == std::string_view::npos) throw ConfigError("option key must be section.key: '" + std::string(dotted_key) + "'");
    const Field* field = find_field(dotted_key.substr(0, dot), dotted_key.substr(dot + 1));
    if (!field) throw ConfigError("unknown option '" + std::string(dotted_key) + "'");
    field->set(config, value);
}

ExperimentConfig parse_ini(std::string_view text) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    std::istringstream in{std::string(text)};
    try {
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config syntax error: ") + e.message() + " (line " + std::to_string(e.line()) + ")");
    }
    ExperimentConfig config;
    bool has_experiment = false;
    for (const auto& [section, keys] : tree) {
        if (keys.empty()) throw ConfigError("config entry '" + section + "' is outside any section");
        for (const auto& [key, value] : keys) {
            const Field* field = find_field(section, key);
            if (!field) throw ConfigError("unknown config key '" + section + "." + key + "'");
            field->set(config, value.data());
            has_experiment = has_experiment || (section == "run" && key == "experiment");
        }
    }
    if (!has_experiment) throw ConfigError("config is missing run.experiment");
    return config;
}

nlohmann::json provenance(const ExperimentConfig& config) {
    nlohmann::json sections = nlohmann::json::object();
    for (const Field& f : fields()) {
        if (std::string_view(f.key) == "threads") continue;
        sections[f.section][f.key] = f.get(config);
    }
    return {{"code_version", RIESZ_VERSION}, {"config", sections}};
}

namespace {

// ---- output staging -----------------------------------------------------

class Outputs {
public:
    Outputs(std::string prefix, nlohmann::json provenance)
        : prefix_(std::move(prefix)), provenance_(std::move(provenance)) {}

    void add(const std::string& name, std::string contents) { files_.emplace_back(prefix_ + name, std::move(contents)); }

    void table(const std::string& stem, const CsvTable& table, OutputFormat format) {
        std::ostringstream out;
        if (format == OutputFormat::Csv) {
            std::vector<std::string> comments;
            comments.push_back("provenance " + provenance_.dump());
            write_csv(out, table, comments);
            add(stem + ".csv", out.str());
        } else {
            write_jsonl(out, table, provenance_);
            add(stem + ".jsonl", out.str());
        }
    }

    void document(const std::string& name, nlohmann::json body) {
        body["provenance"] = provenance_;
        add(name, body.dump(2) + "\n");
    }

    const nlohmann::json& provenance() const { return provenance_; }

    std::vector<std::string> commit() const {
        std::vector<std::string> written;
        for (const auto& [path, contents] : files_) {
            const std::filesystem::path p(path);
            std::error_code ec;
            if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
            std::ofstream out(p, std::ios::binary | std::ios::trunc);
            if (!out) throw IoError("cannot open '" + path + "' for writing");
            out << contents;
            if (!out.flush()) throw IoError("failed writing '" + path + "'");
            written.push_back(path);
        }
        return written;
    }

    void check_writable() const {
        const std::filesystem::path p(prefix_ + ".probe");
        std::error_code ec;
        if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
        {
            std::ofstream probe(p, std::ios::binary | std::ios::trunc);
            if (!probe) throw IoError("output prefix '" + prefix_ + "' is not writable");
        }
        std::filesystem::remove(p, ec);
    }

private:
    std::string prefix_;
    nlohmann::json provenance_;
    std::vector<std::pair<std::string, std::string>> files_;
};

// ---- shared pieces ------------------------------------------------------

double window_radius(const ExperimentConfig& c) {
    return std::sqrt(static_cast<double>(c.model.n) / (std::numbers::pi * c.model.intensity));
}

Configuration poisson_control(const ExperimentConfig& c, std::uint64_t seed) {
    if (c.model.spec.dim == 2) return sample_poisson(c.model.intensity, Window::disk(Point::Zero(2), window_radius(c)), seed);
    const double half = 0.5 * static_cast<double>(c.model.n) / c.model.intensity;
    return sample_poisson(c.model.intensity, Window::box(Point::Constant(1, -half), Point::Constant(1, half)), seed);
}

Configuration initial_configuration(const ExperimentConfig& c, std::uint64_t seed) {
    if (c.model.initial == "ginibre") {
        if (c.model.spec.dim != 2) throw ConfigError("initial = ginibre needs dim = 2");
        return sample_ginibre(c.model.n, seed);
    }
    if (c.model.initial == "poisson") return poisson_control(c, seed);
    const LogGasDensity density{c.model.spec, c.model.n};
    return sample_loggas_mcmc(density, c.model.sweeps, c.model.burn_in.value_or(default_burn_in(c.model.n)),
                              c.model.proposal_scale.value_or(default_proposal_scale(c.model.intensity)), seed);
}

MsdHarness harness_from(const ExperimentConfig& c) {
    MsdHarness h;
    h.n = c.model.n;
    h.integrator = c.integrator;
    h.replicas = c.replicas;
    h.seed = c.seed;
    h.window_lo = c.analysis.window_lo;
    h.window_hi = c.analysis.window_hi;
    h.mcmc_sweeps = c.model.sweeps;
    h.burn_in = c.model.burn_in;
    h.proposal_scale = c.model.proposal_scale.value_or(default_proposal_scale(c.model.intensity));
    h.free_replicas = c.analysis.free_replicas;
    h.bootstrap = c.analysis.bootstrap;
    h.threads = c.threads;
    return h;
}

void validate(const ExperimentConfig& c) {
    try {
        c.model.spec.validate();
        c.model.scheme.validate();
        c.integrator.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    if (c.model.n == 0) throw ConfigError("model.n must be positive");
    if (c.replicas == 0) throw ConfigError("run.replicas must be positive");
    if (!(c.model.intensity > 0.0)) throw ConfigError("model.intensity must be positive");
    if (c.out.empty()) throw ConfigError("run.out must not be empty");
    if (c.model.initial == "ginibre" && c.model.spec.dim != 2) throw ConfigError("initial = ginibre needs dim = 2");
    if (c.model.initial == "mcmc" && c.model.n < 2) throw ConfigError("initial = mcmc needs n >= 2");
    if (c.experiment == Experiment::Msd || c.experiment == Experiment::Compare) {
        std::size_t inside = 0;
        for (std::size_t k = 0; k <= c.integrator.steps; k += c.integrator.record_every) {
            const double t = static_cast<double>(k) * c.integrator.dt;
            inside += t >= c.analysis.window_lo && t <= c.analysis.window_hi;
        }
        if (inside < 5)
            throw ConfigError("fit window [" + format_double(c.analysis.window_lo) + ", " +
                              format_double(c.analysis.window_hi) + "] holds " + std::to_string(inside) +
                              " recorded times; at least 5 are needed (check steps, dt, record_every)");
    }
}

// ---- experiments --------------------------------------------------------

nlohmann::json run_sample(const ExperimentConfig& c, Outputs& out) {
    std::vector<Configuration> configs(c.replicas);
    parallel_for(c.replicas, c.threads, [&](std::size_t r) { configs[r] = initial_configuration(c, derive_seed(c.seed, r)); });
    std::ostringstream jsonl;
    jsonl << nlohmann::json{{"provenance", out.provenance()}}.dump() << '\n';
    write_configurations_jsonl(jsonl, configs);
    out.add("configs.jsonl", jsonl.str());

    std::vector<double> sums;
    for (const Configuration& config : configs) sums.push_back(config.points.squaredNorm());
    double mean = 0.0;
    for (double s : sums) mean += s / static_cast<double>(sums.size());
    return {{"experiment", "sample"}, {"replicas", configs.size()}, {"mean_sum_squared_radii", mean}};
}

nlohmann::json run_drift_check(const ExperimentConfig& c, Outputs& out) {
    if (c.model.spec.dim != 2) throw ConfigError("drift-check needs dim = 2");
    if (c.analysis.radius_fractions.empty() || c.analysis.shell_radii.size() < 2)
        throw ConfigError("drift-check needs radius_fractions and at least two shell_radii");
    const double root_n = std::sqrt(static_cast<double>(c.model.n));
    const std::size_t nr = c.analysis.radius_fractions.size();
    const std::size_t ns = c.analysis.shell_radii.size();
    const PotentialSpec unconfined{c.model.spec.gamma, 2, c.model.spec.beta, FreePotential::none()};
    const TruncationScheme shells = TruncationScheme::particle(c.analysis.shell_radii.back());

    std::vector<std::vector<double>> gaps(nr, std::vector<double>(c.replicas));
    std::vector<std::vector<double>> model_inc(ns - 1, std::vector<double>(c.replicas));
    std::vector<std::vector<double>> control_inc(ns - 1, std::vector<double>(c.replicas));
    const auto increments = [&](const Configuration& config, std::vector<std::vector<double>>& dest, std::size_t r) {
        const DriftResult d = drift_at(config.labelled(0), config, 0, unconfined, shells, c.analysis.shell_radii);
        for (std::size_t k = 0; k + 1 < ns; ++k) dest[k][r] = (d.shells[k + 1].value - d.shells[k].value).norm();
    };
    parallel_for(c.replicas, c.threads, [&](std::size_t r) {
        const Configuration config = initial_configuration(c, derive_seed(c.seed, r));
        for (std::size_t k = 0; k < nr; ++k) {
            const double cutoff = c.analysis.radius_fractions[k] * root_n;
            gaps[k][r] = config.labelled(0).norm() < cutoff ? drift_identity_gap(config, 0, cutoff, c.model.spec.beta)
                                                            : std::numeric_limits<double>::quiet_NaN();
        }
        increments(config, model_inc, r);
        increments(poisson_control(c, derive_seed(c.seed, 0xC0, r)), control_inc, r);
    });

    // Replicas whose tagged particle sits outside a cutoff are left out of that row.
    CsvTable gap_table{{"radius", "radius_over_sqrt_n", "median_gap", "mean_gap", "replicas"}, {}};
    nlohmann::json gap_medians = nlohmann::json::array();
    for (std::size_t k = 0; k < nr; ++k) {
        std::vector<double> used;
        for (double g : gaps[k])
            if (!std::isnan(g)) used.push_back(g);
        double mean = 0.0;
        for (double g : used) mean += g / static_cast<double>(used.size());
        const double med = used.empty() ? std::numeric_limits<double>::quiet_NaN() : median(used);
        gap_medians.push_back(med);
        gap_table.rows.push_back({c.analysis.radius_fractions[k] * root_n, c.analysis.radius_fractions[k], med,
                                  used.empty() ? med : mean, static_cast<double>(used.size())});
    }
    out.table("drift_check", gap_table, c.format);

    CsvTable shell_table{{"radius_inner", "radius_outer", "median_increment", "median_increment_poisson"}, {}};
    nlohmann::json model_meds = nlohmann::json::array(), control_meds = nlohmann::json::array();
    for (std::size_t k = 0; k + 1 < ns; ++k) {
        const double m = median(model_inc[k]);
        const double p = median(control_inc[k]);
        model_meds.push_back(m);
        control_meds.push_back(p);
        shell_table.rows.push_back({c.analysis.shell_radii[k], c.analysis.shell_radii[k + 1], m, p});
    }
    out.table("drift_shells", shell_table, c.format);

    const double first_gap = gap_medians.front().get<double>();
    const double last_gap = gap_medians.back().get<double>();
    nlohmann::json summary = {{"experiment", "drift-check"},
                              {"replicas", c.replicas},
                              {"radius_fractions", c.analysis.radius_fractions},
                              {"median_gap", gap_medians},
                              {"gap_decreases", last_gap < first_gap},
                              {"shell_radii", c.analysis.shell_radii},
                              {"median_increment", model_meds},
                              {"median_increment_poisson", control_meds}};
    if (ns >= 3) {
        summary["increment_ratio"] = model_meds.back().get<double>() / model_meds.front().get<double>();
        summary["increment_ratio_poisson"] = control_meds.back().get<double>() / control_meds.front().get<double>();
    }
    out.document("drift_check.json", summary);
    return summary;
}

nlohmann::json run_simulate(const ExperimentConfig& c, Outputs& out) {
    std::vector<Trajectory> trajectories(c.replicas);
    parallel_for(c.replicas, c.threads, [&](std::size_t r) {
        const std::uint64_t replica_seed = derive_seed(c.seed, r);
        const Configuration start = initial_configuration(c, derive_seed(replica_seed, 0));
        IntegratorConfig icfg = c.integrator;
        icfg.seed = derive_seed(replica_seed, 1);
        trajectories[r] = simulate(start, c.model.spec, c.model.scheme, icfg);
    });
    nlohmann::json stats = nlohmann::json::array();
    for (std::size_t r = 0; r < trajectories.size(); ++r) {
        std::ostringstream s;
        write_trajectory(s, trajectories[r], out.provenance());
        out.add("traj_" + std::to_string(r) + ".jsonl", s.str());
        const StepStats& st = trajectories[r].stats;
        stats.push_back({{"tamed_fraction", st.tamed_fraction()}, {"rejected_fraction", st.rejected_fraction()}});
    }
    nlohmann::json summary = {{"experiment", "simulate"},
                              {"replicas", c.replicas},
                              {"frames", trajectories.front().frames.size()},
                              {"warnings", c.integrator.warnings()},
                              {"stats", stats}};
    out.document("simulate.json", summary);
    return summary;
}

nlohmann::json run_msd(const ExperimentConfig& c, Outputs& out) {
    const MsdRun result = run_msd_experiment("model", c.model.spec, harness_from(c), c.model.scheme);
    out.table("msd", msd_table(result.series), c.format);
    nlohmann::json summary = to_json(result);
    summary["experiment"] = "msd";
    summary["window"] = {c.analysis.window_lo, c.analysis.window_hi};
    out.document("msd.json", summary);
    return summary;
}

nlohmann::json run_rigidity(const ExperimentConfig& c, Outputs& out) {
    if (c.model.spec.dim != 2) throw ConfigError("rigidity needs dim = 2");
    std::vector<Configuration> model(c.replicas), control(c.replicas);
    parallel_for(c.replicas, c.threads, [&](std::size_t r) {
        model[r] = initial_configuration(c, derive_seed(c.seed, r));
        control[r] = poisson_control(c, derive_seed(c.seed, 0xC0, r));
    });
    const double bulk = 0.5 * std::sqrt(static_cast<double>(c.model.n));
    const Point centre = Point::Zero(2);
    const VarianceSeries vm = number_variance(model, c.analysis.variance_radii, centre, bulk);
    const VarianceSeries vp = number_variance(control, c.analysis.variance_radii, centre, bulk);
    out.table("rigidity_model", variance_table(vm), c.format);
    out.table("rigidity_poisson", variance_table(vp), c.format);

    bool decreasing = true;
    nlohmann::json dispersion = nlohmann::json::array();
    const double sigma = std::sqrt(2.0 / static_cast<double>(c.replicas - 1));
    bool dispersion_ok = true;
    for (std::size_t k = 0; k < vm.radii.size(); ++k) {
        if (k > 0) {
            const double prev = vm.count_variance[k - 1] / (vm.radii[k - 1] * vm.radii[k - 1]);
            const double cur = vm.count_variance[k] / (vm.radii[k] * vm.radii[k]);
            decreasing = decreasing && cur < prev;
        }
        const double index = vp.count_mean[k] > 0.0 ? vp.count_variance[k] / vp.count_mean[k] : 0.0;
        dispersion.push_back(index);
        dispersion_ok = dispersion_ok && std::abs(index - 1.0) <= 3.0 * sigma;
    }
    nlohmann::json summary = {{"experiment", "rigidity"},
                              {"model", to_json(vm)},
                              {"poisson", to_json(vp)},
                              {"variance_over_area_decreasing", decreasing},
                              {"poisson_dispersion_index", dispersion},
                              {"poisson_dispersion_within_3sigma", dispersion_ok},
                              {"bulk_radius", bulk}};
    out.document("rigidity.json", summary);
    return summary;
}

nlohmann::json run_compare(const ExperimentConfig& c, Outputs& out) {
    const PotentialSpec control = matched_control_spec(c.model.spec, c.model.n, c.analysis.control_gamma);
    const DiffusionReport report = self_diffusion_compare(c.model.spec, control, harness_from(c));
    for (const MsdRun& run : report.runs) out.table("compare_" + run.name, msd_table(run.series), c.format);
    nlohmann::json summary = to_json(report);
    summary["experiment"] = "compare";
    summary["window"] = {c.analysis.window_lo, c.analysis.window_hi};
    out.document("compare.json", summary);
    return summary;
}

}  // namespace

RunResult run(const ExperimentConfig& config) {
    validate(config);
    Outputs out(config.out, provenance(config));
    out.check_writable();
    RunResult result;
    switch (config.experiment) {
        case Experiment::Sample: result.summary = run_sample(config, out); break;
        case Experiment::DriftCheck: result.summary = run_drift_check(config, out); break;
        case Experiment::Simulate: result.summary = run_simulate(config, out); break;
        case Experiment::Msd: result.summary = run_msd(config, out); break;
        case Experiment::Rigidity: result.summary = run_rigidity(config, out); break;
        case Experiment::Compare: result.summary = run_compare(config, out); break;
    }
    result.files = out.commit();
    return result;
}

}  // namespace riesz
