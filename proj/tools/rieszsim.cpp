// rieszsim: batch front end for the Riesz gas experiments.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "riesz/error.hpp"
#include "riesz/experiment.hpp"
#include "riesz/serialization.hpp"

namespace {

enum ExitCode { kOk = 0, kInternal = 1, kConfig = 2, kUnknownExperiment = 3, kIo = 4, kNumerical = 5 };

int fail(ExitCode code, const char* kind, const std::string& message) {
    std::cerr << nlohmann::json{{"error", kind}, {"message", message}, {"exit_code", static_cast<int>(code)}}.dump()
              << '\n';
    return code;
}

struct Overrides {
    std::string config_path;
    bool print_config = false;
    std::vector<std::pair<CLI::Option*, std::string>> bound;  // option, dotted key
    std::vector<std::string> values;
    std::vector<std::string> sets;
};

void add_experiment_options(CLI::App& cmd, Overrides& o) {
    cmd.add_option("--config", o.config_path, "Sectioned key=value config file");
    cmd.add_flag("--print-config", o.print_config, "Print the resolved config and exit");
    static const std::vector<std::pair<std::string, std::string>> flags = {
        {"--seed", "run.seed"},
        {"--threads", "run.threads"},
        {"--out", "run.out"},
        {"--format", "run.format"},
        {"--replicas", "run.replicas"},
        {"--n", "model.n"},
        {"--dim", "model.dim"},
        {"--beta", "model.beta"},
        {"--gamma", "model.gamma"},
        {"--free", "model.free"},
        {"--harmonic", "model.harmonic"},
        {"--scheme", "model.scheme"},
        {"--radius", "model.radius"},
        {"--initial", "model.initial"},
        {"--sweeps", "model.sweeps"},
        {"--burn-in", "model.burn_in"},
        {"--proposal-scale", "model.proposal_scale"},
        {"--intensity", "model.intensity"},
        {"--dt", "integrator.dt"},
        {"--steps", "integrator.steps"},
        {"--taming-cap", "integrator.taming_cap"},
        {"--min-separation", "integrator.min_separation"},
        {"--record-every", "integrator.record_every"},
        {"--window-lo", "analysis.window_lo"},
        {"--window-hi", "analysis.window_hi"},
        {"--control-gamma", "analysis.control_gamma"},
    };
    o.values.reserve(flags.size());
    for (const auto& [flag, key] : flags) {
        o.values.emplace_back();
        CLI::Option* opt = cmd.add_option(flag, o.values.back(), "Override " + key);
        o.bound.emplace_back(opt, key);
    }
    cmd.add_option("--set", o.sets, "Override any key: section.key=value (repeatable)");
}

riesz::ExperimentConfig resolve(const Overrides& o, const riesz::Experiment* experiment) {
    riesz::ExperimentConfig config;
    if (!o.config_path.empty()) {
        std::ifstream in(o.config_path);
        if (!in) throw riesz::ConfigError("cannot read config file '" + o.config_path + "'");
        std::ostringstream text;
        text << in.rdbuf();
        config = riesz::parse_ini(text.str());
    }
    if (const char* env = std::getenv("RIESZSIM_OUT"); env && *env) config.out = env;
    if (experiment) config.experiment = *experiment;
    for (std::size_t i = 0; i < o.bound.size(); ++i)
        if (o.bound[i].first->count() > 0) riesz::set_option(config, o.bound[i].second, o.values[i]);
    for (const std::string& s : o.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw riesz::ConfigError("--set expects section.key=value, got '" + s + "'");
        riesz::set_option(config, s.substr(0, eq), s.substr(eq + 1));
    }
    return config;
}

int execute(const riesz::ExperimentConfig& config, bool print_config) {
    if (print_config) {
        std::cout << riesz::to_ini(config);
        return kOk;
    }
    const riesz::RunResult result = riesz::run(config);
    std::cout << nlohmann::json{{"files", result.files}, {"summary", result.summary}}.dump(2) << '\n';
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulation and statistics for Brownian particles with Riesz/Coulomb interactions"};
    app.require_subcommand(1);

    struct Sub {
        riesz::Experiment experiment;
        const char* name;
        const char* help;
    };
    const std::vector<Sub> subs = {
        {riesz::Experiment::Sample, "sample", "Sample equilibrium configurations (Ginibre, log-gas MCMC, Poisson)"},
        {riesz::Experiment::DriftCheck, "drift-check", "Particle- vs origin-centred drift gap and shell increments"},
        {riesz::Experiment::Simulate, "simulate", "Integrate the truncated dynamics and write trajectories"},
        {riesz::Experiment::Msd, "msd", "Tagged-particle MSD and effective exponent"},
        {riesz::Experiment::Rigidity, "rigidity", "Number variance against a Poisson control"},
        {riesz::Experiment::Compare, "compare", "Matched MSD runs: model, short-range control, free particle"},
    };

    std::vector<Overrides> overrides(subs.size() + 1);
    std::vector<CLI::App*> commands;
    for (std::size_t i = 0; i < subs.size(); ++i) {
        CLI::App* cmd = app.add_subcommand(subs[i].name, subs[i].help);
        add_experiment_options(*cmd, overrides[i]);
        commands.push_back(cmd);
    }
    CLI::App* run_cmd = app.add_subcommand("run", "Run the experiment named in --config");
    add_experiment_options(*run_cmd, overrides.back());

    std::string traj_path;
    CLI::App* info_cmd = app.add_subcommand("traj-info", "Print the header of a trajectory file");
    info_cmd->add_option("file", traj_path, "Trajectory JSON-lines file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail(kConfig, "usage", e.what());
    }

    try {
        if (info_cmd->parsed()) {
            std::ifstream in(traj_path);
            if (!in) return fail(kIo, "io", "cannot read '" + traj_path + "'");
            std::cout << riesz::read_trajectory_header(in).dump(2) << '\n';
            return kOk;
        }
        if (run_cmd->parsed()) {
            const Overrides& o = overrides.back();
            if (o.config_path.empty()) return fail(kConfig, "config", "run requires --config");
            return execute(resolve(o, nullptr), o.print_config);
        }
        for (std::size_t i = 0; i < subs.size(); ++i)
            if (commands[i]->parsed()) return execute(resolve(overrides[i], &subs[i].experiment), overrides[i].print_config);
    } catch (const riesz::UnknownExperiment& e) {
        return fail(kUnknownExperiment, "unknown-experiment", e.what());
    } catch (const riesz::ConfigError& e) {
        return fail(kConfig, "config", e.what());
    } catch (const riesz::IoError& e) {
        return fail(kIo, "io", e.what());
    } catch (const riesz::StepFailure& e) {
        return fail(kNumerical, "step-failure", e.what());
    } catch (const riesz::DomainError& e) {
        return fail(kNumerical, "numerical", e.what());
    } catch (const std::exception& e) {
        return fail(kInternal, "internal", e.what());
    }
    return fail(kInternal, "internal", "no subcommand executed");
}
