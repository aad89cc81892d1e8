#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "riesz/configuration.hpp"
#include "riesz/drift.hpp"
#include "riesz/potentials.hpp"

namespace riesz {

/// Tamed Euler-Maruyama settings.
struct IntegratorConfig {
    double dt = 1e-4;
    std::size_t steps = 0;
    double taming_cap = 50.0;       // max drift magnitude per particle
    double min_separation = 1e-4;   // post-step pair distance below which a step is redrawn
    std::size_t record_every = 1;
    std::uint64_t seed = 0;
    std::size_t max_retries = 100;

    void validate() const;
    /// Non-fatal problems, e.g. dt * taming_cap > 0.1.
    std::vector<std::string> warnings() const;

    friend bool operator==(const IntegratorConfig&, const IntegratorConfig&) = default;
};

struct StepStats {
    std::size_t steps = 0;
    std::size_t particle_steps = 0;
    std::size_t tamed = 0;     // particle-steps with |b| > taming_cap
    std::size_t rejected = 0;  // whole steps redrawn for violating min_separation

    double tamed_fraction() const noexcept {
        return particle_steps == 0 ? 0.0 : static_cast<double>(tamed) / static_cast<double>(particle_steps);
    }
    double rejected_fraction() const noexcept {
        return steps == 0 ? 0.0 : static_cast<double>(rejected) / static_cast<double>(steps + rejected);
    }

    friend bool operator==(const StepStats&, const StepStats&) = default;
};

/// Recorded frames of a run. Row p of every frame is the same particle, so
/// label i is row label_order[i] throughout.
struct Trajectory {
    int dim = 2;
    std::vector<double> times;
    std::vector<Points> frames;
    std::vector<std::size_t> label_order;
    PotentialSpec spec;
    TruncationScheme scheme;
    IntegratorConfig integrator;
    StepStats stats;

    std::size_t particles() const noexcept { return label_order.size(); }
    Point position(std::size_t frame, std::size_t label) const {
        return frames.at(frame).row(static_cast<Eigen::Index>(label_order.at(label))).transpose();
    }
    Configuration frame(std::size_t k) const;

    friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

/// Untamed drift of every particle, all evaluated at the same state.
Points drifts(const Points& points, const PotentialSpec& spec, const TruncationScheme& scheme);

/// X + b_tamed dt + sqrt(dt) noise, with b_tamed = b min(1, M/|b|).
/// Returns the number of particles whose drift was capped.
std::size_t advance(const Points& points, const Points& noise, const PotentialSpec& spec,
                    const TruncationScheme& scheme, double dt, double taming_cap, Points& out);

/// Standard normal increments for one step. Row p is drawn from the
/// counter-based key (seed, stream_ids[p], step_index, attempt); an empty
/// `stream_ids` means stream p for row p.
Points step_noise(std::size_t n, int dim, std::uint64_t seed, std::span<const std::uint64_t> stream_ids,
                  std::uint64_t step_index, std::uint64_t attempt);

/// One simultaneous update of all particles. Steps that bring any pair closer
/// than icfg.min_separation are redrawn with fresh noise up to max_retries
/// times; then StepFailure is thrown naming the offending pair by label.
Configuration step(const Configuration& state, const PotentialSpec& spec, const TruncationScheme& scheme,
                   const IntegratorConfig& icfg, std::uint64_t step_index = 0,
                   std::span<const std::uint64_t> stream_ids = {}, StepStats* stats = nullptr);

Trajectory simulate(const Configuration& initial, const PotentialSpec& spec, const TruncationScheme& scheme,
                    const IntegratorConfig& icfg, std::span<const std::uint64_t> stream_ids = {});

}  // namespace riesz
