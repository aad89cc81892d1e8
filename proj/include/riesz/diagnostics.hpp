#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "riesz/configuration.hpp"
#include "riesz/dynamics.hpp"
#include "riesz/potentials.hpp"

namespace riesz {

/// Tagged-particle mean squared displacement averaged over replicas.
struct MsdSeries {
    std::vector<double> times;
    std::vector<double> msd;
    std::size_t replicas = 0;
    std::vector<std::size_t> tags;
    /// One row per (replica, tag) sample: |X(t_k) - X(0)|^2. Kept for bootstrapping.
    Eigen::MatrixXd samples;
};

/// msd[k] = mean over replicas of |X^tag(t_k) - X^tag(0)|^2.
/// All trajectories must share the time grid, potential, scheme and integrator
/// settings (seeds may differ).
MsdSeries msd(std::span<const Trajectory> trajectories, std::size_t tag);

/// Same, pooled over several exchangeable tags.
MsdSeries msd(std::span<const Trajectory> trajectories, std::span<const std::size_t> tags);

struct Path {
    std::vector<double> times;
    Points positions;  // one row per time
};

Path tagged_path(const Trajectory& trajectory, std::size_t tag);

/// t -> eps X(t / eps^2) sampled on `grid`, linearly interpolating between
/// recorded times (exact at recorded times). Throws DomainError if any
/// t / eps^2 lies beyond the recorded horizon.
Path rescale(const Path& path, double eps, std::span<const double> grid);
Path rescale(const Trajectory& trajectory, double eps, std::size_t tag, std::span<const double> grid);

struct ExponentEstimate {
    double exponent = 0.0;
    double half_width = 0.0;  // half-width of the bootstrap 95% percentile interval
    std::size_t points = 0;
};

/// Least-squares slope of log(y) against log(t).
double log_log_slope(std::span<const double> t, std::span<const double> y);

/// Effective diffusion exponent on [t_lo, t_hi] with a bootstrap over replicas.
ExponentEstimate msd_exponent(const MsdSeries& series, double t_lo, double t_hi, std::size_t resamples = 1000,
                              std::uint64_t seed = 0);

/// msd(t)/t at every power of ten covered by the positive part of the grid
/// (nearest grid point to each 10^k).
struct DecadeRatios {
    std::vector<double> times;
    std::vector<double> msd_over_t;
    bool strictly_decreasing() const;
};
DecadeRatios decade_ratios(const MsdSeries& series);

struct VarianceSeries {
    std::vector<double> radii;
    std::vector<double> count_mean;
    std::vector<double> count_variance;  // unbiased
    std::vector<bool> beyond_bulk;
    std::size_t replicas = 0;
};

/// Mean and variance of the number of points within distance R of `centre`.
/// Radii above `bulk_radius` are still computed but flagged.
VarianceSeries number_variance(std::span<const Configuration> configs, std::span<const double> radii,
                               const Point& centre, std::optional<double> bulk_radius = std::nullopt);

/// Median of a sample (mean of the two central values for even sizes).
double median(std::vector<double> values);

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_statistic(std::span<const double> a, std::span<const double> b);

/// Shared settings for matched MSD experiments.
struct MsdHarness {
    std::size_t n = 128;
    IntegratorConfig integrator{1e-4, 100000, 50.0, 1e-4, 1000, 1, 100};
    std::size_t replicas = 32;
    std::uint64_t seed = 1;
    double window_lo = 1.0;
    double window_hi = 10.0;
    std::size_t mcmc_sweeps = 1;
    std::optional<std::size_t> burn_in;          // default_burn_in(n)
    std::optional<double> proposal_scale;        // default_proposal_scale(1/pi)
    std::size_t free_replicas = 1024;  // single-particle baseline runs
    std::size_t bootstrap = 1000;
    std::size_t threads = 1;
};

/// Equilibrium initial condition for `spec`: exact Ginibre eigenvalues for
/// ginibre_spec(), otherwise the Metropolis log-gas sampler.
Configuration equilibrium_start(const PotentialSpec& spec, const MsdHarness& harness, std::uint64_t seed);

struct MsdRun {
    std::string name;
    PotentialSpec spec;
    TruncationScheme scheme;
    MsdSeries series;
    ExponentEstimate exponent;
    DecadeRatios ratios;
    StepStats stats;
};

/// `harness.replicas` equilibrium-started runs, tagging the particle nearest
/// the origin. The default scheme is the confined, untruncated origin-centred form.
MsdRun run_msd_experiment(const std::string& name, const PotentialSpec& spec, const MsdHarness& harness,
                          const TruncationScheme& scheme = TruncationScheme::origin(
                              std::numeric_limits<double>::infinity()));

/// Short-range control matched to a planar Ginibre droplet: same beta and N,
/// Riesz exponent `gamma`, and harmonic confinement c = 2/(beta N) so that the
/// nearly ideal gas has central density 1/pi like the model.
PotentialSpec matched_control_spec(const PotentialSpec& model, std::size_t n, double gamma);

/// Single free Brownian particle on the same time grid, harness.free_replicas runs.
MsdRun run_free_control(const MsdHarness& harness);

struct DiffusionReport {
    std::vector<MsdRun> runs;  // model, control, free particle
    double exponent_gap = 0.0; // control exponent minus model exponent
};

/// Matched tagged-particle MSD experiments for a model and a control potential,
/// plus the non-interacting baseline.
DiffusionReport self_diffusion_compare(const PotentialSpec& model, const PotentialSpec& control,
                                       const MsdHarness& harness);

/// Runs fn(0..count-1) on up to `threads` threads. Work items are independent.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn);

}  // namespace riesz

#include "riesz/parallel.hpp"
