#include "riesz/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "riesz/pointfields.hpp"
#include "riesz/random.hpp"

namespace riesz {
namespace {

bool same_protocol(const Trajectory& a, const Trajectory& b) {
    IntegratorConfig ia = a.integrator;
    IntegratorConfig ib = b.integrator;
    ia.seed = ib.seed = 0;
    return a.times == b.times && a.dim == b.dim && a.spec == b.spec && a.scheme == b.scheme && ia == ib &&
           a.particles() == b.particles();
}

std::vector<double> column_means(const Eigen::MatrixXd& samples) {
    const Eigen::VectorXd mean = samples.colwise().mean().transpose();
    return {mean.data(), mean.data() + mean.size()};
}

}  // namespace

MsdSeries msd(std::span<const Trajectory> trajectories, std::size_t tag) {
    const std::size_t tags[] = {tag};
    MsdSeries series = msd(trajectories, tags);
    return series;
}

MsdSeries msd(std::span<const Trajectory> trajectories, std::span<const std::size_t> tags) {
    if (trajectories.empty()) throw DomainError("msd: no trajectories");
    if (tags.empty()) throw DomainError("msd: no tags");
    const Trajectory& first = trajectories.front();
    for (const Trajectory& t : trajectories)
        if (!same_protocol(first, t)) throw DomainError("msd: trajectories do not share grid and provenance");
    for (std::size_t tag : tags)
        if (tag >= first.particles()) throw DomainError("msd: tag out of range");

    MsdSeries series;
    series.times = first.times;
    series.replicas = trajectories.size();
    series.tags.assign(tags.begin(), tags.end());
    const auto frames = static_cast<Eigen::Index>(first.times.size());
    series.samples.resize(static_cast<Eigen::Index>(trajectories.size() * tags.size()), frames);
    Eigen::Index row = 0;
    for (const Trajectory& t : trajectories) {
        for (std::size_t tag : tags) {
            const auto p = static_cast<Eigen::Index>(t.label_order[tag]);
            for (Eigen::Index k = 0; k < frames; ++k)
                series.samples(row, k) = (t.frames[static_cast<std::size_t>(k)].row(p) - t.frames.front().row(p)).squaredNorm();
            ++row;
        }
    }
    series.msd = column_means(series.samples);
    return series;
}

Path tagged_path(const Trajectory& trajectory, std::size_t tag) {
    if (tag >= trajectory.particles()) throw DomainError("tagged_path: tag out of range");
    Path path;
    path.times = trajectory.times;
    path.positions.resize(static_cast<Eigen::Index>(trajectory.frames.size()), trajectory.dim);
    const auto p = static_cast<Eigen::Index>(trajectory.label_order[tag]);
    for (std::size_t k = 0; k < trajectory.frames.size(); ++k)
        path.positions.row(static_cast<Eigen::Index>(k)) = trajectory.frames[k].row(p);
    return path;
}

Path rescale(const Path& path, double eps, std::span<const double> grid) {
    if (!(eps > 0.0 && eps <= 1.0)) throw DomainError("rescale: epsilon must lie in (0, 1]");
    if (path.times.empty()) throw DomainError("rescale: empty path");
    const double inv_eps2 = 1.0 / (eps * eps);
    Path out;
    out.times.assign(grid.begin(), grid.end());
    out.positions.resize(static_cast<Eigen::Index>(grid.size()), path.positions.cols());
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const double s = grid[g] * inv_eps2;
        if (s < path.times.front() || s > path.times.back()) throw DomainError("rescale: horizon exceeded");
        const auto hi = std::lower_bound(path.times.begin(), path.times.end(), s);
        auto k = static_cast<Eigen::Index>(hi - path.times.begin());
        const auto row = static_cast<Eigen::Index>(g);
        if (*hi == s) {
            out.positions.row(row) = eps * path.positions.row(k);
        } else {
            const double t0 = path.times[static_cast<std::size_t>(k - 1)];
            const double t1 = path.times[static_cast<std::size_t>(k)];
            const double w = (s - t0) / (t1 - t0);
            out.positions.row(row) =
                eps * (path.positions.row(k - 1) + w * (path.positions.row(k) - path.positions.row(k - 1)));
        }
    }
    return out;
}

Path rescale(const Trajectory& trajectory, double eps, std::size_t tag, std::span<const double> grid) {
    return rescale(tagged_path(trajectory, tag), eps, grid);
}

double log_log_slope(std::span<const double> t, std::span<const double> y) {
    const std::size_t n = t.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += std::log(t[i]);
        my += std::log(y[i]);
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = std::log(t[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

ExponentEstimate msd_exponent(const MsdSeries& series, double t_lo, double t_hi, std::size_t resamples,
                              std::uint64_t seed) {
    std::vector<Eigen::Index> cols;
    std::vector<double> times, values;
    for (std::size_t k = 0; k < series.times.size(); ++k) {
        const double t = series.times[k];
        if (t >= t_lo && t <= t_hi) {
            if (!(series.msd[k] > 0.0)) throw DomainError("msd_exponent: non-positive msd inside the window");
            cols.push_back(static_cast<Eigen::Index>(k));
            times.push_back(t);
            values.push_back(series.msd[k]);
        }
    }
    if (cols.size() < 5) throw DomainError("msd_exponent: fewer than 5 grid points in the window");

    ExponentEstimate estimate;
    estimate.points = cols.size();
    estimate.exponent = log_log_slope(times, values);

    const Eigen::Index rows = series.samples.rows();
    if (rows < 2 || resamples == 0) return estimate;

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Eigen::Index> pick(0, rows - 1);
    std::vector<double> slopes;
    slopes.reserve(resamples);
    std::vector<double> boot(cols.size());
    for (std::size_t b = 0; b < resamples; ++b) {
        std::fill(boot.begin(), boot.end(), 0.0);
        for (Eigen::Index r = 0; r < rows; ++r) {
            const Eigen::Index source = pick(rng);
            for (std::size_t c = 0; c < cols.size(); ++c) boot[c] += series.samples(source, cols[c]);
        }
        bool positive = true;
        for (double& v : boot) {
            v /= static_cast<double>(rows);
            positive = positive && v > 0.0;
        }
        if (positive) slopes.push_back(log_log_slope(times, boot));
    }
    if (slopes.size() >= 2) {
        std::sort(slopes.begin(), slopes.end());
        const auto quantile = [&](double q) {
            const double pos = q * static_cast<double>(slopes.size() - 1);
            const auto lo = static_cast<std::size_t>(std::floor(pos));
            const auto hi = std::min(lo + 1, slopes.size() - 1);
            return slopes[lo] + (pos - static_cast<double>(lo)) * (slopes[hi] - slopes[lo]);
        };
        estimate.half_width = 0.5 * (quantile(0.975) - quantile(0.025));
    }
    return estimate;
}

bool DecadeRatios::strictly_decreasing() const {
    if (msd_over_t.size() < 2) return false;
    for (std::size_t k = 1; k < msd_over_t.size(); ++k)
        if (!(msd_over_t[k] < msd_over_t[k - 1])) return false;
    return true;
}

DecadeRatios decade_ratios(const MsdSeries& series) {
    DecadeRatios out;
    double t_min = std::numeric_limits<double>::infinity();
    double t_max = 0.0;
    for (double t : series.times)
        if (t > 0.0) {
            t_min = std::min(t_min, t);
            t_max = std::max(t_max, t);
        }
    if (!(t_max > 0.0)) return out;
    // Tolerate grid times that land a rounding error away from 10^k.
    const double slack = 1e-9;
    for (int k = static_cast<int>(std::ceil(std::log10(t_min) - slack)); std::pow(10.0, k) <= t_max * (1 + slack); ++k) {
        const double target = std::pow(10.0, k);
        std::size_t best = 0;
        double best_distance = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < series.times.size(); ++i) {
            if (!(series.times[i] > 0.0)) continue;
            const double d = std::abs(std::log(series.times[i]) - std::log(target));
            if (d < best_distance) {
                best_distance = d;
                best = i;
            }
        }
        out.times.push_back(series.times[best]);
        out.msd_over_t.push_back(series.msd[best] / series.times[best]);
    }
    return out;
}

VarianceSeries number_variance(std::span<const Configuration> configs, std::span<const double> radii,
                               const Point& centre, std::optional<double> bulk_radius) {
    if (configs.size() < 2) throw DomainError("number_variance: need at least two configurations");
    for (std::size_t k = 0; k < radii.size(); ++k) {
        if (!(radii[k] > 0.0)) throw DomainError("number_variance: radii must be positive");
        if (k > 0 && !(radii[k] > radii[k - 1])) throw DomainError("number_variance: radii must be increasing");
    }
    VarianceSeries out;
    out.radii.assign(radii.begin(), radii.end());
    out.replicas = configs.size();
    const auto m = static_cast<double>(configs.size());
    for (double r : radii) {
        const double r2 = r * r;
        double sum = 0.0, sum_sq = 0.0;
        for (const Configuration& config : configs) {
            if (config.dim != centre.size()) throw DomainError("number_variance: centre dimension mismatch");
            double count = 0.0;
            for (Eigen::Index i = 0; i < config.points.rows(); ++i)
                if ((config.points.row(i) - centre.transpose()).squaredNorm() < r2) count += 1.0;
            sum += count;
            sum_sq += count * count;
        }
        const double mean = sum / m;
        out.count_mean.push_back(mean);
        out.count_variance.push_back(std::max(0.0, (sum_sq - m * mean * mean) / (m - 1.0)));
        out.beyond_bulk.push_back(bulk_radius.has_value() && r > *bulk_radius);
    }
    return out;
}

double median(std::vector<double> values) {
    if (values.empty()) throw DomainError("median: empty sample");
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    const double upper = values[mid];
    if (values.size() % 2 == 1) return upper;
    return 0.5 * (*std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid)) + upper);
}

double ks_statistic(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw DomainError("ks_statistic: empty sample");
    std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const auto nx = static_cast<double>(x.size());
    const auto ny = static_cast<double>(y.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == v) ++i;
        while (j < y.size() && y[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
    }
    return d;
}

Configuration equilibrium_start(const PotentialSpec& spec, const MsdHarness& harness, std::uint64_t seed) {
    if (spec == ginibre_spec()) return sample_ginibre(harness.n, seed);
    const LogGasDensity density{spec, harness.n};
    const std::size_t burn_in = harness.burn_in.value_or(default_burn_in(harness.n));
    const double scale = harness.proposal_scale.value_or(default_proposal_scale(1.0 / std::numbers::pi));
    return sample_loggas_mcmc(density, harness.mcmc_sweeps, burn_in, scale, seed);
}

namespace {

MsdRun summarise(std::string name, const PotentialSpec& spec, const TruncationScheme& scheme,
                 const std::vector<Trajectory>& trajectories, std::span<const std::size_t> tags,
                 const MsdHarness& harness) {
    MsdRun run;
    run.name = std::move(name);
    run.spec = spec;
    run.scheme = scheme;
    run.series = msd(trajectories, tags);
    run.exponent = msd_exponent(run.series, harness.window_lo, harness.window_hi, harness.bootstrap,
                                derive_seed(harness.seed, 0xB007));
    run.ratios = decade_ratios(run.series);
    for (const Trajectory& t : trajectories) {
        run.stats.steps += t.stats.steps;
        run.stats.particle_steps += t.stats.particle_steps;
        run.stats.tamed += t.stats.tamed;
        run.stats.rejected += t.stats.rejected;
    }
    return run;
}

}  // namespace

PotentialSpec matched_control_spec(const PotentialSpec& model, std::size_t n, double gamma) {
    if (n == 0) throw DomainError("matched_control_spec: n must be positive");
    return {gamma, model.dim, model.beta, FreePotential::harmonic(2.0 / (model.beta * static_cast<double>(n)))};
}

MsdRun run_msd_experiment(const std::string& name, const PotentialSpec& spec, const MsdHarness& harness,
                          const TruncationScheme& scheme) {
    std::vector<Trajectory> trajectories(harness.replicas);
    parallel_for(harness.replicas, harness.threads, [&](std::size_t r) {
        const std::uint64_t replica_seed = derive_seed(harness.seed, r);
        const Configuration start = equilibrium_start(spec, harness, derive_seed(replica_seed, 0));
        IntegratorConfig icfg = harness.integrator;
        icfg.seed = derive_seed(replica_seed, 1);
        trajectories[r] = simulate(start, spec, scheme, icfg);
    });
    const std::size_t tag[] = {0};
    return summarise(name, spec, scheme, trajectories, tag, harness);
}

MsdRun run_free_control(const MsdHarness& harness) {
    const PotentialSpec spec{2.0, 2, 2.0, FreePotential::none()};
    const TruncationScheme scheme = TruncationScheme::origin(std::numeric_limits<double>::infinity());
    std::vector<Trajectory> trajectories(harness.free_replicas);
    parallel_for(harness.free_replicas, harness.threads, [&](std::size_t r) {
        const Configuration start = Configuration::from_points(Points::Zero(1, 2));
        IntegratorConfig icfg = harness.integrator;
        icfg.seed = derive_seed(harness.seed, 0xF4EE, r);
        trajectories[r] = simulate(start, spec, scheme, icfg);
    });
    const std::size_t tag[] = {0};
    return summarise("free", spec, scheme, trajectories, tag, harness);
}

DiffusionReport self_diffusion_compare(const PotentialSpec& model, const PotentialSpec& control,
                                       const MsdHarness& harness) {
    DiffusionReport report;
    report.runs.push_back(run_msd_experiment("model", model, harness));
    report.runs.push_back(run_msd_experiment("control", control, harness));
    report.runs.push_back(run_free_control(harness));
    report.exponent_gap = report.runs[1].exponent.exponent - report.runs[0].exponent.exponent;
    return report;
}

}  // namespace riesz
