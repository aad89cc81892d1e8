// Acceptance suite. Prints one PASS/FAIL line per check; exits non-zero on any FAIL.
// Usage: acceptance [criterion numbers...]   (default: all)

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "riesz/diagnostics.hpp"
#include "riesz/drift.hpp"
#include "riesz/dynamics.hpp"
#include "riesz/experiment.hpp"
#include "riesz/pointfields.hpp"
#include "riesz/potentials.hpp"
#include "riesz/random.hpp"

using namespace riesz;

namespace {

int failures = 0;

void report(int criterion, const std::string& name, bool pass, const std::string& detail) {
    std::printf("%s [%d] %s: %s\n", pass ? "PASS" : "FAIL", criterion, name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

const double kInf = std::numeric_limits<double>::infinity();

// ---- 1: potentials ----------------------------------------------------------

void potentials() {
    double worst = 0.0;
    int samples = 0;
    for (double gamma : {1.0, 1.5, 2.0, 3.0, 4.0}) {
        for (double r : {0.5, 1.0, 2.0}) {
            for (int k = 0; k < 8; ++k) {
                const double angle = 2.0 * std::numbers::pi * (k + 0.37) / 8.0;
                const Eigen::Vector2d x(r * std::cos(angle), r * std::sin(angle));
                const Point g = grad_psi(gamma, x);
                const double h = 1e-5 * r;
                Eigen::Vector2d fd;
                for (int c = 0; c < 2; ++c) {
                    Eigen::Vector2d e = Eigen::Vector2d::Zero();
                    e(c) = h;
                    fd(c) = (psi(gamma, Eigen::Vector2d(x + e)) - psi(gamma, Eigen::Vector2d(x - e))) / (2.0 * h);
                }
                worst = std::max(worst, (fd - g).norm() / g.norm());
            }
            samples += 8;
        }
    }
    report(1, "grad_psi matches central differences of psi", worst <= 1e-6 && samples == 120,
           fmt("max relative error %.2e over %d points (24 per exponent)", worst, samples));

    const double s1 = surface_volume(1.0), s2 = surface_volume(2.0);
    report(1, "unit sphere areas", std::abs(s1 - 2.0) <= 1e-12 && std::abs(s2 - 2.0 * std::numbers::pi) <= 1e-12,
           fmt("sigma_1 = %.17g, sigma_2 = %.17g", s1, s2));
}

// ---- 2: sampler validity ----------------------------------------------------

void sampler() {
    constexpr int samples = 100000;
    std::mt19937_64 rng(20240601);
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    std::vector<double> oracle_max, mcmc_max;
    double oracle_sum = 0.0;
    for (int s = 0; s < samples; ++s) {
        std::complex<double> a[4];
        for (auto& z : a) z = {normal(rng), normal(rng)};
        const auto tr = a[0] + a[3];
        const auto disc = std::sqrt(tr * tr - 4.0 * (a[0] * a[3] - a[1] * a[2]));
        const double r1 = std::norm((tr + disc) / 2.0), r2 = std::norm((tr - disc) / 2.0);
        oracle_sum += r1 + r2;
        oracle_max.push_back(std::max(r1, r2));
    }

    LogGasSampler chain({ginibre_spec(), 2}, 1.0, 77);
    chain.run(1000);
    double mcmc_sum = 0.0;
    for (int s = 0; s < samples; ++s) {
        chain.run(5);
        const Points& p = chain.points();
        mcmc_sum += p.squaredNorm();
        mcmc_max.push_back(std::max(p.row(0).squaredNorm(), p.row(1).squaredNorm()));
    }
    const double mcmc_mean = mcmc_sum / samples;
    const double oracle_mean = oracle_sum / samples;
    report(2, "N=2 Metropolis E sum|z|^2 within 5% of 3",
           std::abs(mcmc_mean - 3.0) <= 0.15 && std::abs(oracle_mean - 3.0) <= 0.15,
           fmt("Metropolis %.4f, matrix oracle %.4f, acceptance %.2f", mcmc_mean, oracle_mean, chain.acceptance_rate()));
    const double ks = ks_statistic(mcmc_max, oracle_max);
    report(2, "N=2 Metropolis max |z|^2 law matches the matrix oracle", ks < 0.02,
           fmt("KS %.4f over %d samples each (limit 0.02)", ks, samples));
}

// ---- 3: drift identity and shell decay ---------------------------------------

struct ShellIncrements {
    double inner;  // |partial(8) - partial(4)|
    double outer;  // |partial(16) - partial(8)|
};

ShellIncrements shell_increments(const Configuration& config) {
    const PotentialSpec unconfined{2.0, 2, 2.0, FreePotential::none()};
    const double schedule[] = {4.0, 8.0, 16.0};
    const DriftResult d = drift_at(config.labelled(0), config, 0, unconfined, TruncationScheme::particle(16.0), schedule);
    return {(d.shells[1].value - d.shells[0].value).norm(), (d.shells[2].value - d.shells[1].value).norm()};
}

void drift_identity() {
    constexpr std::size_t n = 512, seeds = 50, poisson_seeds = 200;
    const double root_n = std::sqrt(static_cast<double>(n));
    std::vector<double> gap_small, gap_large, inner, outer;
    for (std::size_t s = 0; s < seeds; ++s) {
        const Configuration config = sample_ginibre(n, derive_seed(3, s));
        gap_small.push_back(drift_identity_gap(config, 0, 0.2 * root_n));
        gap_large.push_back(drift_identity_gap(config, 0, 0.8 * root_n));
        const auto inc = shell_increments(config);
        inner.push_back(inc.inner);
        outer.push_back(inc.outer);
    }
    const double g2 = median(gap_small), g8 = median(gap_large);
    report(3, "Ginibre N=512 drift identity gap shrinks with the cutoff", g8 < g2,
           fmt("median gap %.4f at r=0.2 sqrt(N), %.4f at r=0.8 sqrt(N), %zu seeds", g2, g8, seeds));
    const double mi = median(inner), mo = median(outer);
    report(3, "Ginibre N=512 shell increments decay", mo < mi,
           fmt("median |p(8)-p(4)| %.4f, |p(16)-p(8)| %.4f, ratio %.3f", mi, mo, mo / mi));

    std::vector<double> p_inner, p_outer;
    const auto disk = Window::disk(Point::Zero(2), root_n);
    for (std::size_t s = 0; s < poisson_seeds; ++s) {
        const Configuration config = sample_poisson(1.0 / std::numbers::pi, disk, derive_seed(0xC3, s));
        const auto inc = shell_increments(config);
        p_inner.push_back(inc.inner);
        p_outer.push_back(inc.outer);
    }
    const double ratio = median(p_outer) / median(p_inner);
    report(3, "Poisson control shows no shell decay", ratio >= 0.8,
           fmt("median increment ratio %.3f over %zu seeds (limit >= 0.8)", ratio, poisson_seeds));
}

// ---- 4: sub-diffusivity ------------------------------------------------------

void subdiffusivity() {
    MsdHarness h;  // N=128, dt=1e-4, T=10, 32 replicas, window [1, 10]
    const PotentialSpec control = matched_control_spec(ginibre_spec(), h.n, 5.0);
    const DiffusionReport rep = self_diffusion_compare(ginibre_spec(), control, h);
    const MsdRun& model = rep.runs[0];
    const MsdRun& ruelle = rep.runs[1];
    const MsdRun& free = rep.runs[2];

    std::string ratios;
    for (std::size_t k = 0; k < model.ratios.times.size(); ++k)
        ratios += fmt("%s%g:%.4f", k ? ", " : "", model.ratios.times[k], model.ratios.msd_over_t[k]);
    report(4, "Ginibre tagged particle exponent below 0.85", model.exponent.exponent < 0.85,
           fmt("exponent %.4f +- %.4f on [%g, %g]", model.exponent.exponent, model.exponent.half_width, h.window_lo,
               h.window_hi));
    report(4, "Ginibre msd(t)/t decreases across decades",
           model.ratios.strictly_decreasing() && model.ratios.times.size() >= 3, "t:msd/t " + ratios);
    report(4, "free particle exponent 1 +- 0.05", std::abs(free.exponent.exponent - 1.0) <= 0.05,
           fmt("exponent %.4f +- %.4f over %zu single-particle runs", free.exponent.exponent, free.exponent.half_width,
               free.series.replicas));
    report(4, "Ruelle control exponent exceeds Ginibre by 0.15", rep.exponent_gap >= 0.15,
           fmt("control exponent %.4f +- %.4f, gap %.4f", ruelle.exponent.exponent, ruelle.exponent.half_width,
               rep.exponent_gap));
    report(4, "taming and rejection rare in the Ginibre run",
           model.stats.tamed_fraction() < 0.01 && model.stats.rejected_fraction() < 0.001,
           fmt("tamed %.2e, rejected %.2e", model.stats.tamed_fraction(), model.stats.rejected_fraction()));
}

// ---- 5: stationarity ---------------------------------------------------------

void stationarity_check(const std::string& name, const PotentialSpec& spec, std::size_t n, bool ginibre_start) {
    constexpr std::size_t replicas = 50;
    IntegratorConfig icfg;
    icfg.dt = 1e-4;
    icfg.steps = 10000;
    icfg.record_every = 1000;
    std::vector<Trajectory> runs;
    StepStats stats;
    for (std::size_t r = 0; r < replicas; ++r) {
        const std::uint64_t seed = derive_seed(5, n, r);
        const Configuration start =
            ginibre_start ? sample_ginibre(n, derive_seed(seed, 0))
                          : sample_loggas_mcmc({spec, n}, 1, default_burn_in(n), 0.2, derive_seed(seed, 0));
        icfg.seed = derive_seed(seed, 1);
        runs.push_back(simulate(start, spec, TruncationScheme::origin(kInf), icfg));
        stats.steps += runs.back().stats.steps;
        stats.particle_steps += runs.back().stats.particle_steps;
        stats.tamed += runs.back().stats.tamed;
        stats.rejected += runs.back().stats.rejected;
    }
    const std::size_t frames = runs.front().frames.size();
    std::vector<double> level(frames, 0.0);
    for (const auto& t : runs)
        for (std::size_t f = 0; f < frames; ++f) level[f] += t.frames[f].squaredNorm() / replicas;
    double worst = 0.0;
    for (double v : level) worst = std::max(worst, std::abs(v / level.front() - 1.0));
    report(5, name + " sum |x|^2 stays within 10% over T=1", worst <= 0.10,
           fmt("initial mean %.3f, final %.3f, worst relative drift %.4f", level.front(), level.back(), worst));

    // Spectral CDF: coordinates on the line, squared moduli in the plane.
    std::vector<double> first, last;
    for (const auto& t : runs)
        for (Eigen::Index i = 0; i < t.frames.front().rows(); ++i) {
            const auto value = [&](const Points& p) { return spec.dim == 1 ? p(i, 0) : p.row(i).squaredNorm(); };
            first.push_back(value(t.frames.front()));
            last.push_back(value(t.frames.back()));
        }
    const double ks = ks_statistic(first, last);
    report(5, name + " spectral CDF at t=1 matches t=0", ks < 0.05,
           fmt("KS %.4f pooling %zu replicas (limit 0.05)", ks, replicas));
    report(5, name + " taming and rejection rare", stats.tamed_fraction() < 0.01 && stats.rejected_fraction() < 0.001,
           fmt("tamed %.2e, rejected %.2e", stats.tamed_fraction(), stats.rejected_fraction()));
}

void stationarity() {
    stationarity_check("Dyson N=32", dyson_spec(2.0), 32, false);
    stationarity_check("Ginibre N=64", ginibre_spec(), 64, true);
}

// ---- 6: rigidity -------------------------------------------------------------

void rigidity() {
    constexpr std::size_t n = 1024, replicas = 60;
    const double radii[] = {2.0, 4.0, 8.0};
    const double bulk = 0.5 * std::sqrt(static_cast<double>(n));
    std::vector<Configuration> model, control;
    const auto disk = Window::disk(Point::Zero(2), std::sqrt(static_cast<double>(n)));
    for (std::size_t r = 0; r < replicas; ++r) {
        model.push_back(sample_ginibre(n, derive_seed(6, r)));
        control.push_back(sample_poisson(1.0 / std::numbers::pi, disk, derive_seed(0xC6, r)));
    }
    const VarianceSeries vm = number_variance(model, radii, Point::Zero(2), bulk);
    const VarianceSeries vp = number_variance(control, radii, Point::Zero(2), bulk);

    bool decreasing = true;
    std::string per_area;
    for (std::size_t k = 0; k < 3; ++k) {
        const double v = vm.count_variance[k] / (std::numbers::pi * radii[k] * radii[k]);
        if (k > 0) decreasing = decreasing && v < vm.count_variance[k - 1] / (std::numbers::pi * radii[k - 1] * radii[k - 1]);
        decreasing = decreasing && !vm.beyond_bulk[k];
        per_area += fmt("%sR=%g:%.4f", k ? ", " : "", radii[k], v);
    }
    report(6, "Ginibre N=1024 variance per area strictly decreasing", decreasing, per_area);

    // Independent check: squared moduli of Ginibre eigenvalues are independent Gamma(k), k = 1..N.
    const double sigma = std::sqrt(2.0 / static_cast<double>(replicas - 1));
    bool consistent = true;
    std::string exact;
    for (std::size_t k = 0; k < 3; ++k) {
        double var = 0.0;
        for (std::size_t j = 1; j <= n; ++j) {
            const double p = boost::math::gamma_p(static_cast<double>(j), radii[k] * radii[k]);
            var += p * (1.0 - p);
        }
        consistent = consistent && std::abs(vm.count_variance[k] / var - 1.0) <= 3.0 * sigma;
        exact += fmt("%sR=%g: %.3f vs exact %.3f", k ? ", " : "", radii[k], vm.count_variance[k], var);
    }
    report(6, "Ginibre number variance agrees with the independent-radii law", consistent, exact);

    bool dispersion = true;
    std::string idx;
    for (std::size_t k = 0; k < 3; ++k) {
        const double d = vp.count_variance[k] / vp.count_mean[k];
        dispersion = dispersion && std::abs(d - 1.0) <= 3.0 * sigma;
        idx += fmt("%sR=%g:%.3f", k ? ", " : "", radii[k], d);
    }
    report(6, "Poisson control index of dispersion within 3 sigma of 1", dispersion,
           idx + fmt(" (sigma %.3f, %zu replicas)", sigma, replicas));
}

// ---- 7: determinism and exchangeability --------------------------------------

std::vector<std::string> contents(const std::vector<std::string>& files) {
    std::vector<std::string> out;
    for (const auto& f : files) {
        std::ifstream in(f, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        out.push_back(s.str());
    }
    return out;
}

void determinism() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "riesz_acceptance";
    fs::remove_all(dir);
    bool identical = true;
    std::size_t compared = 0;
    for (auto e : {Experiment::Sample, Experiment::DriftCheck, Experiment::Simulate, Experiment::Msd,
                   Experiment::Rigidity, Experiment::Compare}) {
        ExperimentConfig c;
        c.experiment = e;
        c.out = (dir / "x_").string();
        c.model.n = 48;
        c.replicas = 4;
        c.integrator.steps = 100;
        c.integrator.record_every = 10;
        c.analysis.shell_radii = {1.0, 2.0, 3.0};
        c.analysis.window_lo = 0.002;
        c.analysis.window_hi = 0.01;
        c.analysis.bootstrap = 50;
        c.analysis.free_replicas = 16;
        const auto first = contents(run(c).files);
        c.threads = 2;
        const auto second = contents(run(c).files);
        identical = identical && first == second;
        compared += first.size();
    }
    fs::remove_all(dir);
    report(7, "repeated seeded runs are byte-identical", identical,
           fmt("%zu output files across all six experiments", compared));

    // Exchangeability: permute storage rows and noise streams together.
    const Configuration base = sample_ginibre(64, 7);
    std::vector<std::size_t> perm(base.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), std::mt19937_64(7));
    Points permuted(base.points.rows(), 2);
    std::vector<std::uint64_t> streams(base.size());
    for (std::size_t k = 0; k < perm.size(); ++k) {
        permuted.row(static_cast<Eigen::Index>(k)) = base.points.row(static_cast<Eigen::Index>(perm[k]));
        streams[k] = perm[k];
    }
    IntegratorConfig icfg;
    icfg.steps = 500;
    icfg.record_every = 50;
    icfg.seed = 11;
    bool exact = true;
    for (const auto scheme : {TruncationScheme::origin(kInf), TruncationScheme::particle(3.0)}) {
        const Trajectory a = simulate(base, ginibre_spec(), scheme, icfg);
        const Trajectory b = simulate(Configuration::from_points(permuted), ginibre_spec(), scheme, icfg, streams);
        for (std::size_t f = 0; f < a.frames.size(); ++f)
            for (std::size_t p = 0; p < perm.size(); ++p)
                exact = exact && b.frames[f].row(static_cast<Eigen::Index>(p)) ==
                                     a.frames[f].row(static_cast<Eigen::Index>(perm[p]));
        exact = exact && simulate(base, ginibre_spec(), scheme, icfg) == a;
    }
    report(7, "permuting labels and noise streams permutes trajectories exactly", exact,
           "N=64, 500 steps, origin and particle-centred truncation");
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
    const auto want = [&](int k) { return wanted.empty() || wanted.count(k) > 0; };

    const std::pair<int, void (*)()> criteria[] = {{1, potentials},   {2, sampler},      {3, drift_identity},
                                                   {4, subdiffusivity}, {5, stationarity}, {6, rigidity},
                                                   {7, determinism}};
    for (const auto& [k, fn] : criteria) {
        if (!want(k)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            fn();
        } catch (const std::exception& e) {
            report(k, "criterion raised an exception", false, e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("      [%d] finished in %.1f s\n", k, secs);
        std::fflush(stdout);
    }
    std::printf("%s: %d failing check(s)\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
