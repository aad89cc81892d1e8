#include "riesz/pointfields.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace riesz {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Psi_gamma as a function of |x|^2; +inf at coincidence instead of throwing.
double pair_energy(double gamma, double r2) {
    if (!(r2 > 0.0)) return kInf;
    if (gamma == 2.0) return -0.5 * std::log(r2);
    return inverse_power(gamma - 2.0, r2) / (gamma - 2.0);
}

}  // namespace

double LogGasDensity::energy(const Points& points) const {
    const Eigen::Index n_rows = points.rows();
    double confinement = 0.0;
    double interaction = 0.0;
    for (Eigen::Index i = 0; i < n_rows; ++i) {
        confinement += spec.free.value(points.row(i).transpose());
        for (Eigen::Index j = i + 1; j < n_rows; ++j)
            interaction += pair_energy(spec.gamma, (points.row(i) - points.row(j)).squaredNorm());
    }
    return spec.beta * (confinement + interaction);
}

double LogGasDensity::delta_energy(const Points& points, std::size_t i, const Point& proposal) const {
    const auto row = static_cast<Eigen::Index>(i);
    const Point current = points.row(row).transpose();
    double delta = spec.free.value(proposal) - spec.free.value(current);
    for (Eigen::Index j = 0; j < points.rows(); ++j) {
        if (j == row) continue;
        const Point other = points.row(j).transpose();
        const double after = pair_energy(spec.gamma, (proposal - other).squaredNorm());
        if (after == kInf) return kInf;
        delta += after - pair_energy(spec.gamma, (current - other).squaredNorm());
    }
    return spec.beta * delta;
}

double default_proposal_scale(double intensity) {
    if (!(intensity > 0.0)) throw DomainError("intensity must be positive");
    return 0.5 / std::sqrt(intensity);
}

std::size_t default_burn_in(std::size_t n) { return 100 * n; }

Points spread_start(std::size_t n, int dim, double radius) {
    Points points(static_cast<Eigen::Index>(n), dim);
    const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t k = 0; k < n; ++k) {
        const auto row = static_cast<Eigen::Index>(k);
        if (dim == 1) {
            points(row, 0) = n == 1 ? 0.0 : radius * (2.0 * static_cast<double>(k) / static_cast<double>(n - 1) - 1.0);
        } else {
            const double r = radius * std::sqrt((static_cast<double>(k) + 0.5) / static_cast<double>(n));
            const double theta = golden_angle * static_cast<double>(k);
            points(row, 0) = r * std::cos(theta);
            points(row, 1) = r * std::sin(theta);
        }
    }
    return points;
}

LogGasSampler::LogGasSampler(LogGasDensity density, double proposal_scale, std::uint64_t seed,
                             std::optional<Points> initial)
    : density_(std::move(density)), scale_(proposal_scale), rng_(seed) {
    density_.spec.validate();
    if (density_.n < 2) throw DomainError("log-gas sampling needs at least two particles");
    if (!(scale_ >= 0.0)) throw DomainError("proposal scale must be non-negative");
    const auto n = static_cast<double>(density_.n);
    const double radius = density_.spec.dim == 1 ? std::sqrt(2.0 * n) : std::sqrt(n);
    points_ = initial ? std::move(*initial) : spread_start(density_.n, density_.spec.dim, radius);
    if (points_.rows() != static_cast<Eigen::Index>(density_.n) || points_.cols() != density_.spec.dim)
        throw DomainError("initial configuration has the wrong shape");
    if (!std::isfinite(density_.energy(points_)))
        throw DomainError("log-gas initialization: energy is not finite");
}

void LogGasSampler::sweep() {
    const int dim = density_.spec.dim;
    Point proposal(dim);
    for (Eigen::Index i = 0; i < points_.rows(); ++i) {
        for (int c = 0; c < dim; ++c) proposal(c) = points_(i, c) + scale_ * normal_(rng_);
        const double delta = density_.delta_energy(points_, static_cast<std::size_t>(i), proposal);
        const double u = uniform_(rng_);
        ++proposals_;
        if (delta <= 0.0 || u < std::exp(-delta)) {
            points_.row(i) = proposal.transpose();
            ++accepted_;
        }
    }
    ++sweeps_;
}

Configuration sample_loggas_mcmc(const LogGasDensity& density, std::size_t sweeps, std::size_t burn_in,
                                 double proposal_scale, std::uint64_t seed) {
    if (sweeps < 1) throw DomainError("sample_loggas_mcmc: need at least one sweep");
    LogGasSampler sampler(density, proposal_scale, seed);
    sampler.run(burn_in + sweeps);
    SamplerInfo info{"loggas-mcmc",
                     seed,
                     {{"beta", density.spec.beta},
                      {"gamma", density.spec.gamma},
                      {"harmonic", density.spec.free.coefficient},
                      {"n", static_cast<double>(density.n)},
                      {"sweeps", static_cast<double>(sweeps)},
                      {"burn_in", static_cast<double>(burn_in)},
                      {"proposal_scale", proposal_scale}}};
    return Configuration::from_points(sampler.points(), std::move(info));
}

Window Window::box(Point lower, Point upper) {
    if (lower.size() != upper.size()) throw DomainError("box corners differ in dimension");
    return {Kind::Box, std::move(lower), std::move(upper), 0.0};
}

Window Window::disk(Point centre, double radius) {
    if (centre.size() != 2) throw DomainError("disk windows are two-dimensional");
    return {Kind::Disk, std::move(centre), Point(), radius};
}

double Window::volume() const {
    if (kind == Kind::Disk) return radius > 0.0 ? std::numbers::pi * radius * radius : 0.0;
    double v = 1.0;
    for (Eigen::Index c = 0; c < lower.size(); ++c) v *= std::max(0.0, upper(c) - lower(c));
    return v;
}

bool Window::contains(const Point& x) const {
    if (kind == Kind::Disk) return (x - lower).norm() < radius;
    return ((x.array() >= lower.array()) && (x.array() < upper.array())).all();
}

Configuration sample_poisson(double intensity, const Window& window, std::uint64_t seed) {
    if (!(intensity > 0.0)) throw DomainError("Poisson intensity must be positive");
    const int dim = window.dim();
    if (dim != 1 && dim != 2) throw DomainError("window dimension must be 1 or 2");
    const double volume = window.volume();
    if (!(volume > 0.0) || !std::isfinite(volume)) throw DomainError("degenerate Poisson window");

    std::mt19937_64 rng(seed);
    std::poisson_distribution<long> count_dist(intensity * volume);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const auto count = static_cast<Eigen::Index>(count_dist(rng));

    Points points(count, dim);
    for (Eigen::Index i = 0; i < count; ++i) {
        if (window.kind == Window::Kind::Disk) {
            const double r = window.radius * std::sqrt(uniform(rng));
            const double theta = 2.0 * std::numbers::pi * uniform(rng);
            points(i, 0) = window.lower(0) + r * std::cos(theta);
            points(i, 1) = window.lower(1) + r * std::sin(theta);
        } else {
            for (int c = 0; c < dim; ++c)
                points(i, c) = window.lower(c) + (window.upper(c) - window.lower(c)) * uniform(rng);
        }
    }
    SamplerInfo info{"poisson", seed, {{"intensity", intensity}, {"volume", volume}}};
    return Configuration::from_points(std::move(points), std::move(info));
}

Configuration sample_ginibre(std::size_t n, std::uint64_t seed) {
    if (n == 0) throw DomainError("sample_ginibre: n must be positive");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    const auto size = static_cast<Eigen::Index>(n);
    Eigen::MatrixXcd matrix(size, size);
    for (Eigen::Index j = 0; j < size; ++j)
        for (Eigen::Index i = 0; i < size; ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            matrix(i, j) = {re, im};
        }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(matrix, false);
    if (solver.info() != Eigen::Success) throw DomainError("sample_ginibre: eigenvalue iteration did not converge");

    Points points(size, 2);
    for (Eigen::Index i = 0; i < size; ++i) {
        points(i, 0) = solver.eigenvalues()(i).real();
        points(i, 1) = solver.eigenvalues()(i).imag();
    }
    SamplerInfo info{"ginibre", seed, {{"n", static_cast<double>(n)}}};
    return Configuration::from_points(std::move(points), std::move(info));
}

RadiiStats ginibre_radii_check(const Configuration& config) {
    if (config.dim != 2) throw DomainError("ginibre_radii_check: configuration must be planar");
    if (config.empty()) throw DomainError("ginibre_radii_check: empty configuration");
    RadiiStats stats;
    stats.squared_radii.reserve(config.size());
    for (Eigen::Index i = 0; i < config.points.rows(); ++i) stats.squared_radii.push_back(config.points.row(i).squaredNorm());
    std::sort(stats.squared_radii.begin(), stats.squared_radii.end());
    for (double r2 : stats.squared_radii) stats.sum_squared_radii += r2;
    return stats;
}

}  // namespace riesz
