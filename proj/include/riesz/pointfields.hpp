#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "riesz/configuration.hpp"
#include "riesz/potentials.hpp"

namespace riesz {

/// Unnormalised equilibrium weight exp(-energy) of an N-particle log-gas,
///
///   energy(s) = beta * [ sum_i Phi(s_i) + sum_{i<j} Psi_gamma(s_i - s_j) ].
///
/// With beta = 2, gamma = 2, d = 2 and Phi = Harmonic(1) this is the joint
/// eigenvalue density of an N x N complex Ginibre matrix; with d = 1 it is GUE.
struct LogGasDensity {
    PotentialSpec spec;
    std::size_t n = 0;

    /// Full O(N^2) energy. +inf if two points coincide.
    double energy(const Points& points) const;

    /// energy(points with row i moved to `proposal`) - energy(points), in O(N).
    double delta_energy(const Points& points, std::size_t i, const Point& proposal) const;
};

/// Mean spacing-derived proposal width, 0.5 / sqrt(intensity).
double default_proposal_scale(double intensity);

/// 100 sweeps per particle.
std::size_t default_burn_in(std::size_t n);

/// Deterministic, well-separated starting configuration: a sunflower spiral
/// in the disk of radius `radius` (d = 2) or an even grid on [-radius, radius] (d = 1).
Points spread_start(std::size_t n, int dim, double radius);

/// Single-particle Gaussian-proposal Metropolis chain on a LogGasDensity.
///
/// One sweep visits every particle once in storage order. Energy differences
/// are computed incrementally; a proposal that lands on another particle has
/// infinite energy and is always rejected.
class LogGasSampler {
public:
    LogGasSampler(LogGasDensity density, double proposal_scale, std::uint64_t seed,
                  std::optional<Points> initial = std::nullopt);

    void sweep();
    void run(std::size_t sweeps) {
        for (std::size_t s = 0; s < sweeps; ++s) sweep();
    }

    const Points& points() const noexcept { return points_; }
    const LogGasDensity& density() const noexcept { return density_; }
    std::size_t sweeps_done() const noexcept { return sweeps_; }
    double acceptance_rate() const noexcept {
        return proposals_ == 0 ? 0.0 : static_cast<double>(accepted_) / static_cast<double>(proposals_);
    }

private:
    LogGasDensity density_;
    double scale_;
    std::mt19937_64 rng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
    Points points_;
    std::size_t sweeps_ = 0;
    std::size_t proposals_ = 0;
    std::size_t accepted_ = 0;
};

/// Runs burn_in + sweeps Metropolis sweeps and returns the final state.
Configuration sample_loggas_mcmc(const LogGasDensity& density, std::size_t sweeps, std::size_t burn_in,
                                 double proposal_scale, std::uint64_t seed);

/// Observation window for Poisson sampling.
struct Window {
    enum class Kind { Box, Disk };

    Kind kind = Kind::Box;
    Point lower;   // box corner, or disk centre
    Point upper;   // opposite box corner (unused for disks)
    double radius = 0.0;

    static Window box(Point lower, Point upper);
    static Window disk(Point centre, double radius);

    int dim() const noexcept { return static_cast<int>(lower.size()); }
    double volume() const;
    bool contains(const Point& x) const;
};

/// Homogeneous Poisson process of the given intensity restricted to `window`.
Configuration sample_poisson(double intensity, const Window& window, std::uint64_t seed);

/// Eigenvalues of an n x n matrix with i.i.d. standard complex Gaussian
/// entries (E|a_ij|^2 = 1). Exact sample of the finite Ginibre log-gas.
Configuration sample_ginibre(std::size_t n, std::uint64_t seed);

struct RadiiStats {
    double sum_squared_radii = 0.0;
    std::vector<double> squared_radii;  // ascending
};

/// Sum of |z_i|^2 and the sorted squared moduli of a planar configuration.
RadiiStats ginibre_radii_check(const Configuration& config);

}  // namespace riesz
