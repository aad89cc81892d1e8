#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "riesz/configuration.hpp"
#include "riesz/potentials.hpp"

namespace riesz {

/// Which ball the pair sum is truncated to.
///
/// Particle: { j : |x - s_j| < r }, the particle-centred form.
/// Origin:   { j : |s_j| < r }, meaningful together with a confining Phi.
struct TruncationScheme {
    enum class Centre { Particle, Origin };

    Centre centre = Centre::Particle;
    double radius = std::numeric_limits<double>::infinity();

    static TruncationScheme particle(double r) { return {Centre::Particle, r}; }
    static TruncationScheme origin(double r) { return {Centre::Origin, r}; }

    void validate() const;

    friend bool operator==(const TruncationScheme&, const TruncationScheme&) = default;
};

struct ShellPartial {
    double radius = 0.0;
    Point value;
};

struct DriftResult {
    Point value;
    std::vector<ShellPartial> shells;  // increasing radii; the last entry equals `value`
    std::size_t terms_used = 0;
};

/// Storage indices sorted by squared distance from `centre`, ties broken by
/// lexicographic coordinates. This is the only summation order used for
/// pair sums anywhere in the library.
struct ShellOrder {
    std::vector<std::size_t> index;
    std::vector<double> distance2;
};

ShellOrder shell_order(const Points& points, const Point& centre);

struct PairSum {
    Point sum;
    std::size_t terms = 0;
};

/// Running pair sum  S = sum_j (x - s_j) |x - s_j|^-gamma  over `order`,
/// skipping storage index `exclude` and stopping once distance2 >= cutoff^2.
/// Throws SingularityError if an included point coincides with x.
PairSum pair_sum(const Point& x, const Points& points, const ShellOrder& order, std::optional<std::size_t> exclude,
                 double gamma, double cutoff);

/// (beta/2) (sum - grad Phi(x)): the drift given a pair sum from pair_sum().
Point drift_from_pair_sum(const PotentialSpec& spec, const Point& x, const Point& sum);

/// b(x) = (beta/2) [ -grad Phi(x) - sum_{j included, j != exclude} grad Psi_gamma(x - s_j) ]
///
/// Terms are accumulated in increasing distance from the scheme centre; the
/// running value is recorded at each radius of `radius_schedule` below the
/// scheme radius, and finally at the scheme radius itself.
DriftResult drift_at(const Point& x, const Configuration& config, std::optional<std::size_t> exclude_label,
                     const PotentialSpec& spec, const TruncationScheme& scheme,
                     std::span<const double> radius_schedule);

/// Logarithmic derivative -beta { grad Phi(x) + sum grad Psi_gamma(x - s_j) }, i.e. twice the drift.
Point log_derivative(const Point& x, const Configuration& config, std::optional<std::size_t> exclude_label,
                     const PotentialSpec& spec, const TruncationScheme& scheme);

/// Planar Coulomb drift of particle `label` computed two ways:
///   A(r) = (beta/2) sum_{j != i, |x_i - x_j| < r} (x_i - x_j)/|x_i - x_j|^2
///   B(r) = (beta/2) [ -x_i + sum_{j != i, |x_j| < r} (x_i - x_j)/|x_i - x_j|^2 ]
/// Returns |A(r) - B(r)|. Requires |x_i| < r.
double drift_identity_gap(const Configuration& config, std::size_t label, double r, double beta = 2.0);

}  // namespace riesz
