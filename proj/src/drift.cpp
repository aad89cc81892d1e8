#include "riesz/drift.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

namespace riesz {

void TruncationScheme::validate() const {
    if (!(radius > 0.0)) throw DomainError("truncation radius must be positive");
}

ShellOrder shell_order(const Points& points, const Point& centre) {
    const auto n = static_cast<std::size_t>(points.rows());
    const bool planar = points.cols() > 1;
    ShellOrder order;
    order.index.resize(n);
    order.distance2.resize(n);
    std::vector<double> d2(n);
    for (std::size_t j = 0; j < n; ++j) {
        const auto row = static_cast<Eigen::Index>(j);
        const double dx = points(row, 0) - centre(0);
        const double dy = planar ? points(row, 1) - centre(1) : 0.0;
        d2[j] = dx * dx + dy * dy;
    }
    std::iota(order.index.begin(), order.index.end(), std::size_t{0});
    const auto key = [&](std::size_t j) {
        const auto row = static_cast<Eigen::Index>(j);
        return std::make_tuple(d2[j], points(row, 0), planar ? points(row, 1) : 0.0);
    };
    std::sort(order.index.begin(), order.index.end(), [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
    for (std::size_t k = 0; k < n; ++k) order.distance2[k] = d2[order.index[k]];
    return order;
}

namespace {

// Shared accumulation loop; `before_term(distance2, s0, s1)` sees the running
// sum before each term inside the cutoff.
template <typename OnTerm>
PairSum walk_pairs(const Point& x, const Points& points, const ShellOrder& order, std::optional<std::size_t> exclude,
                   double gamma, double cutoff, OnTerm&& before_term) {
    const bool planar = points.cols() > 1;
    const double cutoff2 = cutoff * cutoff;
    const double x0 = x(0);
    const double x1 = planar ? x(1) : 0.0;
    double s0 = 0.0;
    double s1 = 0.0;
    std::size_t terms = 0;
    for (std::size_t k = 0; k < order.index.size(); ++k) {
        if (!(order.distance2[k] < cutoff2)) break;
        before_term(order.distance2[k], s0, s1);
        const std::size_t j = order.index[k];
        if (exclude && *exclude == j) continue;
        const auto row = static_cast<Eigen::Index>(j);
        const double dx = x0 - points(row, 0);
        const double dy = planar ? x1 - points(row, 1) : 0.0;
        const double r2 = dx * dx + dy * dy;
        if (!(r2 > 0.0)) throw SingularityError("drift evaluated on top of an included particle");
        const double w = inverse_power(gamma, r2);
        s0 += dx * w;
        s1 += dy * w;
        ++terms;
    }
    PairSum result;
    result.sum = Point(x.size());
    result.sum(0) = s0;
    if (result.sum.size() > 1) result.sum(1) = s1;
    result.terms = terms;
    return result;
}

}  // namespace

Point drift_from_pair_sum(const PotentialSpec& spec, const Point& x, const Point& sum) {
    return (0.5 * spec.beta) * (sum - spec.free.gradient(x));
}

PairSum pair_sum(const Point& x, const Points& points, const ShellOrder& order, std::optional<std::size_t> exclude,
                 double gamma, double cutoff) {
    return walk_pairs(x, points, order, exclude, gamma, cutoff, [](double, double, double) {});
}

DriftResult drift_at(const Point& x, const Configuration& config, std::optional<std::size_t> exclude_label,
                     const PotentialSpec& spec, const TruncationScheme& scheme,
                     std::span<const double> radius_schedule) {
    spec.validate();
    scheme.validate();
    if (x.size() != config.dim || config.dim != spec.dim) throw DomainError("drift_at: dimension mismatch");
    if (radius_schedule.empty()) throw DomainError("drift_at: empty radius schedule");
    for (std::size_t k = 0; k < radius_schedule.size(); ++k) {
        if (!(radius_schedule[k] > 0.0)) throw DomainError("drift_at: schedule radii must be positive");
        if (k > 0 && !(radius_schedule[k] > radius_schedule[k - 1]))
            throw DomainError("drift_at: schedule radii must be strictly increasing");
    }

    std::vector<double> radii;
    for (double r : radius_schedule)
        if (r < scheme.radius) radii.push_back(r);
    radii.push_back(scheme.radius);

    std::optional<std::size_t> exclude;
    if (exclude_label) exclude = config.label_order.at(*exclude_label);

    const Point centre = scheme.centre == TruncationScheme::Centre::Particle ? x : Point(Point::Zero(x.size()));
    const ShellOrder order = shell_order(config.points, centre);

    DriftResult result;
    std::size_t next = 0;
    const auto record = [&](double s0, double s1) {
        Point sum(x.size());
        sum(0) = s0;
        if (x.size() > 1) sum(1) = s1;
        result.shells.push_back({radii[next], drift_from_pair_sum(spec, x, sum)});
        ++next;
    };
    // Shells are closed on the left: a term at distance exactly rho belongs outside partial(rho).
    const PairSum total = walk_pairs(x, config.points, order, exclude, spec.gamma, scheme.radius,
                                     [&](double d2, double s0, double s1) {
                                         while (next + 1 < radii.size() && !(d2 < radii[next] * radii[next]))
                                             record(s0, s1);
                                     });
    while (next + 1 < radii.size()) record(total.sum(0), x.size() > 1 ? total.sum(1) : 0.0);
    result.value = drift_from_pair_sum(spec, x, total.sum);
    result.shells.push_back({radii.back(), result.value});
    result.terms_used = total.terms;
    return result;
}

Point log_derivative(const Point& x, const Configuration& config, std::optional<std::size_t> exclude_label,
                     const PotentialSpec& spec, const TruncationScheme& scheme) {
    const double schedule[] = {scheme.radius};
    return 2.0 * drift_at(x, config, exclude_label, spec, scheme, schedule).value;
}

double drift_identity_gap(const Configuration& config, std::size_t label, double r, double beta) {
    if (config.dim != 2) throw DomainError("drift_identity_gap: configuration must be planar");
    const Point xi = config.labelled(label);
    if (!(xi.norm() < r)) throw DomainError("drift_identity_gap: particle is not strictly inside the cutoff");
    const double schedule[] = {r};
    const PotentialSpec unconfined{2.0, 2, beta, FreePotential::none()};
    const PotentialSpec confined{2.0, 2, beta, FreePotential::harmonic(1.0)};
    const Point a = drift_at(xi, config, label, unconfined, TruncationScheme::particle(r), schedule).value;
    const Point b = drift_at(xi, config, label, confined, TruncationScheme::origin(r), schedule).value;
    return (a - b).norm();
}

}  // namespace riesz
