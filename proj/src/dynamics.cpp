#include "riesz/dynamics.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "riesz/random.hpp"

namespace riesz {

void IntegratorConfig::validate() const {
    if (!(dt > 0.0)) throw DomainError("integrator dt must be positive");
    if (!(taming_cap > 0.0)) throw DomainError("taming cap must be positive");
    if (!(min_separation >= 0.0)) throw DomainError("min_separation must be non-negative");
    if (record_every < 1) throw DomainError("record_every must be at least 1");
}

std::vector<std::string> IntegratorConfig::warnings() const {
    std::vector<std::string> out;
    if (dt * taming_cap > 0.1) {
        std::ostringstream msg;
        msg << "dt * taming_cap = " << dt * taming_cap << " exceeds the stability guard 0.1";
        out.push_back(msg.str());
    }
    if (record_every > 0 && steps % record_every != 0)
        out.push_back("record_every does not divide steps; the final partial interval is not recorded");
    return out;
}

Configuration Trajectory::frame(std::size_t k) const {
    Configuration config;
    config.dim = dim;
    config.points = frames.at(k);
    config.label_order = label_order;
    config.info = {"trajectory", integrator.seed, {{"time", times.at(k)}}};
    return config;
}

Points drifts(const Points& points, const PotentialSpec& spec, const TruncationScheme& scheme) {
    const Eigen::Index n = points.rows();
    const int dim = static_cast<int>(points.cols());
    Points out(n, dim);
    if (scheme.centre == TruncationScheme::Centre::Particle) {
        for (Eigen::Index p = 0; p < n; ++p) {
            const Point x = points.row(p).transpose();
            const ShellOrder order = shell_order(points, x);
            const PairSum sum = pair_sum(x, points, order, static_cast<std::size_t>(p), spec.gamma, scheme.radius);
            out.row(p) = drift_from_pair_sum(spec, x, sum.sum).transpose();
        }
        return out;
    }

    // same order and terms as pair_sum; pair weights are shared
    const ShellOrder order = shell_order(points, Point::Zero(dim));
    const double cutoff2 = scheme.radius * scheme.radius;
    Eigen::Index m = 0;
    while (m < n && order.distance2[static_cast<std::size_t>(m)] < cutoff2) ++m;
    std::vector<Eigen::Index> rank(static_cast<std::size_t>(n), -1);
    for (Eigen::Index k = 0; k < m; ++k) rank[order.index[static_cast<std::size_t>(k)]] = k;

    const bool planar = dim > 1;
    const auto coord = [&](Eigen::Index row, int c) { return planar || c == 0 ? points(row, c) : 0.0; };
    const auto weight = [&](Eigen::Index a, Eigen::Index b) {
        const double dx = coord(a, 0) - coord(b, 0);
        const double dy = coord(a, 1) - coord(b, 1);
        const double r2 = dx * dx + dy * dy;
        if (!(r2 > 0.0)) throw SingularityError("drift evaluated on top of an included particle");
        return inverse_power(spec.gamma, r2);
    };
    Eigen::MatrixXd w(m, m);
    for (Eigen::Index a = 0; a < m; ++a)
        for (Eigen::Index b = a + 1; b < m; ++b)
            w(a, b) = w(b, a) = weight(static_cast<Eigen::Index>(order.index[static_cast<std::size_t>(a)]),
                                       static_cast<Eigen::Index>(order.index[static_cast<std::size_t>(b)]));

    for (Eigen::Index p = 0; p < n; ++p) {
        const double x0 = coord(p, 0), x1 = coord(p, 1);
        const Eigen::Index rp = rank[static_cast<std::size_t>(p)];
        double s0 = 0.0, s1 = 0.0;
        for (Eigen::Index k = 0; k < m; ++k) {
            if (k == rp) continue;
            const auto j = static_cast<Eigen::Index>(order.index[static_cast<std::size_t>(k)]);
            const double dx = x0 - coord(j, 0);
            const double dy = x1 - coord(j, 1);
            const double wk = rp >= 0 ? w(rp, k) : weight(p, j);
            s0 += dx * wk;
            s1 += dy * wk;
        }
        Point sum(dim);
        sum(0) = s0;
        if (planar) sum(1) = s1;
        out.row(p) = drift_from_pair_sum(spec, points.row(p).transpose(), sum).transpose();
    }
    return out;
}

namespace {

std::size_t apply_step(const Points& points, const Points& drift, const Points& noise, double dt, double cap,
                       Points& out) {
    const double sqrt_dt = std::sqrt(dt);
    std::size_t tamed = 0;
    out.resize(points.rows(), points.cols());
    for (Eigen::Index p = 0; p < points.rows(); ++p) {
        const double norm = drift.row(p).norm();
        double factor = 1.0;
        if (norm > cap) {
            factor = cap / norm;
            ++tamed;
        }
        out.row(p) = points.row(p) + (factor * dt) * drift.row(p) + sqrt_dt * noise.row(p);
    }
    return tamed;
}

// First pair (in row order) closer than delta, or {n, n}.
std::pair<Eigen::Index, Eigen::Index> close_pair(const Points& points, double delta) {
    const Eigen::Index n = points.rows();
    const double delta2 = delta * delta;
    if (delta2 > 0.0)
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i + 1; j < n; ++j)
                if ((points.row(i) - points.row(j)).squaredNorm() < delta2) return {i, j};
    return {n, n};
}

}  // namespace

std::size_t advance(const Points& points, const Points& noise, const PotentialSpec& spec,
                    const TruncationScheme& scheme, double dt, double taming_cap, Points& out) {
    return apply_step(points, drifts(points, spec, scheme), noise, dt, taming_cap, out);
}

Points step_noise(std::size_t n, int dim, std::uint64_t seed, std::span<const std::uint64_t> stream_ids,
                  std::uint64_t step_index, std::uint64_t attempt) {
    if (!stream_ids.empty() && stream_ids.size() != n) throw DomainError("stream_ids must have one entry per particle");
    Points noise(static_cast<Eigen::Index>(n), dim);
    for (std::size_t p = 0; p < n; ++p) {
        const std::uint64_t stream = stream_ids.empty() ? p : stream_ids[p];
        const auto z = gaussian_pair(derive_seed(seed, stream, step_index, attempt));
        for (int c = 0; c < dim; ++c) noise(static_cast<Eigen::Index>(p), c) = z[static_cast<std::size_t>(c)];
    }
    return noise;
}

Configuration step(const Configuration& state, const PotentialSpec& spec, const TruncationScheme& scheme,
                   const IntegratorConfig& icfg, std::uint64_t step_index, std::span<const std::uint64_t> stream_ids,
                   StepStats* stats) {
    const Points drift = drifts(state.points, spec, scheme);
    Configuration next = state;
    for (std::size_t attempt = 0; attempt <= icfg.max_retries; ++attempt) {
        const Points noise = step_noise(state.size(), state.dim, icfg.seed, stream_ids, step_index, attempt);
        const std::size_t tamed = apply_step(state.points, drift, noise, icfg.dt, icfg.taming_cap, next.points);
        const auto [i, j] = close_pair(next.points, icfg.min_separation);
        if (i == next.points.rows()) {
            if (stats) {
                ++stats->steps;
                stats->particle_steps += state.size();
                stats->tamed += tamed;
            }
            return next;
        }
        if (stats) ++stats->rejected;
        if (attempt == icfg.max_retries) {
            std::size_t li = 0, lj = 0;
            for (std::size_t l = 0; l < state.label_order.size(); ++l) {
                if (state.label_order[l] == static_cast<std::size_t>(i)) li = l;
                if (state.label_order[l] == static_cast<std::size_t>(j)) lj = l;
            }
            if (li > lj) std::swap(li, lj);
            std::ostringstream msg;
            msg << "step " << step_index << ": particles with labels " << li << " and " << lj << " closer than "
                << icfg.min_separation << " after " << icfg.max_retries << " retries";
            throw StepFailure(msg.str(), step_index, li, lj);
        }
    }
    return next;  // unreachable
}

Trajectory simulate(const Configuration& initial, const PotentialSpec& spec, const TruncationScheme& scheme,
                    const IntegratorConfig& icfg, std::span<const std::uint64_t> stream_ids) {
    spec.validate();
    scheme.validate();
    icfg.validate();
    if (initial.dim != spec.dim) throw DomainError("simulate: configuration and potential dimensions differ");

    Trajectory traj;
    traj.dim = initial.dim;
    traj.label_order = initial.label_order;
    traj.spec = spec;
    traj.scheme = scheme;
    traj.integrator = icfg;
    traj.times.reserve(icfg.steps / icfg.record_every + 1);
    traj.frames.reserve(icfg.steps / icfg.record_every + 1);
    traj.times.push_back(0.0);
    traj.frames.push_back(initial.points);

    Configuration state = initial;
    for (std::size_t k = 1; k <= icfg.steps; ++k) {
        state = step(state, spec, scheme, icfg, k - 1, stream_ids, &traj.stats);
        if (k % icfg.record_every == 0) {
            traj.times.push_back(static_cast<double>(k) * icfg.dt);
            traj.frames.push_back(state.points);
        }
    }
    return traj;
}

}  // namespace riesz
