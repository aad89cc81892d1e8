#include "riesz/configuration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

namespace riesz {

std::vector<std::size_t> modulus_order(const Points& points) {
    std::vector<std::size_t> order(static_cast<std::size_t>(points.rows()));
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto key = [&](std::size_t i) {
        const auto row = points.row(static_cast<Eigen::Index>(i));
        const double y = points.cols() > 1 ? row(1) : 0.0;
        return std::make_tuple(row.squaredNorm(), row(0), y);
    };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
    return order;
}

Configuration relabel(Configuration config) {
    config.label_order = modulus_order(config.points);
    return config;
}

double min_pair_distance(const Points& points) {
    double best = std::numeric_limits<double>::infinity();
    const Eigen::Index n = points.rows();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            best = std::min(best, (points.row(i) - points.row(j)).squaredNorm());
    return std::sqrt(best);
}

Configuration Configuration::from_points(Points points, SamplerInfo info) {
    Configuration config;
    config.dim = static_cast<int>(points.cols());
    config.points = std::move(points);
    config.info = std::move(info);
    config.label_order = modulus_order(config.points);
    config.validate();
    return config;
}

void Configuration::validate() const {
    if (dim != 1 && dim != 2) throw DomainError("configuration dimension must be 1 or 2");
    if (points.rows() > 0 && points.cols() != dim) throw DomainError("point matrix width does not match dimension");
    if (!points.allFinite()) throw DomainError("configuration contains non-finite coordinates");
    if (label_order.size() != size()) throw DomainError("label_order has the wrong length");
    std::vector<bool> seen(size(), false);
    for (std::size_t index : label_order) {
        if (index >= size() || seen[index]) throw DomainError("label_order is not a permutation");
        seen[index] = true;
    }
    if (!(min_pair_distance(points) > 0.0)) throw DomainError("configuration has coincident points");
}

}  // namespace riesz
