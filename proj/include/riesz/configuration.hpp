#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "riesz/potentials.hpp"

namespace riesz {

/// N x d particle positions, one particle per row.
using Points = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Where a configuration came from. Serialized alongside the points.
struct SamplerInfo {
    std::string sampler;
    std::uint64_t seed = 0;
    std::map<std::string, double> params;

    friend bool operator==(const SamplerInfo&, const SamplerInfo&) = default;
};

/// Finite labelled point set in R^d.
///
/// Points are stored in a fixed order (the storage index); labels are a
/// separate permutation so that relabelling never moves data. Label i refers
/// to the point at row label_order[i].
struct Configuration {
    int dim = 2;
    Points points;
    std::vector<std::size_t> label_order;
    SamplerInfo info;

    std::size_t size() const noexcept { return static_cast<std::size_t>(points.rows()); }
    bool empty() const noexcept { return points.rows() == 0; }

    Point point(std::size_t index) const { return points.row(static_cast<Eigen::Index>(index)).transpose(); }
    Point labelled(std::size_t label) const { return point(label_order.at(label)); }

    /// Builds a configuration with the default (modulus) labelling. Validates distinctness.
    static Configuration from_points(Points points, SamplerInfo info = {});

    /// Throws DomainError if points coincide, the dimension is wrong or
    /// label_order is not a permutation.
    void validate() const;

    friend bool operator==(const Configuration&, const Configuration&) = default;
};

/// Default labelling: increasing distance from the origin, ties broken by
/// lexicographic order of the coordinates.
Configuration relabel(Configuration config);

/// Label order of `points` under the default labelling.
std::vector<std::size_t> modulus_order(const Points& points);

/// Smallest pairwise distance, +inf for fewer than two points.
double min_pair_distance(const Points& points);

}  // namespace riesz
