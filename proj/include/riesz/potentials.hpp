#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include "riesz/error.hpp"

namespace riesz {

/// Point in R^d with d <= 2; fixed capacity so it never touches the heap.
template <typename Scalar>
using PointT = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, Eigen::ColMajor, 2, 1>;
using Point = PointT<double>;

enum class Regime { StrictCoulomb, Coulomb, RuelleRegime, SubRiesz };

std::string_view to_string(Regime regime) noexcept;

/// Single-particle confinement. Harmonic(c) is c|x|^2/2.
struct FreePotential {
    enum class Kind { None, Harmonic };

    Kind kind = Kind::None;
    double coefficient = 0.0;

    static FreePotential none() noexcept { return {}; }
    static FreePotential harmonic(double c);

    template <typename Derived>
    typename Derived::Scalar value(const Eigen::MatrixBase<Derived>& x) const {
        using Scalar = typename Derived::Scalar;
        if (kind == Kind::None) return Scalar(0);
        return Scalar(coefficient) * x.squaredNorm() / Scalar(2);
    }

    template <typename Derived>
    PointT<typename Derived::Scalar> gradient(const Eigen::MatrixBase<Derived>& x) const {
        using Scalar = typename Derived::Scalar;
        if (kind == Kind::None) return PointT<Scalar>::Zero(x.size());
        return Scalar(coefficient) * x;
    }

    friend bool operator==(const FreePotential&, const FreePotential&) = default;
};

struct PotentialSpec {
    double gamma = 2.0;
    int dim = 2;
    double beta = 2.0;
    FreePotential free{};

    /// Throws DomainError unless gamma > 0, beta > 0 and dim in {1, 2}.
    void validate() const;

    friend bool operator==(const PotentialSpec&, const PotentialSpec&) = default;
};

/// The Ginibre model: (beta, gamma, d) = (2, 2, 2) confined by Harmonic(1).
PotentialSpec ginibre_spec();

/// Dyson's log-gas on the line: (beta, gamma, d) = (beta, 2, 1) confined by Harmonic(1).
PotentialSpec dyson_spec(double beta = 2.0);

/// Regime of the Riesz exponent relative to the dimension. StrictCoulomb wins over Coulomb.
Regime classify(const PotentialSpec& spec) noexcept;

/// Area of the unit sphere in R^gamma, 2 pi^(gamma/2) / Gamma(gamma/2).
template <typename Scalar>
Scalar surface_volume(Scalar gamma) {
    if (!(gamma > Scalar(0))) throw DomainError("surface_volume: gamma must be positive");
    using std::pow;
    using std::tgamma;
    return Scalar(2) * pow(std::numbers::pi_v<Scalar>, gamma / Scalar(2)) / tgamma(gamma / Scalar(2));
}

/// |x|^(-gamma) evaluated from |x|^2. Common exponents avoid pow().
template <typename Scalar>
inline Scalar inverse_power(Scalar gamma, Scalar r2) noexcept {
    using std::pow;
    using std::sqrt;
    if (gamma == Scalar(2)) return Scalar(1) / r2;
    if (gamma == Scalar(1)) return Scalar(1) / sqrt(r2);
    if (gamma == Scalar(3)) return Scalar(1) / (r2 * sqrt(r2));
    if (gamma == Scalar(4)) return Scalar(1) / (r2 * r2);
    if (gamma == Scalar(5)) return Scalar(1) / (r2 * r2 * sqrt(r2));
    return pow(r2, -gamma / Scalar(2));
}

namespace detail {
template <typename Derived>
typename Derived::Scalar checked_norm(const Eigen::MatrixBase<Derived>& x, const char* where) {
    const auto r = x.norm();
    if (!(r > 0)) throw SingularityError(std::string(where) + ": evaluated at the origin");
    return r;
}
}  // namespace detail

/// Fundamental solution of -Laplacian/2 on R^gamma, as a function of |x|.
template <typename Derived>
typename Derived::Scalar fundamental_solution(typename Derived::Scalar gamma, const Eigen::MatrixBase<Derived>& x) {
    using Scalar = typename Derived::Scalar;
    using std::log;
    using std::pow;
    const Scalar r = detail::checked_norm(x, "fundamental_solution");
    const Scalar scale = Scalar(2) / surface_volume(gamma);
    if (gamma == Scalar(2)) return -scale * log(r);
    return scale * pow(r, Scalar(2) - gamma) / (gamma - Scalar(2));
}

/// Riesz pair potential normalised so that its gradient is -x/|x|^gamma.
template <typename Derived>
typename Derived::Scalar psi(typename Derived::Scalar gamma, const Eigen::MatrixBase<Derived>& x) {
    using Scalar = typename Derived::Scalar;
    using std::log;
    using std::pow;
    const Scalar r = detail::checked_norm(x, "psi");
    if (gamma == Scalar(2)) return -log(r);
    return pow(r, Scalar(2) - gamma) / (gamma - Scalar(2));
}

template <typename Derived>
PointT<typename Derived::Scalar> grad_psi(typename Derived::Scalar gamma, const Eigen::MatrixBase<Derived>& x) {
    detail::checked_norm(x, "grad_psi");
    return -x * inverse_power(gamma, x.squaredNorm());
}

}  // namespace riesz
