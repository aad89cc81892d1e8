#include "riesz/potentials.hpp"

namespace riesz {

std::string_view to_string(Regime regime) noexcept {
    switch (regime) {
        case Regime::StrictCoulomb: return "strict-coulomb";
        case Regime::Coulomb: return "coulomb";
        case Regime::RuelleRegime: return "ruelle";
        case Regime::SubRiesz: return "sub-riesz";
    }
    return "unknown";
}

FreePotential FreePotential::harmonic(double c) {
    if (!(c >= 0.0)) throw DomainError("harmonic coefficient must be non-negative");
    return {Kind::Harmonic, c};
}

void PotentialSpec::validate() const {
    if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
    if (!(beta > 0.0)) throw DomainError("beta must be positive");
    if (dim != 1 && dim != 2) throw DomainError("dimension must be 1 or 2");
    if (free.kind == FreePotential::Kind::Harmonic && !(free.coefficient >= 0.0))
        throw DomainError("harmonic coefficient must be non-negative");
}

PotentialSpec ginibre_spec() { return {2.0, 2, 2.0, FreePotential::harmonic(1.0)}; }

PotentialSpec dyson_spec(double beta) { return {2.0, 1, beta, FreePotential::harmonic(1.0)}; }

Regime classify(const PotentialSpec& spec) noexcept {
    const double d = spec.dim;
    if (spec.gamma == d) return Regime::StrictCoulomb;
    if (spec.gamma < d) return Regime::SubRiesz;
    if (spec.gamma <= d + 2.0) return Regime::Coulomb;
    return Regime::RuelleRegime;
}

}  // namespace riesz
