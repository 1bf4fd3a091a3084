#pragma once

#include "tshift/domain.hpp"

namespace tshift {

// Built-in domains used across the tools and tests. The cusped variants pin
// the parameters once so every consumer sees the same geometry.

inline DomainSpec preset_disc() { return DomainSpec::disc(); }

inline DomainSpec preset_crescent() { return DomainSpec::crescent(); }

/// Crescent with a cusp anchored at 1; the canonical domain for the growth
/// and density studies (all gamma_{1,k} lie in A^2 here).
inline DomainSpec preset_crescent_cusped() {
    DomainSpec d = DomainSpec::crescent();
    CupSpec cup;
    cup.delta = 1.0;
    cup.rho = 1.0;
    cup.samples = 768;
    d.cusps.push_back(make_cusp_region(0.0, cup, 1.1));
    d.validate();
    return d;
}

/// Unit disc with a single wide cusp at 1; the W-bound study domain.
inline DomainSpec preset_disc_cusped() {
    DomainSpec d = DomainSpec::disc();
    CupSpec cup;
    cup.delta = 1.3;
    cup.rho = 1.0;
    cup.samples = 768;
    d.cusps.push_back(make_cusp_region(0.0, cup, 2.0));
    d.validate();
    return d;
}

inline std::optional<DomainSpec> preset_domain(const std::string& name) {
    if (name == "disc") return preset_disc();
    if (name == "crescent") return preset_crescent();
    if (name == "crescent-cusped") return preset_crescent_cusped();
    if (name == "disc-cusped") return preset_disc_cusped();
    return std::nullopt;
}

}  // namespace tshift
