#pragma once

#include <optional>

#include "tshift/domain.hpp"

namespace tshift {

// Bridging is verified on the components of the complement C_inf \ Omega
// (exterior of the disc, crescent hole, connected groups of cusp hulls).
// Under z -> 1/z these correspond to the components of the star set picture;
// seeds are supplied as complement points, which membership can decide.

struct ComplementComponents {
    const DomainSpec* dom;
    std::vector<int> cusp_group;  // cusp index -> group id (>= 1)
    int hole_group = -1;          // crescent hole's group id, -1 if no hole
    int group_count = 1;          // group 0 is the exterior of the disc

    /// Component id containing z, or nullopt if z is in Omega.
    std::optional<int> locate(Complex z) const {
        if (std::abs(z) >= 1.0) return 0;
        if (dom->base == BaseKind::crescent &&
            std::abs(z - dom->crescent_center) <= dom->crescent_radius)
            return hole_group;
        for (std::size_t i = 0; i < dom->cusps.size(); ++i)
            if (dom->cusps[i].contains(z)) return cusp_group[i];
        return std::nullopt;
    }
};

namespace detail {

inline bool regions_overlap(const CuspRegion& a, const CuspRegion& b) {
    for (const Complex& v : a.hull)
        if (b.contains(v)) return true;
    for (const Complex& v : b.hull)
        if (a.contains(v)) return true;
    return false;
}

inline bool region_meets_hole(const CuspRegion& a, Complex c, double r) {
    for (const Complex& v : a.hull)
        if (std::abs(v - c) <= r) return true;
    return false;
}

}  // namespace detail

/// Groups overlapping removed pieces into complement components.
inline ComplementComponents complement_components(const DomainSpec& dom) {
    ComplementComponents cc;
    cc.dom = &dom;
    const int n = static_cast<int>(dom.cusps.size());
    std::vector<int> parent(n + 1);
    for (int i = 0; i <= n; ++i) parent[i] = i;  // slot n is the hole
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](int a, int b) { parent[find(a)] = find(b); };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (detail::regions_overlap(dom.cusps[i], dom.cusps[j])) unite(i, j);
    if (dom.base == BaseKind::crescent)
        for (int i = 0; i < n; ++i)
            if (detail::region_meets_hole(dom.cusps[i], dom.crescent_center,
                                          dom.crescent_radius))
                unite(i, n);
    std::vector<int> ids(n + 1, -1);
    int next = 1;
    cc.cusp_group.resize(n);
    for (int i = 0; i < n; ++i) {
        int r = find(i);
        if (ids[r] < 0) ids[r] = next++;
        cc.cusp_group[i] = ids[r];
    }
    if (dom.base == BaseKind::crescent) {
        int r = find(n);
        if (ids[r] < 0) ids[r] = next++;
        cc.hole_group = ids[r];
    }
    cc.group_count = next;
    return cc;
}

/// True if the union of cusp hulls (plus the hole, if any) is connected.
inline bool removed_set_connected(const DomainSpec& dom) {
    ComplementComponents cc = complement_components(dom);
    return cc.group_count <= 2;  // exterior plus at most one interior group
}

struct BridgeReport {
    Complex bridge_point;  // zeta on the unit circle
    Complex orientation;   // omega on the unit circle
    double delta = 0.0;
    bool verified = false;
    std::optional<StripPoint> counterexample;
};

/// A point well inside the removed region of cusp `idx` (seed helper).
inline Complex cusp_seed(const DomainSpec& dom, std::size_t idx) {
    const CuspRegion& c = dom.cusps.at(idx);
    Complex acc(0, 0);
    for (const Complex& v : c.hull) acc += v;
    return acc / static_cast<double>(c.hull.size());
}

// Samples the two cups w +- omega C_delta in the strip, maps them to the
// plane, and checks containment in the complement components holding the two
// seeds. verified = true is a certificate at grid resolution only.
inline BridgeReport verify_bridge(const DomainSpec& dom, double zeta_angle,
                                  Complex omega, double delta, int grid,
                                  Complex seed_a, Complex seed_b) {
    if (grid <= 0) throw PreconditionError("verify_bridge: grid must be positive");
    if (!(delta > 0.0) || !(delta < kHalfPi))
        throw PreconditionError("verify_bridge: delta must be in (0, pi/2)");
    if (std::abs(std::abs(omega) - 1.0) > 1e-12)
        throw PreconditionError("verify_bridge: omega must be unimodular");
    ComplementComponents cc = complement_components(dom);
    auto a = cc.locate(seed_a);
    auto b = cc.locate(seed_b);
    if (!a || !b)
        throw PreconditionError("verify_bridge: seed point lies in neither component");

    BridgeReport rep;
    rep.bridge_point = unit(zeta_angle);
    rep.orientation = omega;
    rep.delta = delta;
    const Complex w(zeta_angle, 0.0);

    double cap = cusp_profile(delta);
    for (int i = 0; i < grid && !rep.counterexample; ++i) {
        double frac = (2.0 * i + 1.0) / grid - 1.0;  // (-1, 1)
        double t = delta * frac * std::abs(frac) * std::abs(frac);
        double floor = cusp_profile(t);
        for (int j = 0; j < grid; ++j) {
            double y = floor + (cap - floor) * (j + 0.5) / grid;
            if (!(y > 0.0)) continue;
            Complex cup = Complex(t, y);
            for (int side = 0; side < 2; ++side) {
                Complex p = side == 0 ? w + omega * cup : w - omega * cup;
                StripPoint sp{p.real(), p.imag()};
                if (!sp.valid()) {
                    rep.counterexample = sp;
                    break;
                }
                auto comp = cc.locate(strip_to_plane_z(sp));
                if (comp != (side == 0 ? a : b)) {
                    rep.counterexample = sp;
                    break;
                }
            }
            if (rep.counterexample) break;
        }
    }
    rep.verified = !rep.counterexample.has_value();
    return rep;
}

/// Bridge check at a cusp anchor against (exterior, that cusp's component),
/// with the default radial orientation.
inline BridgeReport verify_bridge_at_anchor(const DomainSpec& dom, std::size_t cusp_idx,
                                            double delta, int grid) {
    const CuspRegion& c = dom.cusps.at(cusp_idx);
    return verify_bridge(dom, c.anchor_angle, Complex(1.0, 0.0), delta, grid,
                         2.0 * c.anchor(), cusp_seed(dom, cusp_idx));
}

}  // namespace tshift
