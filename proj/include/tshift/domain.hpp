#pragma once

#include <optional>
#include <utility>

#include "tshift/strip.hpp"

#include "json.hpp"

namespace tshift {

// A cusp region anchored at zeta = e^{i*anchor_angle}: the planar convex hull
// of the inward-reflected cup curve zeta * tan(pi/4 - rho*s(t)/2) * e^{it},
// |t| <= delta, clipped to {|z - zeta| <= window_radius} and the closed disc.
// The region touches the unit circle exactly at the anchor; the gap between
// the region and the circle at angular offset u has latitude width rho*s(u),
// which underflows to zero below |u| ~ 0.15. Membership near the pinch is
// therefore evaluated analytically in latitude coordinates, not against the
// sampled polygon (the polygon is kept for rendering and coarse geometry).
struct CuspRegion {
    double anchor_angle = 0.0;
    CupSpec cup;
    double window_radius = 1.0;
    std::vector<Complex> hull;  // sampled planar polygon (counterclockwise)

    Complex anchor() const { return unit(anchor_angle); }

    double edge_radius() const { return strip_radius(-cup.max_height()); }

    /// Angular half-extent actually covered once the window clip is applied.
    double angular_limit() const {
        double u_win = window_radius >= 1.0 ? kPi : std::asin(window_radius);
        return std::min(cup.delta, u_win);
    }

    // Latitude interval [s_lo, s_hi] removed at angular offset u from the
    // anchor; empty if the region does not meet that ray.
    std::optional<std::pair<double, double>> latitude_interval(double u) const {
        double au = std::abs(u);
        if (au > angular_limit()) return std::nullopt;
        double c = std::cos(u);
        // chord of the hull: Re(z / zeta) >= edge_radius * cos(delta)
        double r_lo = edge_radius() * std::cos(cup.delta) / c;
        double r_hi_window = std::numeric_limits<double>::infinity();
        double disc = c * c - 1.0 + window_radius * window_radius;
        if (disc < 0.0) return std::nullopt;
        double droot = std::sqrt(disc);
        r_lo = std::max(r_lo, c - droot);
        r_hi_window = c + droot;
        if (!(r_lo > 0.0)) r_lo = std::min(1e-12, r_hi_window / 2);
        double s_lo = strip_latitude(r_lo);
        double s_hi;
        if (r_hi_window >= 1.0) {
            s_hi = -cup.rho * cusp_profile(au);  // exact even when subnormal
        } else {
            s_hi = std::min(-cup.rho * cusp_profile(au), strip_latitude(r_hi_window));
        }
        if (!(s_lo < s_hi)) return std::nullopt;
        return std::make_pair(s_lo, s_hi);
    }

    /// True if the finite point z lies in the (closed) removed region.
    bool contains(Complex z) const {
        double r = std::abs(z);
        if (r == 0.0 || r > 1.0) return false;
        double u = wrap_angle(std::arg(z) - anchor_angle);
        auto iv = latitude_interval(u);
        if (!iv) return false;
        double s = strip_latitude(r);
        return s >= iv->first && s <= iv->second;
    }

    // Conservative distance proxy to the region boundary: exact in the
    // latitude direction near the pinch, polygon distance elsewhere.
    double boundary_gap(Complex z) const {
        double r = std::abs(z);
        if (r == 0.0) return dist_polygon_boundary(z, hull);
        double u = wrap_angle(std::arg(z) - anchor_angle);
        double s = strip_latitude(std::min(r, 1.0));
        double gap = std::numeric_limits<double>::infinity();
        auto iv = latitude_interval(u);
        if (iv) {
            if (s > iv->second) gap = s - iv->second;           // in the sliver above
            else if (s < iv->first) gap = iv->first - s;         // below the chord
            else gap = std::min(iv->second - s, s - iv->first);  // inside
        }
        if (!hull.empty()) gap = std::min(gap, dist_polygon_boundary(z, hull));
        return gap;
    }
};

/// Builds the sampled polygon and assembles a validated CuspRegion.
inline CuspRegion make_cusp_region(double anchor_angle, const CupSpec& cup,
                                   double window_radius) {
    cup.validate();
    if (!(window_radius > 0.0))
        throw PreconditionError("CuspRegion: window_radius must be positive");
    CuspRegion reg;
    reg.anchor_angle = wrap_angle(anchor_angle);
    reg.cup = cup;
    reg.window_radius = window_radius;

    Complex zeta = reg.anchor();
    std::vector<Complex> pts;
    for (const Complex& w : sample_cup_curve(cup)) {
        // inward reflection: strip point t - i*y, then rotate to the anchor
        Complex p = zeta * std::polar(strip_radius(-w.imag()), w.real());
        if (std::abs(p - zeta) <= window_radius) pts.push_back(p);
    }
    // bottom boundary samples where the window arc cuts the chord side
    const int m = std::max(16, cup.samples / 8);
    double ulim = reg.angular_limit();
    for (int j = -m; j <= m; ++j) {
        double u = ulim * j / m;
        auto iv = reg.latitude_interval(u);
        if (iv) pts.push_back(std::polar(strip_radius(iv->first), reg.anchor_angle + u));
    }
    reg.hull = convex_hull(std::move(pts));
    if (reg.hull.size() < 3)
        throw NumericError("CuspRegion: degenerate hull (heights below representable floor)");
    return reg;
}

enum class BaseKind { unit_disc, crescent };

struct DomainSpec {
    BaseKind base = BaseKind::unit_disc;
    Complex crescent_center{0.5, 0.0};
    double crescent_radius = 0.5;
    std::vector<CuspRegion> cusps;
    int format_version = 1;

    static DomainSpec disc() { return DomainSpec{}; }

    static DomainSpec crescent(Complex center = Complex(0.5, 0.0), double radius = 0.5) {
        DomainSpec d;
        d.base = BaseKind::crescent;
        d.crescent_center = center;
        d.crescent_radius = radius;
        return d;
    }

    void validate() const {
        if (base == BaseKind::crescent) {
            if (!(crescent_radius > 0.0))
                throw PreconditionError("DomainSpec: crescent radius must be positive");
            if (std::abs(crescent_center) + crescent_radius > 1.0 + 1e-12)
                throw PreconditionError("DomainSpec: crescent hole must lie in the closed disc");
            if (std::abs(crescent_center) <= crescent_radius + 1e-15 &&
                std::abs(crescent_center) + crescent_radius >= 1.0 - 1e-12 &&
                std::abs(crescent_center) - crescent_radius <= 0.0)
                ;  // hole through 0 touching T: 0 lands on the hole boundary, still fine
        }
        for (std::size_t i = 0; i < cusps.size(); ++i) {
            for (std::size_t j = i + 1; j < cusps.size(); ++j) {
                if (std::abs(wrap_angle(cusps[i].anchor_angle - cusps[j].anchor_angle)) < 1e-12)
                    throw PreconditionError("DomainSpec: cusp anchors must be distinct");
            }
        }
        // 0 must stay in the domain
        if (base == BaseKind::crescent && std::abs(crescent_center) < crescent_radius - 1e-15)
            throw PreconditionError("DomainSpec: hole swallows 0");
    }

    bool in_base(Complex z) const {
        if (std::abs(z) >= 1.0) return false;
        if (base == BaseKind::crescent && std::abs(z - crescent_center) <= crescent_radius)
            return false;
        return true;
    }
};

/// Classifies z against Omega = base minus the closed cusp hulls.
inline Region domain_membership(const DomainSpec& dom, Complex z, double tol = 1e-9) {
    if (!(tol > 0.0)) throw PreconditionError("domain_membership: tol must be positive");
    double r = std::abs(z);
    if (r >= 1.0 + tol) return Region::outside;
    double gap = 1.0 - r;
    if (dom.base == BaseKind::crescent) {
        double dh = std::abs(z - dom.crescent_center) - dom.crescent_radius;
        if (dh < -tol) return Region::outside;
        gap = std::min(gap, dh);
    }
    for (const CuspRegion& c : dom.cusps) {
        if (c.contains(z)) {
            return c.boundary_gap(z) <= tol ? Region::boundary_band : Region::outside;
        }
        gap = std::min(gap, c.boundary_gap(z));
    }
    if (gap <= tol) return Region::boundary_band;
    return Region::inside;
}

inline bool has_cusp_at_angle(const DomainSpec& dom, double angle, double tol = 1e-12) {
    for (const CuspRegion& c : dom.cusps)
        if (std::abs(wrap_angle(c.anchor_angle - angle)) < tol) return true;
    return false;
}

/// alpha in Omega* = (C_inf \ Omega)^{-1}, i.e. inv(alpha) not interior to Omega.
inline bool star_membership(const DomainSpec& dom, const ExtendedComplex& alpha,
                            double tol = 1e-12) {
    ExtendedComplex w = inv(alpha);
    if (w.is_infinity) return true;  // Omega is bounded
    return domain_membership(dom, w.value, tol) != Region::inside;
}

// ---------------------------------------------------------------------------
// Serialization (versioned JSON document; numeric fields round-trip lossless)

inline nlohmann::ordered_json domain_to_json(const DomainSpec& dom) {
    nlohmann::ordered_json j;
    j["format_version"] = dom.format_version;
    if (dom.base == BaseKind::unit_disc) {
        j["base"] = {{"kind", "unit-disc"}};
    } else {
        j["base"] = {{"kind", "crescent"},
                     {"center", {dom.crescent_center.real(), dom.crescent_center.imag()}},
                     {"radius", dom.crescent_radius}};
    }
    auto cusps = nlohmann::ordered_json::array();
    for (const CuspRegion& c : dom.cusps) {
        cusps.push_back({{"anchor_angle", c.anchor_angle},
                         {"delta", c.cup.delta},
                         {"rho", c.cup.rho},
                         {"window_radius", c.window_radius},
                         {"samples", c.cup.samples}});
    }
    j["cusps"] = std::move(cusps);
    return j;
}

inline std::string serialize_domain(const DomainSpec& dom) {
    return domain_to_json(dom).dump(2) + "\n";
}

inline DomainSpec parse_domain(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    DomainSpec dom;
    dom.format_version = j.at("format_version").get<int>();
    if (dom.format_version != 1)
        throw PreconditionError("DomainSpec: unsupported format_version");
    const auto& base = j.at("base");
    std::string kind = base.at("kind").get<std::string>();
    if (kind == "unit-disc") {
        dom.base = BaseKind::unit_disc;
    } else if (kind == "crescent") {
        dom.base = BaseKind::crescent;
        dom.crescent_center = Complex(base.at("center").at(0).get<double>(),
                                      base.at("center").at(1).get<double>());
        dom.crescent_radius = base.at("radius").get<double>();
    } else {
        throw PreconditionError("DomainSpec: unknown base kind '" + kind + "'");
    }
    for (const auto& c : j.at("cusps")) {
        CupSpec cup;
        cup.delta = c.at("delta").get<double>();
        cup.rho = c.at("rho").get<double>();
        cup.samples = c.at("samples").get<int>();
        dom.cusps.push_back(
            make_cusp_region(c.at("anchor_angle").get<double>(), cup,
                             c.at("window_radius").get<double>()));
    }
    dom.validate();
    return dom;
}

/// Digest binding certificates to the domain they were produced for.
inline std::uint64_t domain_digest(const DomainSpec& dom) {
    std::string s = serialize_domain(dom);
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace tshift
