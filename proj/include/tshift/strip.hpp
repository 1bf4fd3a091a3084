#pragma once

#include <algorithm>
#include <optional>

#include "tshift/common.hpp"
#include "tshift/extended.hpp"

namespace tshift {

// The strip S = R + i(-pi/2, pi/2) parametrizes the sphere minus its poles via
// phi(t+is) = (cos s cos t, cos s sin t, sin s). Composing with stereographic
// projection from the north pole, sigma(x) = (x1 + i x2)/(1 - x3), gives
//   sigma(phi(t+is)) = tan(pi/4 + s/2) * e^{it}.
// The strip's real axis maps onto the unit circle; s > 0 is outside the closed
// disc, s < 0 inside, s -> +pi/2 escapes to infinity.

struct StripPoint {
    double t = 0.0;  // longitude (radians)
    double s = 0.0;  // latitude, in (-pi/2, pi/2)

    bool valid() const { return std::isfinite(t) && s > -kHalfPi && s < kHalfPi; }
};

/// Radius of the plane image at latitude s.
inline double strip_radius(double s) { return std::tan(kPi / 4.0 + 0.5 * s); }

/// Latitude whose plane image has radius r > 0.
inline double strip_latitude(double r) { return 2.0 * std::atan(r) - kHalfPi; }

inline ExtendedComplex strip_to_plane(const StripPoint& w) {
    if (!w.valid()) throw PreconditionError("strip_to_plane: point outside the open strip");
    return ExtendedComplex::finite(std::polar(strip_radius(w.s), w.t));
}

inline Complex strip_to_plane_z(const StripPoint& w) { return strip_to_plane(w).value; }

/// Inverse of strip_to_plane for finite nonzero z.
inline StripPoint plane_to_strip(Complex z) {
    double r = std::abs(z);
    if (!(r > 0.0) || !std::isfinite(r))
        throw PreconditionError("plane_to_strip: z must be finite and nonzero");
    return StripPoint{std::arg(z), strip_latitude(r)};
}

// Cusp profile s(t) = exp(-exp(1/|t|)), s(0) = 0. IEEE overflow of the inner
// exp and underflow of the outer exp give the correct limits without special
// cases: the value is exactly 0 for |t| <~ 0.152 in double precision.
inline double cusp_profile(double t) {
    if (t == 0.0) return 0.0;
    return std::exp(-std::exp(1.0 / std::abs(t)));
}

/// log of cusp_profile, finite for a much wider range of t: -exp(1/|t|).
inline double cusp_profile_log(double t) {
    if (t == 0.0) return -std::numeric_limits<double>::infinity();
    return -std::exp(1.0 / std::abs(t));
}

/// Smallest |t| whose height rho*s(t) is above `floor` (e.g. DBL_MIN).
inline double cusp_underflow_threshold(double rho, double floor_log = -708.0) {
    // rho*s(t) > e^floor_log  <=>  exp(1/t) < log(rho) - floor_log
    double budget = std::log(rho) - floor_log;
    if (budget <= 1.0) return std::numeric_limits<double>::infinity();
    return 1.0 / std::log(budget);
}

struct CupSpec {
    double delta = 1.0;   // half-width in strip coordinates
    double rho = 1.0;     // flatness scale, 0 < rho <= 1
    int samples = 512;    // polyline resolution

    void validate() const {
        if (!(delta > 0.0)) throw PreconditionError("CupSpec: delta must be positive");
        if (!(rho > 0.0) || rho > 1.0) throw PreconditionError("CupSpec: rho must be in (0,1]");
        if (samples < 8) throw PreconditionError("CupSpec: samples must be at least 8");
        if (!(delta < kHalfPi)) throw PreconditionError("CupSpec: delta must be below pi/2");
    }

    double height(double t) const { return rho * cusp_profile(t); }
    double max_height() const { return rho * cusp_profile(delta); }
};

// Curve samples for {t + i*rho*s(t) : -delta <= t <= delta} as complex strip
// points. Spacing follows a cubic ramp so points concentrate near t = 0;
// samples whose height underflows to zero are snapped to the anchor (one copy).
inline std::vector<Complex> sample_cup_curve(const CupSpec& cup) {
    cup.validate();
    std::vector<Complex> pts;
    pts.reserve(static_cast<std::size_t>(cup.samples) + 1);
    const int m = cup.samples / 2;
    bool anchor_done = false;
    for (int j = -m; j <= m; ++j) {
        double frac = static_cast<double>(j) / m;
        double t = cup.delta * frac * frac * frac;  // odd, concentrates near 0
        double y = cup.height(t);
        if (y == 0.0) {
            if (anchor_done) continue;
            anchor_done = true;
            pts.emplace_back(0.0, 0.0);
        } else {
            pts.emplace_back(t, y);
        }
    }
    return pts;
}

/// Convex hull (Andrew monotone chain), counterclockwise, no repeated last point.
inline std::vector<Complex> convex_hull(std::vector<Complex> pts) {
    auto lt = [](const Complex& a, const Complex& b) {
        return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
    };
    std::sort(pts.begin(), pts.end(), lt);
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const std::size_t n = pts.size();
    if (n < 3) return pts;
    auto cross = [](const Complex& o, const Complex& a, const Complex& b) {
        return (a.real() - o.real()) * (b.imag() - o.imag()) -
               (a.imag() - o.imag()) * (b.real() - o.real());
    };
    std::vector<Complex> h(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0.0) --k;
        h[k++] = pts[i];
    }
    for (std::size_t i = n - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(h[k - 2], h[k - 1], pts[i]) <= 0.0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

inline bool polygon_is_convex(const std::vector<Complex>& poly) {
    const std::size_t n = poly.size();
    if (n < 3) return false;
    int sign = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const Complex& a = poly[i];
        const Complex& b = poly[(i + 1) % n];
        const Complex& c = poly[(i + 2) % n];
        double cr = (b.real() - a.real()) * (c.imag() - a.imag()) -
                    (b.imag() - a.imag()) * (c.real() - a.real());
        if (cr != 0.0) {
            int s = cr > 0.0 ? 1 : -1;
            if (sign == 0) sign = s;
            else if (s != sign) return false;
        }
    }
    return true;
}

inline double dist_point_segment(Complex p, Complex a, Complex b) {
    Complex ab = b - a;
    double den = std::norm(ab);
    if (den == 0.0) return std::abs(p - a);
    double u = std::clamp(((p - a) * std::conj(ab)).real() / den, 0.0, 1.0);
    return std::abs(p - (a + u * ab));
}

inline double dist_polygon_boundary(Complex p, const std::vector<Complex>& poly) {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poly.size(); ++i)
        d = std::min(d, dist_point_segment(p, poly[i], poly[(i + 1) % poly.size()]));
    return d;
}

/// Winding parity test; boundary points are implementation defined (callers use
/// a tolerance band around the boundary first).
inline bool point_in_polygon(Complex p, const std::vector<Complex>& poly) {
    bool in = false;
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        double yi = poly[i].imag(), yj = poly[j].imag();
        if ((yi > p.imag()) != (yj > p.imag())) {
            double xint = poly[j].real() +
                          (p.imag() - yj) / (yi - yj) * (poly[i].real() - poly[j].real());
            if (p.real() < xint) in = !in;
        }
    }
    return in;
}

enum class Region { inside, outside, boundary_band };

inline const char* to_string(Region r) {
    switch (r) {
        case Region::inside: return "inside";
        case Region::outside: return "outside";
        default: return "boundary-band";
    }
}

// Classifies a strip point against the convex hull of the sampled cup curve.
// A degenerate hull (all heights below the floating-point floor) is an error
// rather than a silent segment.
inline Region cup_membership(const CupSpec& cup, const StripPoint& w, double tol = 1e-9) {
    cup.validate();
    if (cup.max_height() == 0.0)
        throw NumericError("cup_membership: hull degenerate, rho*s(delta) underflows");
    std::vector<Complex> hull = convex_hull(sample_cup_curve(cup));
    if (hull.size() < 3)
        throw NumericError("cup_membership: hull degenerate");
    Complex p(w.t, w.s);
    if (dist_polygon_boundary(p, hull) <= tol) return Region::boundary_band;
    return point_in_polygon(p, hull) ? Region::inside : Region::outside;
}

}  // namespace tshift
