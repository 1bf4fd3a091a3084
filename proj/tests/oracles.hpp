#pragma once

// Test-side oracles, kept independent of the implementation paths they check:
// a classical E1 evaluation (series + continued fraction), brute-force grid
// integration driven only by membership, an independent point-in-polygon
// test, and plain Simpson for 1-D references.

#include <cmath>
#include <vector>

#include "tshift/domain.hpp"
#include "tshift/quad.hpp"

namespace oracles {

/// E1(x) for x > 0: power series below 1, Lentz continued fraction above.
inline double expint_e1(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("expint_e1: x must be positive");
    if (x <= 1.0) {
        const double euler = 0.57721566490153286;
        double sum = -euler - std::log(x);
        double term = 1.0;
        for (int k = 1; k <= 40; ++k) {
            term *= -x / k;
            sum -= term / k;
        }
        return sum;
    }
    double b = x + 1.0, c = 1e308, d = 1.0 / b, h = d;
    for (int i = 1; i <= 200; ++i) {
        double a = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        double del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x);
}

/// Brute-force polar-grid integral of f dm2 over the domain (membership only),
/// optionally excising a ball.
inline double grid_integral(const tshift::DomainSpec& dom,
                            const std::function<double(tshift::Complex)>& f, long nr,
                            long nth, tshift::Complex excise_center = {0, 0},
                            double excise_radius = 0.0) {
    double acc = 0.0;
    for (long i = 0; i < nr; ++i) {
        double r = (i + 0.5) / nr;
        double ring = 0.0;
        for (long j = 0; j < nth; ++j) {
            double th = -tshift::kPi + tshift::kTwoPi * (j + 0.5) / nth;
            tshift::Complex z = std::polar(r, th);
            if (excise_radius > 0.0 && std::abs(z - excise_center) < excise_radius) continue;
            if (tshift::domain_membership(dom, z, 1e-13) != tshift::Region::inside) continue;
            ring += f(z) * tshift::spherical_density(z);
        }
        acc += ring * r;
    }
    return acc * (1.0 / nr) * (tshift::kTwoPi / nth);
}

/// Crossing-number point-in-polygon, written independently of the library's.
inline bool raycast_inside(tshift::Complex p, const std::vector<tshift::Complex>& poly) {
    int crossings = 0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        tshift::Complex a = poly[i], b = poly[(i + 1) % n];
        if ((a.imag() <= p.imag()) == (b.imag() <= p.imag())) continue;
        double t = (p.imag() - a.imag()) / (b.imag() - a.imag());
        if (a.real() + t * (b.real() - a.real()) > p.real()) ++crossings;
    }
    return crossings % 2 == 1;
}

inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (n % 2 == 1) ++n;
    double h = (b - a) / n, acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

}  // namespace oracles
