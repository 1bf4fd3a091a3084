#pragma once

#include <cstdio>
#include <sstream>

#include "tshift/domain.hpp"

namespace tshift {

struct RenderOptions {
    int size_px = 640;
    std::optional<std::size_t> zoom_cusp;  // inset window into one cusp
};

namespace detail {

inline std::string fmt6(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

}  // namespace detail

// Deterministic SVG: unit circle, removed regions shaded, anchors ticked and
// labeled by angle. Byte-identical output for identical inputs.
inline std::string render_svg(const DomainSpec& dom, const RenderOptions& opt = {}) {
    const double S = opt.size_px;
    auto px = [&](Complex z) {
        return Complex(S * (0.5 + z.real() / 2.4), S * (0.5 - z.imag() / 2.4));
    };
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.size_px
        << "\" height=\"" << opt.size_px << "\" viewBox=\"0 0 " << opt.size_px << " "
        << opt.size_px << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    Complex c0 = px(Complex(0, 0));
    svg << "<circle cx=\"" << detail::fmt6(c0.real()) << "\" cy=\"" << detail::fmt6(c0.imag())
        << "\" r=\"" << detail::fmt6(S / 2.4) << "\" fill=\"#eef4fb\" stroke=\"#1f3a5f\" "
           "stroke-width=\"1.5\"/>\n";
    if (dom.base == BaseKind::crescent) {
        Complex hc = px(dom.crescent_center);
        svg << "<circle cx=\"" << detail::fmt6(hc.real()) << "\" cy=\""
            << detail::fmt6(hc.imag()) << "\" r=\""
            << detail::fmt6(S * dom.crescent_radius / 2.4)
            << "\" fill=\"#c9ccd4\" stroke=\"#5a5f6b\" stroke-width=\"0.8\"/>\n";
    }
    for (const CuspRegion& cusp : dom.cusps) {
        svg << "<polygon points=\"";
        for (const Complex& v : cusp.hull) {
            Complex p = px(v);
            svg << detail::fmt6(p.real()) << "," << detail::fmt6(p.imag()) << " ";
        }
        svg << "\" fill=\"#d9b8b8\" stroke=\"#7a3030\" stroke-width=\"0.6\"/>\n";
    }
    for (const CuspRegion& cusp : dom.cusps) {
        Complex a = cusp.anchor();
        Complex t0 = px(a * 0.97), t1 = px(a * 1.05);
        svg << "<line x1=\"" << detail::fmt6(t0.real()) << "\" y1=\"" << detail::fmt6(t0.imag())
            << "\" x2=\"" << detail::fmt6(t1.real()) << "\" y2=\"" << detail::fmt6(t1.imag())
            << "\" stroke=\"#7a3030\" stroke-width=\"1\"/>\n";
        Complex lp = px(a * 1.13);
        svg << "<text x=\"" << detail::fmt6(lp.real()) << "\" y=\"" << detail::fmt6(lp.imag())
            << "\" font-size=\"10\" text-anchor=\"middle\" fill=\"#333\">"
            << detail::fmt6(cusp.anchor_angle) << "</text>\n";
    }
    if (opt.zoom_cusp && *opt.zoom_cusp < dom.cusps.size()) {
        const CuspRegion& cusp = dom.cusps[*opt.zoom_cusp];
        Complex a = cusp.anchor();
        double w = std::min(0.5, cusp.cup.delta) * 0.6;
        double box = 0.26 * S;
        double bx = 6.0, by = 6.0;
        svg << "<rect x=\"" << detail::fmt6(bx) << "\" y=\"" << detail::fmt6(by)
            << "\" width=\"" << detail::fmt6(box) << "\" height=\"" << detail::fmt6(box)
            << "\" fill=\"white\" stroke=\"#555\" stroke-width=\"0.8\"/>\n";
        auto zpx = [&](Complex z) {
            Complex d = (z - a) * std::conj(a);  // local frame at the anchor
            return Complex(bx + box * (0.5 + d.imag() / (2.0 * w)),
                           by + box * (0.8 + d.real() / (2.0 * w) * 4.0));
        };
        svg << "<polyline points=\"";
        for (const Complex& v : cusp.hull) {
            Complex p = zpx(v);
            if (p.real() < bx || p.real() > bx + box || p.imag() < by ||
                p.imag() > by + box)
                continue;
            svg << detail::fmt6(p.real()) << "," << detail::fmt6(p.imag()) << " ";
        }
        svg << "\" fill=\"none\" stroke=\"#7a3030\" stroke-width=\"0.7\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace tshift
