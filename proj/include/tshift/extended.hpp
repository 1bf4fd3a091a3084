#pragma once

#include "tshift/common.hpp"

namespace tshift {

// Point of the extended plane C_inf with the conventions 1/0 = inf, 1/inf = 0.
struct ExtendedComplex {
    Complex value{0.0, 0.0};
    bool is_infinity = false;

    static ExtendedComplex infinity() { return ExtendedComplex{Complex(0, 0), true}; }
    static ExtendedComplex finite(Complex z) { return ExtendedComplex{z, false}; }

    bool is_zero() const { return !is_infinity && value == Complex(0.0, 0.0); }
};

inline ExtendedComplex inv(const ExtendedComplex& z) {
    if (z.is_infinity) return ExtendedComplex::finite(Complex(0.0, 0.0));
    if (z.value == Complex(0.0, 0.0)) return ExtendedComplex::infinity();
    return ExtendedComplex::finite(1.0 / z.value);
}

inline bool operator==(const ExtendedComplex& a, const ExtendedComplex& b) {
    if (a.is_infinity || b.is_infinity) return a.is_infinity == b.is_infinity;
    return a.value == b.value;
}

/// Chordal (spherical) metric on C_inf, range [0, 2].
inline double chordal_metric(const ExtendedComplex& a, const ExtendedComplex& b) {
    if (a.is_infinity && b.is_infinity) return 0.0;
    if (a.is_infinity) return 2.0 / std::sqrt(1.0 + std::norm(b.value));
    if (b.is_infinity) return 2.0 / std::sqrt(1.0 + std::norm(a.value));
    return 2.0 * std::abs(a.value - b.value) /
           std::sqrt((1.0 + std::norm(a.value)) * (1.0 + std::norm(b.value)));
}

}  // namespace tshift
