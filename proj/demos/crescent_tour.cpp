// Walks the crescent example end to end: measure of the domain, the
// eigenvalue dichotomy at +1 / -1, and a few Taylor-shift orbit norms.

#include <cstdio>

#include "tshift/dynamics.hpp"
#include "tshift/presets.hpp"

using namespace tshift;

int main() {
    DomainSpec crescent = preset_crescent();

    QuadResult mass = integrate_strip(crescent, [](Complex) { return Complex(1, 0); }, 1e-10);
    std::printf("m2(crescent)          = %.12f  (pi*sqrt2 = %.12f)\n", mass.real_value(),
                kPi * std::sqrt(2.0));

    for (double angle : {0.0, kPi}) {
        EigenClassification e = eigen_classify(crescent, unit(angle));
        std::printf("lambda = exp(%+.3fi)   -> %s", angle, to_string(e.verdict));
        if (e.norm_if_member) std::printf("  (norm %.6f)", *e.norm_if_member);
        std::printf("\n");
    }

    RationalCombo f = gamma(Complex(0.5, 0.0));
    std::vector<double> norms = orbit_norms(crescent, f, 6, 1e-9);
    std::printf("orbit of gamma_{1/2}:");
    for (double n : norms) std::printf(" %.6f", n);
    std::printf("\n(each step multiplies the norm by 1/2)\n");
    return 0;
}
