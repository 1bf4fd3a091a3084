#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "tshift/inner.hpp"
#include "tshift/presets.hpp"

using namespace tshift;
using Catch::Approx;

namespace {

RationalCombo random_combo(Rng& rng, int terms, double pole_floor = 1.3) {
    RationalCombo f;
    for (int i = 0; i < terms; ++i) {
        Complex alpha = rng.complex_in_disc(1.0 / pole_floor);
        f.terms.push_back({alpha, static_cast<int>(rng.uniform_index(3)),
                           Complex(rng.uniform(-1, 1), rng.uniform(-1, 1))});
    }
    return canonicalize(std::move(f));
}

TaylorPoly random_poly(Rng& rng, int degree) {
    TaylorPoly f;
    for (int i = 0; i <= degree; ++i)
        f.coeffs.emplace_back(rng.uniform(-1, 1), rng.uniform(-1, 1));
    return f;
}

}  // namespace

TEST_CASE("Taylor shift on coefficient vectors") {
    TaylorPoly f{{{1, 0}, {2, 0}, {3, 0}, {4, 0}}};
    TaylorPoly g = shift_poly(f);
    REQUIRE(g.length() == 3);
    CHECK(g.coeffs[0] == Complex(2, 0));
    CHECK(g.coeffs[2] == Complex(4, 0));

    CHECK(shift_poly(TaylorPoly{{{5, 0}}}).empty());

    TaylorPoly h = shift_poly_n(TaylorPoly{{{0, 0}, {0, 0}, {0, 0}, {7, 0}}}, 3);
    REQUIRE(h.length() == 1);
    CHECK(h.coeffs[0] == Complex(7, 0));
}

TEST_CASE("iterate identity") {
    Rng rng(23);
    SECTION("single shifts and constants") {
        TaylorPoly f = random_poly(rng, 12);
        CHECK(iterate_identity_residual(f, 0, Complex(0.3, 0.0)) < 1e-12);
        TaylorPoly c{{{2.5, -1.0}}};
        CHECK(iterate_identity_residual(c, 0, Complex(0.4, 0.2)) < 1e-14);
    }
    SECTION("degree 64, n = 10, z = 0.9i") {
        TaylorPoly f = random_poly(rng, 64);
        CHECK(iterate_identity_residual(f, 10, Complex(0.0, 0.9)) < 1e-10);
    }
    SECTION("z = 0 is rejected; T^{n+1}f(0) = a_{n+1} holds") {
        TaylorPoly f = random_poly(rng, 8);
        CHECK_THROWS_AS(iterate_identity_residual(f, 2, Complex(0, 0)), PreconditionError);
        TaylorPoly it = shift_poly_n(f, 4);
        CHECK(evaluate(it, Complex(0, 0)) == f.coeffs[4]);
    }
}

TEST_CASE("rational shift closed forms") {
    SECTION("eigen-relation: T gamma_alpha = alpha gamma_alpha") {
        Complex alpha(0.3, 0.4);
        RationalCombo g = shift_rational(gamma(alpha));
        REQUIRE(g.terms.size() == 1);
        CHECK(g.terms[0].alpha == alpha);
        CHECK(g.terms[0].k == 0);
        CHECK(g.terms[0].c == alpha);
        Rng rng(31);
        for (int i = 0; i < 20; ++i) {
            Complex z = rng.complex_in_disc(0.9);
            CHECK(std::abs(evaluate(g, z) - alpha * evaluate(gamma(alpha), z)) < 1e-13);
        }
    }
    SECTION("monomials shift down") {
        RationalCombo g = shift_rational(monomial(3));
        REQUIRE(g.terms.size() == 1);
        CHECK(g.terms[0].k == 2);
        CHECK(g.terms[0].alpha == Complex(0, 0));
        CHECK(shift_rational(monomial(0)).is_zero());
    }
    SECTION("T gamma_{alpha,1} = 1/(1-alpha z)^2 pointwise") {
        Complex alpha(0.6, -0.2);
        RationalCombo g = shift_rational(gamma(alpha, 1));
        Rng rng(37);
        for (int i = 0; i < 30; ++i) {
            Complex z = rng.complex_in_disc(0.9);
            Complex expect = 1.0 / std::pow(1.0 - alpha * z, 2);
            CHECK(std::abs(evaluate(g, z) - expect) < 1e-12);
        }
    }
    SECTION("eigen-relation term structure for 50 random alpha") {
        Rng rng(41);
        for (int i = 0; i < 50; ++i) {
            Complex alpha = std::polar(rng.uniform(0.1, 2.0), rng.uniform(-kPi, kPi));
            RationalCombo g = shift_rational(gamma(alpha));
            REQUIRE(g.terms.size() == 1);
            CHECK(g.terms[0].alpha == alpha);
            CHECK(g.terms[0].k == 0);
            CHECK(g.terms[0].c == alpha);
        }
    }
}

TEST_CASE("shift is linear on both representations") {
    Rng rng(43);
    for (int trial = 0; trial < 100; ++trial) {
        Complex a(rng.uniform(-1, 1), rng.uniform(-1, 1));
        Complex b(rng.uniform(-1, 1), rng.uniform(-1, 1));
        RationalCombo f = random_combo(rng, 3), g = random_combo(rng, 3);
        RationalCombo lhs = shift_rational(add(scale(f, a), scale(g, b)));
        RationalCombo rhs = add(scale(shift_rational(f), a), scale(shift_rational(g), b));
        CHECK(approx_equal(lhs, rhs, 1e-12));

        TaylorPoly p = random_poly(rng, 9), q = random_poly(rng, 9);
        TaylorPoly sp = shift_poly(p), sq = shift_poly(q);
        for (std::size_t i = 0; i < sp.length(); ++i) {
            Complex want = a * sp.coeffs[i] + b * sq.coeffs[i];
            Complex got = a * p.coeffs[i + 1] + b * q.coeffs[i + 1];
            CHECK(std::abs(want - got) == 0.0);
        }
    }
}

TEST_CASE("shift agrees with (f(z) - f(0))/z pointwise") {
    Rng rng(47);
    for (int trial = 0; trial < 25; ++trial) {
        RationalCombo f = random_combo(rng, 4);  // poles outside |z| <= 1.3
        RationalCombo Tf = shift_rational(f);
        for (int i = 0; i < 4; ++i) {
            Complex z = rng.complex_in_disc(0.9);
            if (std::abs(z) < 1e-3) continue;
            Complex expect = (evaluate(f, z) - evaluate(f, Complex(0, 0))) / z;
            CHECK(std::abs(evaluate(Tf, z) - expect) < 1e-11);
        }
    }
}

TEST_CASE("evaluation") {
    CHECK(evaluate(gamma(Complex(0.7, 0.1)), Complex(0, 0)) == Complex(1, 0));
    CHECK(evaluate(gamma(Complex(0.7, 0.1), 2), Complex(0, 0)) == Complex(0, 0));
    TaylorPoly ones{{{1, 0}, {1, 0}, {1, 0}}};
    CHECK(evaluate(ones, Complex(0.5, 0.0)) == Complex(1.75, 0.0));
    CHECK_THROWS_AS(evaluate(gamma(Complex(2.0, 0.0)), Complex(0.5, 0.0)), NumericError);
}

TEST_CASE("inner products against oracles") {
    DomainSpec disc = DomainSpec::disc();
    SECTION("<1,1> = 2 pi") {
        QuadResult q = inner_product(gamma(Complex(0, 0)), gamma(Complex(0, 0)), disc, 1e-10);
        CHECK(q.real_value() == Approx(kTwoPi).epsilon(1e-10));
    }
    SECTION("<z,1> vanishes by symmetry") {
        QuadResult q = inner_product(monomial(1), gamma(Complex(0, 0)), disc, 1e-10);
        CHECK(std::abs(q.value) < 1e-10);
    }
    SECTION("<gamma_.5, gamma_.5> matches the grid oracle") {
        QuadResult q = norm_sq(gamma(Complex(0.5, 0.0)), disc, 1e-9);
        double oracle = oracles::grid_integral(
            disc, [](Complex z) { return 1.0 / std::norm(1.0 - 0.5 * z); }, 3000, 3000);
        CHECK(q.real_value() == Approx(oracle).epsilon(1e-5));
    }
}

TEST_CASE("gram systems") {
    DomainSpec disc = DomainSpec::disc();
    SECTION("basis {1}, target 1") {
        GramSystem sys = gram_system({gamma(Complex(0, 0))}, gamma(Complex(0, 0)), disc, 1e-9);
        CHECK(sys.gram(0, 0).real() == Approx(kTwoPi).epsilon(1e-9));
        CHECK(sys.rhs(0).real() == Approx(kTwoPi).epsilon(1e-9));
        Projection p = project(sys);
        CHECK(p.residual < 1e-5);
        CHECK(std::abs(p.coefficients(0) - Complex(1, 0)) < 1e-7);
    }
    SECTION("duplicate basis rejected") {
        CHECK_THROWS_AS(gram_system({gamma(Complex(0.5, 0.0)), gamma(Complex(0.5, 0.0))},
                                    monomial(0), disc, 1e-8),
                        PreconditionError);
    }
    SECTION("{1, z}: off-diagonal vanishes, PSD, Cauchy-Schwarz") {
        std::vector<RationalCombo> basis{gamma(Complex(0, 0)), monomial(1)};
        GramSystem sys = gram_system(basis, gamma(Complex(0.3, 0.2)), disc, 1e-9);
        CHECK(std::abs(sys.gram(0, 1)) < 1e-9);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sys.gram);
        CHECK(es.eigenvalues().minCoeff() >= -1e-10 * sys.gram.norm());
        for (int i = 0; i < 2; ++i) {
            double cs = std::sqrt(sys.gram(i, i).real() * sys.target_norm_sq);
            CHECK(std::abs(sys.rhs(i)) <= cs + 1e-7);
        }
    }
    SECTION("target zero and empty span") {
        GramSystem sys = gram_system({gamma(Complex(0.4, 0.0))}, RationalCombo{}, disc, 1e-9);
        Projection p = project(sys);
        CHECK(p.residual == Approx(0.0).margin(1e-6));
        CHECK(std::abs(p.coefficients(0)) < 1e-6);
        Projection empty = project(sys, 0);
        CHECK(empty.residual == Approx(0.0).margin(1e-9));
    }
    SECTION("divergent unimodular basis element rejected") {
        CHECK_THROWS_AS(
            gram_system({gamma(Complex(-1.0, 0.0))}, monomial(0), DomainSpec::crescent(), 1e-8),
            PreconditionError);
    }
}

TEST_CASE("projection optimality") {
    DomainSpec disc = DomainSpec::disc();
    std::vector<RationalCombo> basis{gamma(Complex(0, 0)), gamma(Complex(0.5, 0.0)),
                                     gamma(Complex(0.0, 0.5))};
    RationalCombo target = monomial(1);
    GramSystem sys = gram_system(basis, target, disc, 1e-9);
    Projection p = project(sys);
    auto residual_for = [&](const Eigen::VectorXcd& c) {
        double quad = (c.adjoint() * sys.gram * c)(0, 0).real();
        double cross = (c.adjoint() * sys.rhs)(0, 0).real();
        return std::sqrt(std::max(0.0, sys.target_norm_sq - 2.0 * cross + quad));
    };
    Rng rng(53);
    for (int trial = 0; trial < 50; ++trial) {
        Eigen::VectorXcd delta(3);
        for (int i = 0; i < 3; ++i)
            delta(i) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
        delta *= 1e-3 / delta.norm();
        CHECK(residual_for(p.coefficients + delta) >= p.residual - 1e-9);
    }
}

TEST_CASE("density of gamma_{1,k} on the cusped crescent: z^2 reached by K <= 60") {
    DomainSpec dom = preset_crescent_cusped();
    RationalCombo target = monomial(2);
    std::vector<RationalCombo> basis;
    double residual = std::numeric_limits<double>::infinity();
    int K = -1;
    while (K < 60 && residual >= 1e-2) {
        ++K;
        basis.push_back(gamma(Complex(1.0, 0.0), K));
        if (K % 4 == 3 || K == 0) {  // probe every few K to keep this quick
            GramSystem sys = gram_system(basis, target, dom, 1e-9);
            residual = project(sys).residual;
        }
    }
    INFO("reached residual " << residual << " at K = " << K);
    CHECK(residual < 1e-2);
    CHECK(K <= 60);
}

TEST_CASE("density probe residual table") {
    DomainSpec dom = preset_crescent_cusped();
    auto family = [](int k) { return gamma(Complex(1.0, 0.0), k); };
    SECTION("empty target list gives an empty report") {
        DensityReport rep = density_probe(dom, family, {}, {0, 5}, 1e-8);
        CHECK(rep.rows.empty());
    }
    SECTION("K = 0 residual equals the distance to span{gamma_1}") {
        std::vector<std::pair<std::string, RationalCombo>> targets{
            {"z", monomial(1)}};
        DensityReport rep = density_probe(dom, family, targets, {0}, 1e-8);
        REQUIRE(rep.rows.size() == 1);
        GramSystem sys = gram_system({family(0)}, monomial(1), dom, 1e-8);
        CHECK(rep.rows[0].residual == Approx(project(sys).residual).epsilon(1e-6));
    }
    SECTION("residual columns decrease") {
        std::vector<std::pair<std::string, RationalCombo>> targets{
            {"z^0", monomial(0)}, {"z^1", monomial(1)}};
        DensityReport rep = density_probe(dom, family, targets, {0, 4, 8}, 1e-9);
        double prev = std::numeric_limits<double>::infinity();
        for (const DensityRow& r : rep.rows) {
            if (r.K == 0) prev = std::numeric_limits<double>::infinity();
            CHECK(r.residual <= prev + 1e-7);
            prev = r.residual;
        }
    }
}
