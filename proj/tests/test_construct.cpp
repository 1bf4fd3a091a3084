#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "tshift/build.hpp"

using namespace tshift;
using Catch::Approx;

namespace {

ZSpec mini_z() {
    ZSpec z;
    z.kind = ZSpec::Kind::finite_list;
    z.angles = {0.0, kPi / 4, kPi / 8, kPi / 16};
    return z;
}

}  // namespace

TEST_CASE("zspec validation") {
    ZSpec z = mini_z();
    CHECK_NOTHROW(z.validate());
    CHECK(z.symmetrized().size() == 7);  // 0 plus three conjugate pairs
    CHECK(z.contains_angle(-kPi / 8));

    ZSpec dup = z;
    dup.angles.push_back(kPi / 4 + 2 * kPi);
    CHECK_THROWS_AS(dup.validate(), PreconditionError);

    ZSpec acc;
    acc.kind = ZSpec::Kind::accumulating_sequence;
    acc.angles = {0.5, 0.25, 0.125};
    acc.accumulation_point = 0.0;
    CHECK_NOTHROW(acc.validate());
    std::swap(acc.angles[0], acc.angles[2]);
    CHECK_THROWS_AS(acc.validate(), PreconditionError);
}

TEST_CASE("runge approximant") {
    CompactComplement K;
    K.window_radius = 0.6;
    K.boundary_samples = 240;
    std::vector<double> pool{0.0, 0.12, -0.12, 0.25, -0.25};

    SECTION("target already in the span: single pole suffices") {
        RungeResult r = runge_approximant(0, unit(0.12), 3, pool, K, 1e-8);
        CHECK(r.success);
        CHECK(r.sup_error < 1e-8);
    }
    SECTION("constant target fits well below a loose tolerance") {
        RungeResult r = runge_approximant(0, Complex(0, 0), 5, pool, K, 0.5);
        CHECK(r.success);
        // denser-grid brute-force check of the reported sup
        CompactComplement dense = K;
        dense.validation_factor = 7;
        double sup = 0.0;
        for (const Complex& z : dense.sample(7))
            sup = std::max(sup,
                           std::abs(evaluate(gamma(Complex(0, 0)), z) -
                                    evaluate(r.approximant, z)));
        CHECK(sup < 0.5 * 1.2);
    }
    SECTION("pole budget zero fails with max |target| on K") {
        RungeResult r = runge_approximant(0, Complex(1.0, 0.0), 0, pool, K, 0.1);
        CHECK_FALSE(r.success);
        // max of |1/(1-z)| on K is attained near the window rim: 1/r
        CHECK(r.sup_error == Approx(1.0 / K.window_radius).epsilon(0.2));
    }
    SECTION("empty pool is an error") {
        CHECK_THROWS_AS(runge_approximant(0, Complex(1, 0), 3, {}, K, 0.1),
                        PreconditionError);
    }
    SECTION("order-1 pole target reached with clustered simple poles") {
        RungeResult r = runge_approximant(1, Complex(1.0, 0.0),
                                          static_cast<int>(pool.size()), pool, K, 0.25);
        CHECK(r.success);
    }
}

TEST_CASE("two-stage build on a small Z") {
    BuildParams params;
    params.per_stage_budget = 7;
    BuildResult br = build_domain(mini_z(), 2, {0.8, 0.45}, {1e-8, 1e-8}, params);
    INFO(br.message);
    REQUIRE(br.success);
    REQUIRE(br.certificates.size() == 2);

    SECTION("certificates pass with the exact 1/(n+1) bounds") {
        for (const StageCertificate& c : br.certificates) {
            CHECK(c.pass);
            CHECK(c.sup_bound == 1.0 / (c.n + 1));
            CHECK(c.integral_bound == 1.0 / (c.n + 1));
            for (std::size_t j = 0; j < c.integral_R.size(); ++j) {
                CHECK(c.integral_R[j] + 2 * c.integral_R_err[j] < c.integral_bound);
                CHECK(c.integral_gamma[j] + 2 * c.integral_gamma_err[j] < c.integral_bound);
            }
            for (double s : c.sup_error) CHECK(s < c.sup_bound);
        }
    }
    SECTION("anchors lie in the symmetrized Z") {
        ZSpec z = mini_z();
        for (const CuspRegion& c : br.domain.cusps)
            CHECK(z.contains_angle(c.anchor_angle, 1e-12));
    }
    SECTION("stages nest: later domains remove more") {
        DomainSpec partial = DomainSpec::disc();
        for (double a : br.certificates[0].new_anchor_angles)
            for (const CuspRegion& c : br.domain.cusps)
                if (std::abs(wrap_angle(c.anchor_angle - a)) < 1e-12)
                    partial.cusps.push_back(c);
        Rng rng(71);
        int removed = 0;
        for (int i = 0; i < 10000; ++i) {
            Complex z = rng.complex_in_disc(1.0);
            bool in_partial = domain_membership(partial, z, 1e-12) == Region::outside;
            bool in_full = domain_membership(br.domain, z, 1e-12) == Region::outside;
            if (in_partial) {
                ++removed;
                CHECK(in_full);  // G_1 subset of G_2
            }
        }
        CHECK(removed > 50);
    }
    SECTION("removed set is connected") {
        CHECK(removed_set_connected(br.domain));
    }
    SECTION("re-verification at 10x tighter tolerance holds") {
        VerifyReport rep = verify_certificates(br.domain, br.certificates, 1e-9);
        for (const std::string& m : rep.mismatches) INFO(m);
        CHECK(rep.ok);
    }
    SECTION("certificates from a different domain fail") {
        DomainSpec other = br.domain;
        other.cusps.pop_back();
        VerifyReport rep = verify_certificates(other, br.certificates, 1e-8);
        CHECK_FALSE(rep.ok);
        CHECK_FALSE(rep.mismatches.empty());
    }
    SECTION("empty certificate list verifies vacuously") {
        VerifyReport rep = verify_certificates(br.domain, {}, 1e-8);
        CHECK(rep.ok);
    }
    SECTION("shrinking rho shrinks the collar integrals (bisection direction)") {
        // the measured constraints relax as rho is halved, which is what the
        // search relies on
        const StageCertificate& c2 = br.certificates[1];
        DomainSpec fat = DomainSpec::disc();
        DomainSpec thin = DomainSpec::disc();
        for (const CuspRegion& c : br.domain.cusps) {
            CupSpec cup = c.cup;
            fat.cusps.push_back(make_cusp_region(c.anchor_angle, cup, c.window_radius));
            cup.rho = cup.rho * 0.5;
            thin.cusps.push_back(make_cusp_region(c.anchor_angle, cup, c.window_radius));
        }
        InnerOperand R0 = operand(c2.approximants[0]);
        QuadResult qf = detail::collar_integral(fat, R0, br.certificates[0].r_n, 1e-9);
        QuadResult qt = detail::collar_integral(thin, R0, br.certificates[0].r_n, 1e-9);
        CHECK(qt.real_value() <=
              qf.real_value() + qf.error_estimate + qt.error_estimate + 1e-10);
    }
}

TEST_CASE("build precondition failures") {
    CHECK_THROWS_AS(build_domain(mini_z(), 2, {0.45, 0.8}, {}, {}), PreconditionError);
    CHECK_THROWS_AS(build_domain(mini_z(), 2, {0.8, 0.6}, {}, {}), PreconditionError);
    ZSpec no_zero;
    no_zero.angles = {kPi / 4, kPi / 8};
    CHECK_THROWS_AS(build_domain(no_zero, 1, {0.8}, {}, {}), PreconditionError);
    CHECK_THROWS_AS(build_domain(mini_z(), 0, {}, {}, {}), PreconditionError);
}

TEST_CASE("single-stage build reduces to the j = 0 constraints") {
    BuildResult br = build_domain(mini_z(), 1, {0.8}, {1e-8}, {});
    REQUIRE(br.success);
    REQUIRE(br.certificates.size() == 1);
    CHECK(br.certificates[0].integral_R.size() == 1);
    CHECK(br.certificates[0].integral_gamma.size() == 1);
    CHECK(br.certificates[0].sup_error.size() == 1);
}
