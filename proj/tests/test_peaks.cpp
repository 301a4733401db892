#include <cmath>
#include <complex>

#include "doctest.h"
#include "nlab/nevanlinna_gauges.hpp"
#include "nlab/peak_builder.hpp"

using namespace nlab;

TEST_CASE("Nevanlinna peaks hit one at lambda and zeros exactly elsewhere") {
    SequenceFamily fam = SequenceFamily::build_nevanlinna(2, 1);
    for (std::size_t pos : {std::size_t{0}, std::size_t{5}, fam.size() - 1}) {
        PeakFunction f = build_peak_nevanlinna(fam, pos);
        LogMagnitude at = f.eval_mod_member(fam, pos);
        REQUIRE_FALSE(at.is_zero());
        CHECK(std::abs(at.log_double()) <= 1e-9);
        for (std::size_t j = 0; j < fam.size(); ++j)
            if (j != pos) CHECK(f.eval_mod_member(fam, j).is_zero());
    }
}

TEST_CASE("fast double path agrees with the exact path on the circle") {
    SequenceFamily fam = SequenceFamily::build_nevanlinna(2, 1);
    PeakFunction f = build_peak_nevanlinna(fam, 3);
    for (double g : {1e-2, 1e-4, 1e-7}) {
        for (int i = 0; i < 24; ++i) {
            double theta = 0.013 + TWO_PI * i / 24.0;
            DiskPoint z(Angle::from_radians(theta), LogMagnitude::from_double(g));
            double exact = f.eval_mod(fam, z).log_double();
            double fast = f.log_modulus(g, theta);
            CHECK(fast == doctest::Approx(exact).epsilon(1e-11));
        }
    }
    // interior complex evaluation is consistent with the modulus path
    std::complex<double> z = std::polar(0.8, 1.1);
    CHECK(std::log(std::abs(f.eval(z))) ==
          doctest::Approx(f.log_modulus(0.2, 1.1)).epsilon(1e-9));
}

TEST_CASE("Smirnov peaks keep the normalizing constant below one") {
    SequenceFamily fam = SequenceFamily::build_smirnov(3);
    SmirnovWeightParams params = default_smirnov_params(fam);
    CHECK(params.c0 * params.c1 >= 1.0);
    for (std::size_t pos = 0; pos < fam.size(); ++pos) {
        PeakFunction f = build_peak_smirnov(fam, pos, params);
        CHECK(std::abs(f.eval_mod_member(fam, pos).log_double()) <= 1e-9);
        double log_c = 0.0;
        for (const PeakFunction::Factor& fac : f.factors)
            if (fac.kind == PeakFunction::FactorKind::Constant)
                log_c = fac.const_mod.log_double();
        CHECK(log_c <= 0.0);
    }
}

TEST_CASE("certified harmonic constant for the depth-4 Smirnov family") {
    SequenceFamily fam = SequenceFamily::build_smirnov(4);
    double c1 = certify_harmonic_constant(fam);
    CHECK(c1 == doctest::Approx(0.6348).epsilon(2e-3));
    SmirnovWeightParams params = default_smirnov_params(fam);
    CHECK(params.c1 == c1);
    CHECK(params.c0 == doctest::Approx(1.2 / c1).epsilon(1e-12));
}

TEST_CASE("circle means: constants and self convergence") {
    GaugeValue v = circle_mean([](double) { return std::log(std::expm1(1.0)); },
                               GaugeFunction::identity(), {});
    CHECK(v.value == doctest::Approx(1.0).epsilon(1e-12)); // log(1+e^L) = 1
    CHECK(v.converged);
    CHECK(v.self_conv <= 1e-12);
}

TEST_CASE("radial estimate flags non-Cauchy ladders") {
    RadialEstimate good = radial_limit_estimate({1.0, 1.5, 1.75, 1.875, 1.9375});
    CHECK(good.cauchy);
    CHECK(good.limit == 1.9375);
    CHECK(good.error_bar == doctest::Approx(2 * 0.0625));
    RadialEstimate bad = radial_limit_estimate({1.0, 1.1, 1.3, 1.7, 2.5});
    CHECK_FALSE(bad.cauchy);
}

TEST_CASE("gauge ladder stays finite toward the boundary") {
    SequenceFamily fam = SequenceFamily::build_nevanlinna(2, 1);
    PeakFunction f = build_peak_nevanlinna(fam, 0);
    GaugeReport rep = gauge_ladder(f, GaugeFunction::identity(), 8, 1e-9);
    REQUIRE(rep.values.size() == 8);
    CHECK(rep.converged);
    CHECK(rep.estimate.cauchy);
    CHECK(rep.estimate.limit > 0.0);
    CHECK(rep.estimate.limit < 50.0);
    for (double s : rep.self_conv) CHECK(s <= 1e-8);
}

TEST_CASE("necessity peaks on the six-point toy sequence") {
    SequenceFamily fam = SequenceFamily::build_nevanlinna(1, 2);
    BoundaryMeasure mu = BoundaryMeasure::unit_atom(Angle::from_turns_dyadic(1, 1), 2.0);
    NecessityPrecheck pre = necessity_precheck(fam, mu);
    CHECK(pre.rows.size() == fam.size());

    for (std::size_t pos = 0; pos < fam.size(); ++pos) {
        PeakFunction f = build_necessity_peak(fam, pos, mu);
        CHECK(f.mode == "necessity");
        CHECK(std::abs(f.eval_mod_member(fam, pos).log_double()) <= 1e-9);
        for (std::size_t j = 0; j < fam.size(); ++j)
            if (j != pos) CHECK(f.eval_mod_member(fam, j).is_zero());
        CHECK(necessity_interpolant_norm(f) > 0.0);
    }

    // a certificate failing the margin check is refused, naming the point
    BoundaryMeasure tiny = BoundaryMeasure::unit_atom(Angle::from_turns_dyadic(1, 1), 1e-9);
    CHECK_THROWS_WITH_AS(build_necessity_peak(fam, 0, tiny),
                         doctest::Contains("certificate rejected"), std::domain_error);
}
