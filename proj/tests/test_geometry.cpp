#include <cmath>
#include <complex>
#include <sstream>

#include "doctest.h"
#include "nlab/dyadic_model.hpp"

using namespace nlab;

namespace {

double rho_direct(std::complex<double> z, std::complex<double> w) {
    return std::abs((z - w) / (1.0 - std::conj(z) * w));
}

} // namespace

TEST_CASE("dyadic angles reduce and subtract exactly") {
    Angle a = Angle::from_turns_dyadic(6, 4); // 6/16 = 3/8
    CHECK(a.num == 3);
    CHECK(a.den_exp == 3);
    Angle b = Angle::from_turns_dyadic(1, 3);
    CHECK(a.diff(b) == doctest::Approx(TWO_PI * 0.25).epsilon(1e-16));
    CHECK(Angle::from_turns_dyadic(7, 3).diff(Angle::from_turns_dyadic(1, 3)) ==
          doctest::Approx(-TWO_PI * 0.25).epsilon(1e-16)); // wraps the short way
}

TEST_CASE("rho matches the complex formula for generic points") {
    std::srand(11);
    for (int i = 0; i < 100; ++i) {
        auto rnd = [] { return std::rand() / (double)RAND_MAX; };
        std::complex<double> z = std::polar(0.95 * rnd(), TWO_PI * rnd());
        std::complex<double> w = std::polar(0.95 * rnd(), TWO_PI * rnd());
        double got = rho(DiskPoint::from_complex(z), DiskPoint::from_complex(w)).to_double();
        CHECK(got == doctest::Approx(rho_direct(z, w)).epsilon(1e-12));
    }
}

TEST_CASE("collinear rho closed form") {
    // gaps 1/4 and 1/8: |s-t|/(s+t-st) = 4/11
    LogMagnitude r = rho_collinear(LogMagnitude::two_pow(-2), LogMagnitude::two_pow(-3));
    CHECK(r.to_double() == doctest::Approx(0.36363636363636365).epsilon(1e-15));
    CHECK(rho_collinear(LogMagnitude::two_pow(-2), LogMagnitude::two_pow(-2)).is_zero());
}

TEST_CASE("rho is Mobius invariant") {
    std::srand(13);
    auto rnd = [] { return std::rand() / (double)RAND_MAX; };
    for (int i = 0; i < 50; ++i) {
        std::complex<double> z = std::polar(0.9 * rnd(), TWO_PI * rnd());
        std::complex<double> w = std::polar(0.9 * rnd(), TWO_PI * rnd());
        std::complex<double> a = std::polar(0.8 * rnd(), TWO_PI * rnd());
        double before = rho(DiskPoint::from_complex(z), DiskPoint::from_complex(w)).to_double();
        double after = rho(DiskPoint::from_complex(mobius(a, z)),
                           DiskPoint::from_complex(mobius(a, w)))
                           .to_double();
        CHECK(after == doctest::Approx(before).epsilon(1e-12));
    }
}

TEST_CASE("privalov shadow widths") {
    DiskPoint deep(Angle::from_radians(1.0), LogMagnitude::from_double(1e-9));
    CHECK(privalov_shadow(deep).half_width == doctest::Approx(2e-9).epsilon(1e-6));
    DiskPoint mid(Angle::from_radians(0.0), LogMagnitude::from_double(0.25));
    CHECK(privalov_shadow(mid).half_width ==
          doctest::Approx(2.0 * std::asin(0.25 / 0.75)).epsilon(1e-15));
    DiskPoint big(Angle::from_radians(0.0), LogMagnitude::from_double(0.6));
    CHECK(privalov_shadow(big).half_width == doctest::Approx(std::numbers::pi));
}

TEST_CASE("family point counts and index ranges") {
    SequenceFamily nev = SequenceFamily::build_nevanlinna(3, 2);
    CHECK(nev.size() == 42); // 2 * (M+1) * (2^N - 1)
    SequenceFamily smi = SequenceFamily::build_smirnov(4);
    CHECK(smi.size() == 30); // 2 * (2^N - 1)
    for (const FamilyPoint& fp : nev.points()) {
        CHECK((fp.idx.k % 2) == 1);
        CHECK(fp.idx.m >= 2 * fp.idx.n);
        CHECK(fp.idx.m <= 2 * fp.idx.n + 2);
        CHECK(nev.contains(nev.twin(fp.idx)));
    }
    CHECK_THROWS(SequenceFamily::build_nevanlinna(0, 0));
    CHECK_THROWS(SequenceFamily::build_nevanlinna(20, 0, 1000)); // cap
}

TEST_CASE("Nevanlinna twin separation identity up to m = 50") {
    SequenceFamily fam = SequenceFamily::build_nevanlinna(1, 48); // m = 2..50
    for (std::size_t i = 0; i < fam.size(); i += 2) {
        const PointIndex& idx = fam.at(i).idx;
        REQUIRE(fam.at(i + 1).idx.kind == PointKind::B);
        LogMagnitude r = fam.member_rho(i, i + 1);
        REQUIRE_FALSE(r.is_zero());
        // (-log rho) * (1-|a|) in [1 - (m+2) 2^-m, 1]
        double prod = -r.log().to_double() * std::ldexp(1.0, -idx.m);
        CHECK(prod <= 1.0 + 1e-14);
        CHECK(prod >= 1.0 - (idx.m + 2) * std::ldexp(1.0, -idx.m) - 1e-14);
    }
}

TEST_CASE("Nevanlinna m=4 twin distance oracle") {
    SequenceFamily fam = SequenceFamily::build_nevanlinna(1, 2);
    std::size_t a = fam.position({1, 1, 4, PointKind::A});
    std::size_t b = fam.position({1, 1, 4, PointKind::B});
    // log rho = -16 + log(240/31), 32-digit reference
    CHECK(fam.member_rho(a, b).log_double() ==
          doctest::Approx(-13.95334909793038).epsilon(1e-14));
}

TEST_CASE("Smirnov twin separation is exactly -2^{2n}/(2n) in the log") {
    SequenceFamily fam = SequenceFamily::build_smirnov(5);
    for (std::size_t i = 0; i < fam.size(); i += 2) {
        int n = fam.at(i).idx.n;
        double want = -std::ldexp(1.0, 2 * n) / (2.0 * n);
        CHECK(fam.member_rho(i, i + 1).log_double() ==
              doctest::Approx(want).epsilon(1e-15));
    }
    // n=1 twin gap oracle
    std::size_t b1 = fam.position({1, 1, 2, PointKind::B});
    CHECK(fam.at(b1).point.gap.to_double() ==
          doctest::Approx(0.3158979218552571).epsilon(1e-15));
    CHECK(fam.at(b1).twin_delta.to_double() ==
          doctest::Approx(0.0658979218552571).epsilon(1e-15));
}

TEST_CASE("dyadic boxes classify family points") {
    SequenceFamily fam = SequenceFamily::build_nevanlinna(2, 0);
    CarlesonBox left(1, 0), right(1, 1);
    for (const FamilyPoint& fp : fam.points()) {
        bool in_left = box_contains(left, fp.point);
        bool in_right = box_contains(right, fp.point);
        CHECK(in_left != in_right); // gap < 1/2 always holds here
    }
}

TEST_CASE("sequence CSV round trip") {
    SequenceFamily fam = SequenceFamily::build_nevanlinna(2, 1);
    std::ostringstream os;
    fam.export_csv(os);
    std::istringstream is(os.str());
    SequenceFamily back = SequenceFamily::import_csv(is);
    REQUIRE(back.size() == fam.size());
    for (std::size_t i = 0; i < fam.size(); ++i) {
        CHECK(back.at(i).idx == fam.at(i).idx);
        // the CSV stores the log-gap residual as a plain double, so perturbed
        // radii come back to double precision only
        CHECK(back.at(i).point.gap.log_double() ==
              doctest::Approx(fam.at(i).point.gap.log_double()).epsilon(1e-15));
        if (fam.at(i).idx.kind == PointKind::A)
            CHECK(back.at(i).point.gap.cmp(fam.at(i).point.gap) == 0);
        CHECK(back.at(i).point.angle.same(fam.at(i).point.angle));
    }
    std::istringstream bad("kind,n,k\nA,1\n");
    CHECK_THROWS_WITH_AS(SequenceFamily::import_csv(bad),
                         doctest::Contains("row 2"), std::runtime_error);
}
