#include <cmath>

#include "doctest.h"
#include "nlab/blaschke_carleson.hpp"

using namespace nlab;

TEST_CASE("Blaschke sum with analytic tails telescopes to sum of 2^-n") {
    for (int N : {3, 6, 10}) {
        double want = 0.0;
        for (int n = 1; n <= N; ++n) want += std::ldexp(1.0, -n);
        CHECK(nevanlinna_blaschke_sum(N, 0, true) == doctest::Approx(want).epsilon(1e-13));
    }
    // truncated sum stays below the tailed one
    CHECK(nevanlinna_blaschke_sum(4, 3, false) < nevanlinna_blaschke_sum(4, 3, true));
}

TEST_CASE("Carleson box scan oracles for the (3,2) truncation") {
    SequenceFamily fam = SequenceFamily::build_nevanlinna(3, 2);
    CarlesonReport rep = carleson_norm(fam, 16);
    CHECK(rep.norm == doctest::Approx(2.4343109399388605).epsilon(1e-12));
    REQUIRE(rep.argmax.has_value());
    CHECK(rep.argmax->n == 1);
    CHECK(rep.argmax->k == 1);
    CHECK(rep.blaschke_sum == doctest::Approx(1.545280575471169).epsilon(1e-12));

    // monotone in scan depth
    double prev = 0.0;
    for (int depth : {2, 4, 8, 12, 16}) {
        double norm = carleson_norm(fam, depth).norm;
        CHECK(norm >= prev - 1e-15);
        prev = norm;
    }
}

TEST_CASE("minimum separation resolves twin pairs") {
    SequenceFamily fam = SequenceFamily::build_nevanlinna(3, 2);
    LogMagnitude sep = min_separation(fam);
    REQUIRE_FALSE(sep.is_zero());
    // deepest twin pair (m = 8): rho ~ e^{-2^8}
    CHECK(sep.to_double() == doctest::Approx(8.452241130763116e-110).epsilon(1e-9));
    SequenceFamily one = SequenceFamily::build_nevanlinna(1, 0);
    CHECK_FALSE(min_separation(one).is_zero());
}

TEST_CASE("one-omitted Blaschke product at the member") {
    SequenceFamily fam = SequenceFamily::build_nevanlinna(3, 2);
    LogBOmit b0 = log_B_omit(fam, std::size_t{0});
    CHECK(b0.log_double() == doctest::Approx(-6.66916083).epsilon(1e-7));
    for (std::size_t i = 0; i < fam.size(); ++i) {
        LogBOmit b = log_B_omit(fam, i);
        CHECK(b.log_double() < 0.0);
        CHECK(b.tail_bound >= 0.0);
    }
    // index-based lookup agrees with position-based
    CHECK(log_B_omit(fam, fam.at(3).idx).log_double() ==
          log_B_omit(fam, std::size_t{3}).log_double());
}

TEST_CASE("certificate check accepts a dominating atom and rejects a tiny one") {
    SequenceFamily fam = SequenceFamily::build_nevanlinna(1, 2); // 6 points, one ray
    BoundaryMeasure big = BoundaryMeasure::unit_atom(Angle::from_turns_dyadic(1, 1), 2.0);
    TheoremACheck ok = theorem_A_check(fam, big);
    CHECK(ok.accepted);
    for (const auto& row : ok.rows) CHECK(row.margin >= 0.0);

    BoundaryMeasure small = BoundaryMeasure::unit_atom(Angle::from_turns_dyadic(1, 1), 1e-6);
    TheoremACheck bad = theorem_A_check(fam, small);
    CHECK_FALSE(bad.accepted);
}
