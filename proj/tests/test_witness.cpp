#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "nlab/witness_optimizer.hpp"

using namespace nlab;

TEST_CASE("simplex solves a small textbook LP with a dual certificate") {
    SimplexResult s = simplex_min_ge({{2, 1}, {1, 3}}, {4, 6}, {1, 1});
    REQUIRE(s.optimal);
    CHECK(s.value == doctest::Approx(2.8).epsilon(1e-12));
    CHECK(s.x[0] == doctest::Approx(1.2).epsilon(1e-12));
    CHECK(s.x[1] == doctest::Approx(1.6).epsilon(1e-12));
    // strong duality: b^T y = c^T x
    CHECK(4 * s.dual[0] + 6 * s.dual[1] == doctest::Approx(2.8).epsilon(1e-12));

    SimplexResult inf = simplex_min_ge({{0.0}}, {1.0}, {1.0});
    CHECK(inf.infeasible);
}

TEST_CASE("witness grid is sorted, unique, and covers all member angles") {
    SequenceFamily fam = SequenceFamily::build_nevanlinna(2, 2);
    std::vector<double> grid = build_witness_grid(fam, {});
    CHECK(std::is_sorted(grid.begin(), grid.end()));
    CHECK(std::adjacent_find(grid.begin(), grid.end()) == grid.end());
    for (const FamilyPoint& fp : fam.points()) {
        double a = fp.point.angle.radians();
        bool found = std::any_of(grid.begin(), grid.end(),
                                 [&](double t) { return std::abs(t - a) < 1e-12; });
        CHECK(found);
    }
}

TEST_CASE("minimal dominating mass for the smallest truncation") {
    SequenceFamily fam = SequenceFamily::build_nevanlinna(1, 0);
    WitnessResult w = min_mass_lp(fam, RhsMode::TwinOnly);
    REQUIRE(w.optimal);
    CHECK(w.value == doctest::Approx(0.529258674).epsilon(1e-6));
    CHECK(w.duality_gap <= 1e-9);
    CHECK(w.max_dual_violation <= 1e-9);
    CHECK(w.comp_slack_residual <= 1e-9);
}

TEST_CASE("mass trace grows geometrically with depth") {
    double prev = 0.0;
    for (int N = 2; N <= 3; ++N) {
        SequenceFamily fam = SequenceFamily::build_nevanlinna(N, 6);
        WitnessResult w = min_mass_lp(fam, RhsMode::TwinOnly);
        REQUIRE(w.optimal);
        if (prev > 0) CHECK(w.value / prev >= 1.5);
        prev = w.value;
    }
}

TEST_CASE("kernel sum closed form at depth one") {
    SequenceFamily fam = SequenceFamily::build_smirnov(1);
    KernelSumReport rep = kernel_sum_sup(fam);
    // single A point with gap 1/4; sup sits on its own angle: (2-g)^2
    CHECK(rep.sup == doctest::Approx(3.0625).epsilon(1e-9));
    CHECK(rep.one_dominant_ok);
    CHECK(rep.ratio <= 4.0);
    CHECK(rep.ratio >= 1.0 / 4.0);
}

TEST_CASE("kernel sum stays bounded and grid-stable at depth six") {
    SequenceFamily fam = SequenceFamily::build_smirnov(6);
    KernelSumReport coarse = kernel_sum_sup(fam, 4);
    KernelSumReport fine = kernel_sum_sup(fam, 6);
    CHECK(coarse.sup <= 8.0);
    CHECK(std::abs(fine.sup - coarse.sup) <= 0.10 * coarse.sup);
    CHECK(coarse.one_dominant_ok);
    CHECK(fine.one_dominant_ok);
}

TEST_CASE("fixed-mass weights become infeasible at a finite depth") {
    ContradictionReport c = smirnov_contradiction(5, 2);
    CHECK(c.base_mass == doctest::Approx(0.6235534842883083).epsilon(1e-9));
    CHECK(c.crossing_depth == 3);
    REQUIRE(c.lhs.size() == 5);
    for (int i = 0; i + 1 < 5; ++i) CHECK(c.lhs[i + 1] > c.lhs[i]); // lhs grows
    CHECK(c.lhs[c.crossing_depth - 1] > c.rhs[c.crossing_depth - 1]);
    CHECK(c.lhs[0] < c.rhs[0]);
}
