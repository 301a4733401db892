#include <cmath>

#include "doctest.h"
#include "nlab/boundary_measures.hpp"
#include "nlab/quadrature.hpp"

using namespace nlab;

TEST_CASE("adaptive quadrature oracles") {
    auto sin_f = [](double t) { return std::sin(t); };
    QuadResult q = adaptive_integrate(sin_f, 0.0, std::numbers::pi, {}, 1e-13);
    CHECK(q.value == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(q.converged);

    // kink at the breakpoint; panels must split there
    auto kink = [](double t) { return std::abs(t - 0.3); };
    QuadResult k = adaptive_integrate(kink, 0.0, 1.0, {0.3}, 1e-13);
    CHECK(k.value == doctest::Approx(0.5 * (0.09 + 0.49)).epsilon(1e-13));

    auto [fine, delta] = integrate_with_refinement_check(sin_f, 0.0, std::numbers::pi, {});
    CHECK(delta <= 1e-12);
    CHECK(fine.value == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("pairwise sum is order-stable and exact on cancelling pairs") {
    std::vector<double> v{1e16, 4.0, -1e16, 4.0};
    CHECK(pairwise_sum(v) == 8.0); // 1e16 +- 4 stays exact, naive L-to-R does not
}

TEST_CASE("Poisson kernel integrates to one") {
    for (double g : {0.5, 0.1, 1e-3, 1e-8}) {
        auto f = [&](double t) { return poisson_kernel(g, 1.0, t); };
        QuadResult q = adaptive_integrate(f, 0.0, TWO_PI, {1.0}, 1e-12, 1e-15);
        CHECK(q.value / TWO_PI == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("harmonic measure closed form against quadrature") {
    DiskPoint z(Angle::from_radians(0.7), LogMagnitude::from_double(0.02));
    for (Arc arc : {Arc{0.7, 0.05}, Arc{0.7 + 1.0, 0.3}, Arc{0.7 + std::numbers::pi, 0.01}}) {
        auto f = [&](double t) { return poisson_kernel(z, t); };
        QuadResult q = adaptive_integrate(f, arc.lo(), arc.hi(), {0.7}, 1e-13, 1e-16);
        CHECK(harmonic_measure(z, arc) == doctest::Approx(q.value / TWO_PI).epsilon(1e-9));
    }
    CHECK(harmonic_measure(z, Arc{0.0, std::numbers::pi}) == 1.0);
    // additivity over a split arc
    double whole = harmonic_measure(z, Arc{1.5, 0.4});
    double parts = harmonic_measure(z, Arc{1.3, 0.2}) + harmonic_measure(z, Arc{1.7, 0.2});
    CHECK(whole == doctest::Approx(parts).epsilon(1e-12));
}

TEST_CASE("Poisson transform conventions") {
    BoundaryMeasure flat = BoundaryMeasure::full_circle(3.0);
    CHECK(flat.total_mass() == doctest::Approx(3.0));
    DiskPoint z(Angle::from_radians(2.0), LogMagnitude::from_double(0.3));
    CHECK(poisson_eval(flat, z) == doctest::Approx(3.0).epsilon(1e-14));

    BoundaryMeasure atom = BoundaryMeasure::unit_atom(Angle::from_radians(0.4), 2.0);
    CHECK(poisson_eval(atom, z) ==
          doctest::Approx(2.0 * poisson_kernel(z, 0.4)).epsilon(1e-14));

    // Herglotz real part is the Poisson integral
    auto h = herglotz_point(Angle::from_radians(0.4), z);
    CHECK(h.real() == doctest::Approx(poisson_kernel(z, 0.4)).epsilon(1e-13));
}

TEST_CASE("measure JSON round trip") {
    BoundaryMeasure m;
    m.atoms.push_back({Angle::from_turns_dyadic(1, 2), 0.5});
    m.arcs.push_back({Arc{1.25, 0.5}, 2.0});
    BoundaryMeasure back = BoundaryMeasure::from_json(m.to_json());
    REQUIRE(back.atoms.size() == 1);
    REQUIRE(back.arcs.size() == 1);
    CHECK(back.atoms[0].angle.same(m.atoms[0].angle));
    CHECK(back.atoms[0].mass == 0.5);
    CHECK(back.arcs[0].arc.center_rad == 1.25);
    CHECK(back.arcs[0].height == 2.0);
}

TEST_CASE("shadow weight height and support") {
    DiskPoint lam(Angle::from_radians(0.9), LogMagnitude::two_pow(-6));
    SmirnovWeightParams params{2.0, 0.6};
    BoundaryMeasure w = make_shadow_weight(lam, params);
    REQUIRE(w.arcs_only());
    double g = std::ldexp(1.0, -6);
    CHECK(w.density_at(0.9) == doctest::Approx(2.0 / (g * 6.0)).epsilon(1e-14));
    CHECK(w.density_at(0.9 + 2.0) == 0.0);
    // shadow precondition: gap must stay below 1/2
    DiskPoint fat(Angle::from_radians(0.0), LogMagnitude::from_double(0.6));
    CHECK_THROWS(make_shadow_weight(fat, params));
    CHECK_THROWS((SmirnovWeightParams{0.5, 0.5}.validate())); // C0 C1 < 1
}

TEST_CASE("quasi-bounded gauge identity for a bounded density") {
    BoundaryMeasure w;
    w.arcs.push_back({Arc{0.0, 0.8}, 1.5});
    std::vector<double> r_grid{0.9, 0.99, 0.999, 0.9999};
    QuasiBoundedReport rep = quasibounded_check(w, GaugeFunction::psi_llog(), r_grid);
    REQUIRE(rep.values.size() == 4);
    CHECK(rep.monotone);
    CHECK(rep.converged);
    CHECK(rep.values.back() == doctest::Approx(rep.boundary_value).epsilon(0.01));
}
