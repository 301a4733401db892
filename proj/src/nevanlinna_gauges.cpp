#include "nlab/nevanlinna_gauges.hpp"

#include <cmath>
#include <stdexcept>

#include "nlab/quadrature.hpp"

namespace nlab {

GaugeValue circle_mean(const std::function<double(double)>& log_mod,
                       const GaugeFunction& gauge, const std::vector<double>& breakpoints,
                       double rel_tol) {
    auto integrand = [&](double theta) { return gauge(log1p_exp(log_mod(theta))); };
    auto [q, delta] = integrate_with_refinement_check(integrand, 0.0, TWO_PI, breakpoints,
                                                      rel_tol, 1e-13);
    GaugeValue v;
    v.value = q.value / TWO_PI;
    // refinement change of the mean, relative to its scale floored at one:
    // means far below the integrator's absolute budget are noise-level zero
    // and their own magnitude is not a meaningful yardstick
    v.self_conv = delta / TWO_PI / std::max(1.0, std::abs(v.value));
    v.converged = q.converged;
    return v;
}

namespace {

GaugeValue peak_mean(const PeakFunction& f, const GaugeFunction& gauge, double r,
                     double rel_tol) {
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("circle mean: r must be in (0,1)");
    double g = 1.0 - r;
    auto log_mod = [&f, g](double theta) { return f.log_modulus(g, theta); };
    return circle_mean(log_mod, gauge, f.boundary_breakpoints(), rel_tol);
}

} // namespace

GaugeValue circle_mean_log1p(const PeakFunction& f, double r, double rel_tol) {
    return peak_mean(f, GaugeFunction::identity(), r, rel_tol);
}

GaugeValue circle_mean_psi(const PeakFunction& f, const GaugeFunction& psi, double r,
                           double rel_tol) {
    return peak_mean(f, psi, r, rel_tol);
}

RadialEstimate radial_limit_estimate(const std::vector<double>& ladder) {
    if (ladder.size() < 4)
        throw std::invalid_argument("radial_limit_estimate: need at least 4 ladder values");
    RadialEstimate e;
    std::size_t n = ladder.size();
    e.limit = ladder[n - 1];
    e.last_increment = ladder[n - 1] - ladder[n - 2];
    e.error_bar = 2.0 * std::abs(e.last_increment);
    double prev_inc = ladder[n - 2] - ladder[n - 3];
    if (std::abs(e.last_increment) > std::abs(prev_inc) * (1.0 + 1e-12)) e.cauchy = false;
    return e;
}

GaugeReport gauge_ladder(const PeakFunction& f, const GaugeFunction& gauge, int j_max,
                         double rel_tol) {
    if (j_max < 1) throw std::invalid_argument("gauge_ladder: j_max must be >= 1");
    GaugeReport rep;
    for (int j = 1; j <= j_max; ++j) {
        double r = 1.0 - std::ldexp(1.0, -j);
        GaugeValue v = peak_mean(f, gauge, r, rel_tol);
        rep.ladder_j.push_back(j);
        rep.values.push_back(v.value);
        rep.self_conv.push_back(v.self_conv);
        if (!v.converged) rep.converged = false;
    }
    if (rep.values.size() >= 4) rep.estimate = radial_limit_estimate(rep.values);
    return rep;
}

} // namespace nlab
