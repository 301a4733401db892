#pragma once

// Circle means of log(1+|f|) and psi[log(1+|f|)] over radii climbing a
// dyadic ladder toward the boundary, with quadrature self-convergence
// certificates and a deliberately conservative radial limit estimate.

#include <functional>
#include <vector>

#include "nlab/boundary_measures.hpp"
#include "nlab/peak_builder.hpp"

namespace nlab {

struct GaugeValue {
    double value = 0.0;
    double self_conv = 0.0; // relative change under a 16x tighter tolerance
    bool converged = true;
};

// core mean: integral of gauge(log1p_exp(log_mod(theta))) dtheta/2pi
GaugeValue circle_mean(const std::function<double(double)>& log_mod,
                       const GaugeFunction& gauge, const std::vector<double>& breakpoints,
                       double rel_tol = 1e-10);

GaugeValue circle_mean_log1p(const PeakFunction& f, double r, double rel_tol = 1e-10);
GaugeValue circle_mean_psi(const PeakFunction& f, const GaugeFunction& psi, double r,
                           double rel_tol = 1e-10);

struct RadialEstimate {
    double limit = 0.0;          // last ladder value; no extrapolation beyond data
    double error_bar = 0.0;      // 2 x |last increment|
    double last_increment = 0.0;
    bool cauchy = true;          // increments not growing at the tail
};

// ladder values ordered by increasing r
RadialEstimate radial_limit_estimate(const std::vector<double>& ladder);

struct GaugeReport {
    std::vector<int> ladder_j;       // r_j = 1 - 2^-j
    std::vector<double> values;
    std::vector<double> self_conv;
    bool converged = true;
    RadialEstimate estimate;
};

GaugeReport gauge_ladder(const PeakFunction& f, const GaugeFunction& gauge, int j_max,
                         double rel_tol = 1e-10);

} // namespace nlab
