#pragma once

// Blaschke products with one factor omitted, separation minima, Blaschke
// sums and dyadic Carleson-box norms for the constructed families.

#include <optional>
#include <vector>

#include "nlab/boundary_measures.hpp"
#include "nlab/dyadic_model.hpp"

namespace nlab {

struct CarlesonReport {
    double norm = 0.0; // sup over scanned boxes of nu(Q)/|I|
    std::optional<CarlesonBox> argmax;
    int depth_scanned = 0;
    double blaschke_sum = 0.0;       // sum of gaps over the scanned subset
    LogMagnitude min_sep;            // minimum pairwise rho (zero if < 2 points)
};

struct LogBOmit {
    SignedLog value;        // log|B_lambda(lambda)| of the truncated family, < 0
    double tail_bound = 0.0; // certified bound on the omitted radial tails (log units)

    double log_double() const { return value.to_double(); }
};

// log of the one-factor-omitted Blaschke product at the member itself,
// summed in fixed index order; twin factor resolved through the exact offset
LogBOmit log_B_omit(const SequenceFamily& fam, std::size_t pos);
LogBOmit log_B_omit(const SequenceFamily& fam, const PointIndex& idx);

// Dyadic Carleson-box scan of nu = sum gap * delta_point over the given
// member subset (defaults to all members)
CarlesonReport carleson_norm(const SequenceFamily& fam, int max_depth,
                             const std::vector<std::size_t>* subset = nullptr);

LogMagnitude min_separation(const SequenceFamily& fam);

// Accumulated Blaschke sum over the Nevanlinna A family, with the analytic
// per-ray radial tail (m -> infinity) optionally included.
double nevanlinna_blaschke_sum(int n_gen, int m_extra, bool with_tails);

struct TheoremACheck {
    struct Row {
        PointIndex idx;
        double p_mu = 0.0;       // P[mu](lambda)
        double log_inv_b = 0.0;  // log 1/|B_lambda(lambda)|
        double margin = 0.0;     // p_mu - log_inv_b
        double tail_bound = 0.0;
    };
    std::vector<Row> rows;
    bool accepted = true; // all margins >= 0
};

TheoremACheck theorem_A_check(const SequenceFamily& fam, const BoundaryMeasure& cert);

} // namespace nlab
