#pragma once

// Finite bounded-analytic interpolation: minimal-norm solves by bisection
// over positive semidefiniteness of the Pick matrix, realized as a Schur
// parameter chain, with structural Blaschke zeros for peak-type data.

#include <complex>
#include <string>
#include <vector>

#include "nlab/disk_geom.hpp"

namespace nlab {

using cplx = std::complex<double>;

struct PickProblem {
    std::vector<DiskPoint> nodes;
    std::vector<cplx> targets;
};

struct SchurStep {
    cplx node;  // interpolation node z_k
    cplx param; // Schur parameter w_k, |w_k| < 1
};

class BoundedInterpolant {
public:
    double norm = 0.0;            // certified sup-norm bound
    cplx recenter = 0.0;          // evaluation goes through mobius(recenter, z)

    // f(z)/norm = [prod_k b-hat_{zero_k}(z)] * scale * S(mobius(recenter,z)),
    // with S the Schur chain and b-hat the (-|a|/a) b_a normalized factor.
    std::vector<DiskPoint> zeros; // structural zeros (exact)
    LogMagnitude scale_mod;       // |scale|; log-domain, may be huge
    double scale_phase = 0.0;
    std::vector<SchurStep> chain;
    cplx chain_tail = 0.0;        // final constant Schur function

    cplx eval(const DiskPoint& z) const;
    cplx eval(cplx z) const;
    // log-modulus split: |f(z)| = exp(result) unless the zero flag is set
    LogMagnitude eval_mod(const DiskPoint& z) const;
    // |S(mobius(recenter, z))|, the chain part alone
    double schur_abs(cplx z) const;

    std::string to_json() const;
    static BoundedInterpolant from_json(const std::string& text);
};

struct PickOptions {
    double tol = 1e-6;            // relative width of the norm bracket
    std::size_t max_nodes = 2000;
    double coincident_rho = 1e-13; // below this the PSD check is deemed ill-conditioned
};

// Minimal-norm interpolant; norm lands in [c*, c*(1+tol)].
BoundedInterpolant pick_min_norm(const PickProblem& p, const PickOptions& opt = {});

// Peak data (1 at lambda, 0 elsewhere): zeros imposed structurally, the
// normalizing value computed in log domain.
BoundedInterpolant peak_interpolant(const DiskPoint& lambda, const std::vector<DiskPoint>& nodes);

// PSD probe used by the bisection; exposed for the certification tests.
bool pick_matrix_psd(const std::vector<cplx>& nodes, const std::vector<cplx>& targets, double c);

} // namespace nlab
