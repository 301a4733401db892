#pragma once

// Certificates of non-interpolation: the minimal-mass LP for boundary
// measures dominating the one-point Blaschke bounds, a bounded kernel-sum
// scan over the Smirnov truncation, and the resulting infeasibility-depth
// report.  The LP solver is a self-contained dense two-phase primal simplex
// with a Bland anti-cycling fallback and an emitted dual certificate.

#include <cstddef>
#include <vector>

#include "nlab/dyadic_model.hpp"

namespace nlab {

struct SimplexResult {
    bool optimal = false;
    bool infeasible = false;
    double value = 0.0;
    std::vector<double> x;    // primal solution over the original columns
    std::vector<double> dual; // one multiplier per row, >= 0
    int iterations = 0;
};

// min c^T x  s.t.  A x >= b, x >= 0, with b >= 0
SimplexResult simplex_min_ge(const std::vector<std::vector<double>>& A,
                             const std::vector<double>& b, const std::vector<double>& c,
                             int max_iterations = 200000);

enum class RhsMode { Full, TwinOnly };

struct LpInstance {
    std::vector<double> angles;           // grid columns
    std::vector<double> cost;             // objective coefficient per column
    std::vector<std::vector<double>> rows; // kernel coefficients, one row per member
    std::vector<double> rhs;              // c_lambda per member
    RhsMode mode = RhsMode::TwinOnly;
    bool density = false;                 // columns are cells carrying averaged kernels
};

struct WitnessResult {
    double value = 0.0;
    std::vector<std::pair<double, double>> support; // (angle, mass) of active columns
    std::vector<double> dual;
    double dual_value = 0.0;
    double duality_gap = 0.0;          // relative
    double max_dual_violation = 0.0;   // max(A^T y - c)_j, should be <= tol
    double comp_slack_residual = 0.0;
    bool optimal = false;
    bool grid_warning = false;         // optimum hugging a refinement-zone edge
    std::size_t columns = 0;
    std::size_t constraints = 0;
};

struct WitnessGridOptions {
    int endpoint_depth_extra = 4;   // dyadic endpoints to depth N + extra
    int uniform = 512;
    double refine_factor = 0.25;    // refine around endpoints down to gap_min * factor
};

// angle grid per the construction: dyadic endpoints, geometric refinement
// toward each occupied ray endpoint, uniform fill
std::vector<double> build_witness_grid(const SequenceFamily& fam, const WitnessGridOptions& opt);

LpInstance build_lp_instance(const SequenceFamily& fam, RhsMode mode, bool density,
                             const WitnessGridOptions& opt);

WitnessResult min_mass_lp(const SequenceFamily& fam, RhsMode mode,
                          const WitnessGridOptions& opt = {}, bool density = false);

struct KernelSumReport {
    double sup = 0.0;
    double sup_theta = 0.0;
    double comparison = 0.0; // 4 * sum_{n<=N} 2^-2n
    double ratio = 0.0;      // sup / comparison
    bool one_dominant_ok = true; // per theta at most one (n,k) term above 1
    std::size_t grid_size = 0;
};

// sup over the angle grid of sum over the A side of (1-|a|^2)^2/|a-e^{i t}|^2
KernelSumReport kernel_sum_sup(const SequenceFamily& fam, int depth_extra = 4);

struct ContradictionReport {
    int n_max = 0;
    int base_depth = 0;
    double base_mass = 0.0;          // best feasible weight mass at the base depth
    std::vector<double> lhs;         // per depth: sum of gap-scaled twin bounds
    std::vector<double> sup;         // per depth: kernel_sum_sup
    std::vector<double> rhs;         // sup(N) * base_mass
    int crossing_depth = -1;         // smallest N with lhs > rhs, -1 if none
};

// shows the base-depth weight mass cannot stay feasible as depth grows
ContradictionReport smirnov_contradiction(int n_max, int base_depth = 2,
                                          const WitnessGridOptions& opt = {});

} // namespace nlab
