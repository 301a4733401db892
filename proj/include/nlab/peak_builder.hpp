#pragma once

// Assembly of peak functions over the constructed families: products of
// finite Blaschke interpolants, a twin Blaschke factor, Herglotz
// exponentials, and a log-domain normalizing constant, with both an exact
// member-aware evaluation path and a fast double path for quadrature.

#include <complex>
#include <string>
#include <vector>

#include "nlab/boundary_measures.hpp"
#include "nlab/dyadic_model.hpp"
#include "nlab/interpolation.hpp"

namespace nlab {

class PeakFunction {
public:
    enum class FactorKind {
        BlaschkeProduct,    // finite product, structural zeros with family positions
        SingleBlaschke,     // one factor b_a, a tracked as a family member
        HerglotzPointExp,   // exp(g), g = (lambda*+z)/(lambda*-z)
        HerglotzMeasureExp, // exp(g), g = Herglotz transform of a measure
        SquaredTwoPlusG,    // (2+g)^2 with g from a full measure
        Constant,           // c, modulus in log domain
    };

    struct Factor {
        FactorKind kind = FactorKind::Constant;
        BoundedInterpolant interp;                // BlaschkeProduct
        std::vector<std::ptrdiff_t> zero_pos;     // family position per zero, -1 if foreign
        DiskPoint point;                          // SingleBlaschke zero
        std::ptrdiff_t point_pos = -1;
        Angle spike;                              // HerglotzPointExp
        BoundaryMeasure measure;                  // Herglotz* / SquaredTwoPlusG
        LogMagnitude const_mod = LogMagnitude::one();
        double const_phase = 0.0;
    };

    std::vector<Factor> factors;
    DiskPoint lambda;
    FamilyKind family = FamilyKind::Nevanlinna;
    std::string mode; // "nevanlinna" | "smirnov" | "necessity"

    // exact path: log|f(z)| with the family resolving twin-level separations;
    // pos is z's position in fam, or npos for foreign points
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    LogMagnitude eval_mod(const SequenceFamily& fam, const DiskPoint& z,
                          std::size_t pos = npos) const;
    LogMagnitude eval_mod_member(const SequenceFamily& fam, std::size_t pos) const;

    // complex evaluation in double range (interior audits)
    std::complex<double> eval(std::complex<double> z) const;

    // fast double path for circle integrals, z = (1-g) e^{i theta}
    double log_modulus(double g, double theta) const;

    // angles where |f| or its derivatives spike; quadrature panel seeds
    std::vector<double> boundary_breakpoints() const;

    std::string to_json() const;
};

// f = c P^A P^B b_twin exp(g_point); lambda must be a family member
PeakFunction build_peak_nevanlinna(const SequenceFamily& fam, std::size_t pos);

// as above with exp(g) the Herglotz transform of the Privalov-shadow weight
PeakFunction build_peak_smirnov(const SequenceFamily& fam, std::size_t pos,
                                const SmirnovWeightParams& params);

// 0.9 x the minimum over members of the harmonic measure of their own
// shadow arc; the certified constant behind the shadow-weight bound
double certify_harmonic_constant(const SequenceFamily& fam);
SmirnovWeightParams default_smirnov_params(const SequenceFamily& fam);

struct NecessityPrecheck {
    struct Row {
        PointIndex idx;
        double log_inv_b = 0.0; // log 1/|B_lambda(lambda)|
        double h_mod = 0.0;     // |H(lambda)|
        double h_floor = 0.0;   // (1 + log(e/|B|))^2
        double target = 0.0;    // e^{-P[mu]}/|H|
        double garnett_cap = 0.0; // |B| phi(log(e/|B|))
        bool ok = true;
    };
    std::vector<Row> rows;
    bool accepted = true;
};

NecessityPrecheck necessity_precheck(const SequenceFamily& fam, const BoundaryMeasure& mu);

// f = F e^g H with H = (2+g)^2, g the Herglotz transform of mu, and F the
// minimal-norm interpolant hitting e^{-P[mu](lambda)}/|H(lambda)| at lambda
// and 0 at the other members; requires an accepted certificate
PeakFunction build_necessity_peak(const SequenceFamily& fam, std::size_t pos,
                                  const BoundaryMeasure& mu);

// norm of the minimal-norm interpolant inside a necessity peak
double necessity_interpolant_norm(const PeakFunction& f);

} // namespace nlab
