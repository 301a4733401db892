#pragma once

// Finite positive measures on the circle (atoms + piecewise-constant arc
// densities), their Poisson and Herglotz transforms, the Privalov-shadow
// weights, and the quasi-bounded gauge check.

#include <complex>
#include <string>
#include <vector>

#include "nlab/disk_geom.hpp"

namespace nlab {

struct GaugeFunction {
    enum class Tag { PsiLLog, PhiQuad, Identity };
    Tag tag = Tag::PsiLLog;

    // psi(t) = (1+t) log(1+t): convex, increasing, superlinear (class F)
    // phi(t) = (1+t)^-2:       decreasing, integrable
    double operator()(double t) const {
        switch (tag) {
            case Tag::PsiLLog: return (1.0 + t) * std::log1p(t);
            case Tag::PhiQuad: { double u = 1.0 + t; return 1.0 / (u * u); }
            case Tag::Identity: return t;
        }
        return t;
    }
    bool in_class_F() const { return tag == Tag::PsiLLog; }
    static GaugeFunction psi_llog() { return {Tag::PsiLLog}; }
    static GaugeFunction phi_quad() { return {Tag::PhiQuad}; }
    static GaugeFunction identity() { return {Tag::Identity}; }
};

struct BoundaryMeasure {
    struct Atom {
        Angle angle;
        double mass = 0.0;
    };
    struct ArcPiece {
        Arc arc;
        double height = 0.0;
    };
    std::vector<Atom> atoms;
    std::vector<ArcPiece> arcs;

    double total_mass() const;
    bool arcs_only() const { return atoms.empty(); }
    // density value at angle theta (arcs only)
    double density_at(double theta) const;

    std::string to_json() const;
    static BoundaryMeasure from_json(const std::string& text);

    static BoundaryMeasure full_circle(double height) {
        BoundaryMeasure m;
        m.arcs.push_back({Arc{0.0, std::numbers::pi}, height});
        return m;
    }
    static BoundaryMeasure unit_atom(Angle a, double mass = 1.0) {
        BoundaryMeasure m;
        m.atoms.push_back({a, mass});
        return m;
    }
};

struct SmirnovWeightParams {
    double c0 = 0.0; // weight height constant
    double c1 = 0.0; // certified harmonic-measure lower constant
    void validate() const {
        if (!(c0 > 0.0) || !(c1 > 0.0) || c0 * c1 < 1.0)
            throw std::invalid_argument("SmirnovWeightParams: need C0,C1 > 0 with C0*C1 >= 1");
    }
};

// Poisson kernel (1-|z|^2)/|z-e^{i theta}|^2, gap-stable; z = (1-g) e^{i phi}
double poisson_kernel(double g, double phi, double theta);
double poisson_kernel(const DiskPoint& z, double theta);

// Harmonic measure of an arc seen from z (closed-form antiderivative).
double harmonic_measure(double g, double phi, const Arc& arc);
double harmonic_measure(const DiskPoint& z, const Arc& arc);

// P[mu](z); atoms in closed form, arcs via the arctan antiderivative
double poisson_eval(const BoundaryMeasure& mu, double g, double phi);
double poisson_eval(const BoundaryMeasure& mu, const DiskPoint& z);

// (lambda* + z)/(lambda* - z), the Herglotz kernel of a unit boundary atom
std::complex<double> herglotz_point(const Angle& lambda_star, double g, double phi);
std::complex<double> herglotz_point(const Angle& lambda_star, const DiskPoint& z);

// Herglotz transform of an arcs-only density, d theta/2pi normalization
std::complex<double> herglotz_of_density(const BoundaryMeasure& w, double g, double phi);
std::complex<double> herglotz_of_density(const BoundaryMeasure& w, const DiskPoint& z);

// Herglotz transform of a general measure (atoms + arc densities)
std::complex<double> herglotz_of_measure(const BoundaryMeasure& mu, double g, double phi);
std::complex<double> herglotz_of_measure(const BoundaryMeasure& mu, const DiskPoint& z);

// w_lambda = C0 / ((1-|lambda|) log2(1/(1-|lambda|))) on the Privalov shadow
BoundaryMeasure make_shadow_weight(const DiskPoint& lambda, const SmirnovWeightParams& params);

struct QuasiBoundedReport {
    std::vector<double> r_grid;
    std::vector<double> values;       // integral of psi[P[w](r e^{i t})] dt/2pi
    double boundary_value = 0.0;      // integral of psi[w] dt/2pi
    bool monotone = true;
    bool converged = true;
    double quad_error = 0.0;
};

QuasiBoundedReport quasibounded_check(const BoundaryMeasure& w, const GaugeFunction& psi,
                                      const std::vector<double>& r_grid);

} // namespace nlab
