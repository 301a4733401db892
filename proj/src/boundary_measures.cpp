#include "nlab/boundary_measures.hpp"

#include <algorithm>
#include <cmath>

#include "nlab/quadrature.hpp"
#include "json.hpp"

namespace nlab {

namespace {

// |z - e^{i theta}|^2 for z = (1-g) e^{i phi}, written through the gap so
// nothing cancels for g near 0
double chord_sq(double g, double dtheta) {
    double sh = std::sin(0.5 * dtheta);
    return g * g + 4.0 * (1.0 - g) * sh * sh;
}

} // namespace

double BoundaryMeasure::total_mass() const {
    std::vector<double> parts;
    for (const Atom& a : atoms) parts.push_back(a.mass);
    for (const ArcPiece& p : arcs) parts.push_back(p.height * p.arc.length() / TWO_PI);
    return pairwise_sum(parts);
}

double BoundaryMeasure::density_at(double theta) const {
    double h = 0.0;
    for (const ArcPiece& p : arcs)
        if (p.arc.contains(theta)) h += p.height;
    return h;
}

double poisson_kernel(double g, double phi, double theta) {
    return g * (2.0 - g) / chord_sq(g, theta - phi);
}

double poisson_kernel(const DiskPoint& z, double theta) {
    return poisson_kernel(z.gap_double(), z.angle.radians(), theta);
}

double harmonic_measure(double g, double phi, const Arc& arc) {
    if (arc.full_circle()) return 1.0;
    double r = 1.0 - g;
    // antiderivative G(D) = (D + 2 atan(a(D))) / 2pi with
    // a(D) = r sin D / (2 sin^2(D/2) + g cos D); smooth, no branch cuts
    auto a_of = [&](double D) {
        double sh = std::sin(0.5 * D);
        return r * std::sin(D) / (2.0 * sh * sh + g * std::cos(D));
    };
    double d1 = std::remainder(arc.lo() - phi, TWO_PI);
    double L = arc.length();
    double d2 = d1 + L;
    double a1 = a_of(d1);
    double a2 = a_of(d2);
    double closed = (L + 2.0 * (std::atan(a2) - std::atan(a1))) / TWO_PI;
    // Far from the spike the closed form is a tiny difference of O(1) terms;
    // there the kernel is smooth on the arc, so certified quadrature keeps
    // full relative accuracy instead.
    bool spike_inside = (d1 <= 1e-9 && d2 >= -1e-9) || d2 >= TWO_PI - 1e-9;
    if (!spike_inside && closed < 1e-6) {
        auto kernel = [&](double D) {
            double sh = std::sin(0.5 * D);
            return g * (2.0 - g) / (g * g + 4.0 * (1.0 - g) * sh * sh);
        };
        QuadResult q = adaptive_integrate(kernel, d1, d2, {}, 1e-13);
        return q.value / TWO_PI;
    }
    return closed;
}

double harmonic_measure(const DiskPoint& z, const Arc& arc) {
    return harmonic_measure(z.gap_double(), z.angle.radians(), arc);
}

double poisson_eval(const BoundaryMeasure& mu, double g, double phi) {
    std::vector<double> parts;
    for (const BoundaryMeasure::Atom& a : mu.atoms)
        parts.push_back(a.mass * g * (2.0 - g) / chord_sq(g, phi - a.angle.radians()));
    for (const BoundaryMeasure::ArcPiece& p : mu.arcs)
        parts.push_back(p.height * harmonic_measure(g, phi, p.arc));
    return pairwise_sum(parts);
}

double poisson_eval(const BoundaryMeasure& mu, const DiskPoint& z) {
    return poisson_eval(mu, z.gap_double(), z.angle.radians());
}

std::complex<double> herglotz_point(const Angle& lambda_star, double g, double phi) {
    double r = 1.0 - g;
    double d = phi - lambda_star.radians();
    // (lambda* + z)/(lambda* - z) with the common phase factored out:
    //   num = 1 + r e^{iD},  den = 1 - r e^{iD}
    double sh = std::sin(0.5 * d);
    std::complex<double> num(1.0 + r * std::cos(d), r * std::sin(d));
    std::complex<double> den(2.0 * sh * sh + g * std::cos(d), -r * std::sin(d));
    return num / den;
}

std::complex<double> herglotz_point(const Angle& lambda_star, const DiskPoint& z) {
    return herglotz_point(lambda_star, z.gap_double(), z.angle.radians());
}

std::complex<double> herglotz_of_density(const BoundaryMeasure& w, double g, double phi) {
    if (!w.arcs_only()) throw std::invalid_argument("herglotz_of_density: arcs-only measure required");
    std::vector<double> re_parts, im_parts;
    for (const BoundaryMeasure::ArcPiece& p : w.arcs) {
        re_parts.push_back(p.height * harmonic_measure(g, phi, p.arc));
        if (p.arc.full_circle()) continue; // conjugate part integrates to 0
        // conjugate-kernel antiderivative: -(1/2pi) log|e^{i t} - z|^2
        double ca = chord_sq(g, p.arc.lo() - phi);
        double cb = chord_sq(g, p.arc.hi() - phi);
        double ld;
        if (std::abs(cb - ca) < 0.5 * cb)
            ld = std::log1p((ca - cb) / cb);
        else
            ld = std::log(ca / cb);
        im_parts.push_back(p.height * ld / (2.0 * TWO_PI));
    }
    return {pairwise_sum(re_parts), pairwise_sum(im_parts)};
}

std::complex<double> herglotz_of_density(const BoundaryMeasure& w, const DiskPoint& z) {
    return herglotz_of_density(w, z.gap_double(), z.angle.radians());
}

std::complex<double> herglotz_of_measure(const BoundaryMeasure& mu, double g, double phi) {
    std::complex<double> v = 0.0;
    if (!mu.arcs.empty()) {
        BoundaryMeasure arcs_part;
        arcs_part.arcs = mu.arcs;
        v = herglotz_of_density(arcs_part, g, phi);
    }
    for (const BoundaryMeasure::Atom& a : mu.atoms)
        v += a.mass * herglotz_point(a.angle, g, phi);
    return v;
}

std::complex<double> herglotz_of_measure(const BoundaryMeasure& mu, const DiskPoint& z) {
    return herglotz_of_measure(mu, z.gap_double(), z.angle.radians());
}

BoundaryMeasure make_shadow_weight(const DiskPoint& lambda, const SmirnovWeightParams& params) {
    params.validate();
    double g = lambda.gap_double();
    if (!(g < 0.5)) throw std::invalid_argument("make_shadow_weight: gap(lambda) must be < 1/2");
    double height = params.c0 / (g * std::log2(1.0 / g));
    BoundaryMeasure w;
    w.arcs.push_back({privalov_shadow(lambda), height});
    return w;
}

QuasiBoundedReport quasibounded_check(const BoundaryMeasure& w, const GaugeFunction& psi,
                                      const std::vector<double>& r_grid) {
    if (!w.arcs_only()) throw std::invalid_argument("quasibounded_check: arcs-only measure required");
    if (!psi.in_class_F() && psi.tag != GaugeFunction::Tag::Identity)
        throw std::invalid_argument("quasibounded_check: gauge not in class F");
    QuasiBoundedReport rep;
    rep.r_grid = r_grid;

    std::vector<double> breaks;
    for (const BoundaryMeasure::ArcPiece& p : w.arcs) {
        breaks.push_back(std::remainder(p.arc.lo(), TWO_PI));
        breaks.push_back(std::remainder(p.arc.hi(), TWO_PI));
        breaks.push_back(p.arc.center_rad);
    }
    for (double& b : breaks)
        if (b < 0) b += TWO_PI;

    for (double r : r_grid) {
        if (!(r >= 0.0 && r < 1.0)) throw std::invalid_argument("quasibounded_check: r must be in [0,1)");
        DiskPoint z0(Angle::from_radians(0.0), LogMagnitude::from_double(1.0 - r));
        auto f = [&](double theta) {
            DiskPoint z(Angle::from_radians(theta), z0.gap);
            return psi(poisson_eval(w, z));
        };
        auto [q, delta] = integrate_with_refinement_check(f, 0.0, TWO_PI, breaks, 1e-11,
                                                          std::max(1e-13, (1.0 - r) * 1e-3));
        rep.values.push_back(q.value / TWO_PI);
        rep.quad_error = std::max(rep.quad_error, delta / TWO_PI);
        if (!q.converged) rep.converged = false;
    }
    for (std::size_t i = 1; i < rep.values.size(); ++i)
        if (rep.values[i] + 1e-9 * (1.0 + std::abs(rep.values[i])) < rep.values[i - 1])
            rep.monotone = false;

    // boundary value: piecewise-constant density integrated exactly
    std::vector<std::pair<double, double>> events; // (angle, height delta)
    for (const BoundaryMeasure::ArcPiece& p : w.arcs) {
        double lo = std::remainder(p.arc.lo(), TWO_PI);
        double hi = std::remainder(p.arc.hi(), TWO_PI);
        if (lo < 0) lo += TWO_PI;
        if (hi < 0) hi += TWO_PI;
        if (p.arc.full_circle()) { lo = 0.0; hi = TWO_PI; }
        if (lo <= hi) {
            events.push_back({lo, p.height});
            events.push_back({hi, -p.height});
        } else { // wraps through 0
            events.push_back({0.0, p.height});
            events.push_back({hi, -p.height});
            events.push_back({lo, p.height});
            events.push_back({TWO_PI, -p.height});
        }
    }
    events.push_back({0.0, 0.0});
    events.push_back({TWO_PI, 0.0});
    std::sort(events.begin(), events.end());
    std::vector<double> parts;
    double h = 0.0;
    for (std::size_t i = 0; i + 1 < events.size(); ++i) {
        h += events[i].second;
        double len = events[i + 1].first - events[i].first;
        if (len > 0) parts.push_back(psi(h) * len / TWO_PI);
    }
    rep.boundary_value = pairwise_sum(parts);
    return rep;
}

std::string BoundaryMeasure::to_json() const {
    nlohmann::json j;
    j["atoms"] = nlohmann::json::array();
    for (const Atom& a : atoms) {
        nlohmann::json ja;
        if (a.angle.dyadic) {
            ja["angle_turns_num"] = a.angle.num;
            ja["angle_turns_den_exp"] = a.angle.den_exp;
        } else {
            ja["angle_rad"] = a.angle.radians();
        }
        ja["mass"] = a.mass;
        j["atoms"].push_back(ja);
    }
    j["arcs"] = nlohmann::json::array();
    for (const ArcPiece& p : arcs)
        j["arcs"].push_back({{"center_rad", p.arc.center_rad},
                             {"halfwidth_rad", p.arc.half_width},
                             {"height", p.height}});
    return j.dump(2);
}

BoundaryMeasure BoundaryMeasure::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    BoundaryMeasure m;
    for (const auto& ja : j.value("atoms", nlohmann::json::array())) {
        Angle a = ja.contains("angle_turns_num")
                      ? Angle::from_turns_dyadic(ja["angle_turns_num"].get<std::int64_t>(),
                                                 ja["angle_turns_den_exp"].get<int>())
                      : Angle::from_radians(ja["angle_rad"].get<double>());
        m.atoms.push_back({a, ja["mass"].get<double>()});
    }
    for (const auto& jp : j.value("arcs", nlohmann::json::array()))
        m.arcs.push_back({Arc{jp["center_rad"].get<double>(), jp["halfwidth_rad"].get<double>()},
                          jp["height"].get<double>()});
    return m;
}

} // namespace nlab
