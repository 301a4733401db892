#include "nlab/peak_builder.hpp"

#include <algorithm>
#include <cmath>

#include "nlab/blaschke_carleson.hpp"
#include "json.hpp"

namespace nlab {

namespace {

// gap-coordinate log rho in plain doubles; the fast quadrature path
double log_rho_double(double s, double alpha, double t, double theta) {
    double sh = std::sin(0.5 * (theta - alpha));
    double cross = 4.0 * (1.0 - s) * (1.0 - t) * sh * sh;
    double d = t - s;
    double num = d * d + cross;
    double den0 = s + t - s * t;
    double den = den0 * den0 + cross;
    if (num <= 0.0) return -std::numeric_limits<double>::infinity();
    return 0.5 * (std::log(num) - std::log(den));
}

} // namespace

LogMagnitude PeakFunction::eval_mod(const SequenceFamily& fam, const DiskPoint& z,
                                    std::size_t pos) const {
    double zg = z.gap_double();
    double zphi = z.angle.radians();
    LogMagnitude m = LogMagnitude::one();
    for (const Factor& f : factors) {
        switch (f.kind) {
            case FactorKind::BlaschkeProduct: {
                m = m * f.interp.scale_mod;
                for (std::size_t i = 0; i < f.interp.zeros.size(); ++i) {
                    LogMagnitude r;
                    if (pos != npos && i < f.zero_pos.size() && f.zero_pos[i] >= 0) {
                        auto zp = static_cast<std::size_t>(f.zero_pos[i]);
                        if (zp == pos) return LogMagnitude::zero();
                        r = fam.member_rho(pos, zp);
                    } else {
                        r = rho(f.interp.zeros[i], z);
                    }
                    if (r.is_zero()) return LogMagnitude::zero();
                    m = m * r;
                }
                if (!f.interp.chain.empty() || f.interp.chain_tail != cplx(1.0)) {
                    double s = f.interp.schur_abs(z.to_complex());
                    if (s == 0.0) return LogMagnitude::zero();
                    m = m * LogMagnitude::from_double(s);
                }
                break;
            }
            case FactorKind::SingleBlaschke: {
                LogMagnitude r;
                if (pos != npos && f.point_pos >= 0) {
                    auto pp = static_cast<std::size_t>(f.point_pos);
                    if (pp == pos) return LogMagnitude::zero();
                    r = fam.member_rho(pos, pp);
                } else {
                    r = rho(f.point, z);
                }
                if (r.is_zero()) return LogMagnitude::zero();
                m = m * r;
                break;
            }
            case FactorKind::HerglotzPointExp:
                m = m * LogMagnitude::from_log_double(poisson_kernel(zg, zphi, f.spike.radians()));
                break;
            case FactorKind::HerglotzMeasureExp:
                m = m * LogMagnitude::from_log_double(poisson_eval(f.measure, zg, zphi));
                break;
            case FactorKind::SquaredTwoPlusG: {
                std::complex<double> gv = herglotz_of_measure(f.measure, zg, zphi);
                m = m * LogMagnitude::from_log_double(2.0 * std::log(std::abs(2.0 + gv)));
                break;
            }
            case FactorKind::Constant:
                if (f.const_mod.is_zero()) return LogMagnitude::zero();
                m = m * f.const_mod;
                break;
        }
    }
    return m;
}

LogMagnitude PeakFunction::eval_mod_member(const SequenceFamily& fam, std::size_t pos) const {
    return eval_mod(fam, fam.at(pos).point, pos);
}

std::complex<double> PeakFunction::eval(std::complex<double> z) const {
    double zg = 1.0 - std::abs(z);
    double zphi = std::arg(z);
    std::complex<double> v = 1.0;
    for (const Factor& f : factors) {
        switch (f.kind) {
            case FactorKind::BlaschkeProduct:
                v *= f.interp.eval(z);
                break;
            case FactorKind::SingleBlaschke:
                v *= blaschke_factor(f.point.to_complex(), z);
                break;
            case FactorKind::HerglotzPointExp:
                v *= std::exp(herglotz_point(f.spike, zg, zphi));
                break;
            case FactorKind::HerglotzMeasureExp:
                v *= std::exp(herglotz_of_measure(f.measure, zg, zphi));
                break;
            case FactorKind::SquaredTwoPlusG: {
                std::complex<double> gv = herglotz_of_measure(f.measure, zg, zphi);
                v *= (2.0 + gv) * (2.0 + gv);
                break;
            }
            case FactorKind::Constant:
                v *= std::polar(f.const_mod.to_double(), f.const_phase);
                break;
        }
    }
    return v;
}

double PeakFunction::log_modulus(double g, double theta) const {
    double acc = 0.0;
    for (const Factor& f : factors) {
        switch (f.kind) {
            case FactorKind::BlaschkeProduct: {
                acc += f.interp.scale_mod.log_double();
                for (const DiskPoint& zr : f.interp.zeros)
                    acc += log_rho_double(zr.gap_double(), zr.angle.radians(), g, theta);
                if (!f.interp.chain.empty() || f.interp.chain_tail != cplx(1.0))
                    acc += std::log(
                        f.interp.schur_abs(std::polar(1.0 - g, theta)));
                break;
            }
            case FactorKind::SingleBlaschke:
                acc += log_rho_double(f.point.gap_double(), f.point.angle.radians(), g, theta);
                break;
            case FactorKind::HerglotzPointExp:
                acc += poisson_kernel(g, theta, f.spike.radians());
                break;
            case FactorKind::HerglotzMeasureExp:
                acc += poisson_eval(f.measure, g, theta);
                break;
            case FactorKind::SquaredTwoPlusG: {
                std::complex<double> gv = herglotz_of_measure(f.measure, g, theta);
                acc += 2.0 * std::log(std::abs(2.0 + gv));
                break;
            }
            case FactorKind::Constant:
                acc += f.const_mod.log_double();
                break;
        }
    }
    return acc;
}

std::vector<double> PeakFunction::boundary_breakpoints() const {
    std::vector<double> b;
    auto push = [&](double a) {
        a = std::remainder(a, TWO_PI);
        if (a < 0) a += TWO_PI;
        b.push_back(a);
    };
    // Herglotz-type factors produce transition shoulders around their singular
    // angles at scales set by the (huge) normalizing constant, far narrower
    // than any uniform panel; a dyadic mesh of edges makes every scale visible
    // to the adaptive integrator
    auto push_mesh = [&](double a) {
        push(a);
        for (int k = 0; k <= 54; ++k) {
            double w = std::ldexp(1.0, -k);
            push(a + w);
            push(a - w);
        }
    };
    push(lambda.angle.radians());
    for (const Factor& f : factors) {
        switch (f.kind) {
            case FactorKind::BlaschkeProduct:
                for (const DiskPoint& zr : f.interp.zeros) push(zr.angle.radians());
                break;
            case FactorKind::SingleBlaschke:
                push(f.point.angle.radians());
                break;
            case FactorKind::HerglotzPointExp:
                push_mesh(f.spike.radians());
                break;
            case FactorKind::HerglotzMeasureExp:
            case FactorKind::SquaredTwoPlusG:
                for (const BoundaryMeasure::Atom& a : f.measure.atoms)
                    push_mesh(a.angle.radians());
                for (const BoundaryMeasure::ArcPiece& p : f.measure.arcs) {
                    push_mesh(p.arc.lo());
                    push_mesh(p.arc.hi());
                    push(p.arc.center_rad);
                }
                break;
            case FactorKind::Constant:
                break;
        }
    }
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
}

namespace {

// phase of a factor at lambda; twin Blaschke factors are handled
// analytically because the double difference collapses
double factor_phase_at(const PeakFunction::Factor& f, const DiskPoint& lam) {
    double g = lam.gap_double();
    double phi = lam.angle.radians();
    switch (f.kind) {
        case PeakFunction::FactorKind::BlaschkeProduct:
            return std::arg(f.interp.eval(lam.to_complex()));
        case PeakFunction::FactorKind::SingleBlaschke:
            if (f.point.angle.same(lam.angle)) {
                // collinear pair: b_a(lam) = e^{i phi} (r_lam - r_a)/(1 - r_a r_lam)
                bool positive = lam.gap.cmp(f.point.gap) < 0;
                return positive ? phi : phi + std::numbers::pi;
            }
            return std::arg(blaschke_factor(f.point.to_complex(), lam.to_complex()));
        case PeakFunction::FactorKind::HerglotzPointExp:
            return herglotz_point(f.spike, g, phi).imag();
        case PeakFunction::FactorKind::HerglotzMeasureExp:
            return herglotz_of_measure(f.measure, g, phi).imag();
        case PeakFunction::FactorKind::SquaredTwoPlusG:
            return 2.0 * std::arg(2.0 + herglotz_of_measure(f.measure, g, phi));
        case PeakFunction::FactorKind::Constant:
            return f.const_phase;
    }
    return 0.0;
}

// append the normalizing constant so f(lambda) = 1 under the member path
void close_with_constant(PeakFunction& f, const SequenceFamily& fam, std::size_t pos) {
    LogMagnitude m = f.eval_mod_member(fam, pos);
    if (m.is_zero()) throw std::domain_error("peak builder: vanishing value at lambda");
    double phase = 0.0;
    for (const PeakFunction::Factor& fc : f.factors) phase += factor_phase_at(fc, f.lambda);
    PeakFunction::Factor c;
    c.kind = PeakFunction::FactorKind::Constant;
    c.const_mod = LogMagnitude::one() / m;
    c.const_phase = -phase;
    f.factors.push_back(std::move(c));
}

PeakFunction::Factor make_side_peak(const SequenceFamily& fam, std::size_t pos,
                                    const std::vector<std::size_t>& side) {
    const DiskPoint& lam = fam.at(pos).point;
    std::vector<DiskPoint> nodes;
    std::vector<std::ptrdiff_t> zp;
    bool lambda_in_side = false;
    for (std::size_t p : side) {
        nodes.push_back(fam.at(p).point);
        if (p == pos)
            lambda_in_side = true;
        else
            zp.push_back(static_cast<std::ptrdiff_t>(p));
    }
    if (!lambda_in_side) nodes.push_back(lam);
    PeakFunction::Factor f;
    f.kind = PeakFunction::FactorKind::BlaschkeProduct;
    f.interp = peak_interpolant(lam, nodes);
    f.zero_pos = std::move(zp);
    return f;
}

PeakFunction build_twin_peak(const SequenceFamily& fam, std::size_t pos,
                             PeakFunction::Factor herglotz, const char* mode) {
    const FamilyPoint& fp = fam.at(pos);
    PointIndex tw = fam.twin(fp.idx);
    std::size_t twin_pos = fam.position(tw);

    PeakFunction f;
    f.lambda = fp.point;
    f.family = fam.family;
    f.mode = mode;

    PointKind other = (fp.idx.kind == PointKind::A) ? PointKind::B : PointKind::A;
    std::vector<std::size_t> own_side = fam.kind_positions(fp.idx.kind);
    std::vector<std::size_t> other_side;
    for (std::size_t p : fam.kind_positions(other))
        if (p != twin_pos) other_side.push_back(p);

    f.factors.push_back(make_side_peak(fam, pos, own_side));
    f.factors.push_back(make_side_peak(fam, pos, other_side));

    PeakFunction::Factor b;
    b.kind = PeakFunction::FactorKind::SingleBlaschke;
    b.point = fam.at(twin_pos).point;
    b.point_pos = static_cast<std::ptrdiff_t>(twin_pos);
    f.factors.push_back(std::move(b));

    f.factors.push_back(std::move(herglotz));
    close_with_constant(f, fam, pos);
    return f;
}

} // namespace

PeakFunction build_peak_nevanlinna(const SequenceFamily& fam, std::size_t pos) {
    if (fam.family != FamilyKind::Nevanlinna)
        throw std::invalid_argument("build_peak_nevanlinna: wrong family");
    PeakFunction::Factor hg;
    hg.kind = PeakFunction::FactorKind::HerglotzPointExp;
    hg.spike = fam.at(pos).point.angle;
    return build_twin_peak(fam, pos, std::move(hg), "nevanlinna");
}

PeakFunction build_peak_smirnov(const SequenceFamily& fam, std::size_t pos,
                                const SmirnovWeightParams& params) {
    if (fam.family != FamilyKind::Smirnov)
        throw std::invalid_argument("build_peak_smirnov: wrong family");
    params.validate();
    PeakFunction::Factor hg;
    hg.kind = PeakFunction::FactorKind::HerglotzMeasureExp;
    hg.measure = make_shadow_weight(fam.at(pos).point, params);
    return build_twin_peak(fam, pos, std::move(hg), "smirnov");
}

double certify_harmonic_constant(const SequenceFamily& fam) {
    if (fam.size() == 0) throw std::invalid_argument("certify_harmonic_constant: empty family");
    double mn = 1.0;
    for (const FamilyPoint& fp : fam.points())
        mn = std::min(mn, harmonic_measure(fp.point, privalov_shadow(fp.point)));
    return 0.9 * mn;
}

SmirnovWeightParams default_smirnov_params(const SequenceFamily& fam) {
    SmirnovWeightParams p;
    p.c1 = certify_harmonic_constant(fam);
    p.c0 = 1.2 / p.c1;
    p.validate();
    return p;
}

NecessityPrecheck necessity_precheck(const SequenceFamily& fam, const BoundaryMeasure& mu) {
    NecessityPrecheck out;
    GaugeFunction phi = GaugeFunction::phi_quad();
    for (std::size_t i = 0; i < fam.size(); ++i) {
        const FamilyPoint& fp = fam.at(i);
        NecessityPrecheck::Row row;
        row.idx = fp.idx;
        row.log_inv_b = -log_B_omit(fam, i).log_double();
        double p = poisson_eval(mu, fp.point);
        std::complex<double> gv = herglotz_of_measure(mu, fp.point);
        row.h_mod = std::abs((2.0 + gv) * (2.0 + gv));
        double le = 1.0 + row.log_inv_b; // log(e/|B|)
        row.h_floor = (1.0 + le) * (1.0 + le);
        row.target = std::exp(-p) / row.h_mod;
        row.garnett_cap = std::exp(-row.log_inv_b) * phi(le);
        row.ok = row.h_mod >= row.h_floor * (1.0 - 1e-12) &&
                 row.target <= row.garnett_cap * (1.0 + 1e-12);
        if (!row.ok) out.accepted = false;
        out.rows.push_back(row);
    }
    return out;
}

PeakFunction build_necessity_peak(const SequenceFamily& fam, std::size_t pos,
                                  const BoundaryMeasure& mu) {
    TheoremACheck cert = theorem_A_check(fam, mu);
    if (!cert.accepted) {
        for (const auto& row : cert.rows)
            if (row.margin < 0.0)
                throw std::domain_error(
                    "build_necessity_peak: certificate rejected, margin " +
                    std::to_string(row.margin) + " at n=" + std::to_string(row.idx.n) +
                    " k=" + std::to_string(row.idx.k) + " m=" + std::to_string(row.idx.m));
    }
    const FamilyPoint& fp = fam.at(pos);

    PeakFunction f;
    f.lambda = fp.point;
    f.family = fam.family;
    f.mode = "necessity";

    std::vector<std::size_t> all(fam.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    PeakFunction::Factor interp = make_side_peak(fam, pos, all);

    double p = poisson_eval(mu, fp.point);
    std::complex<double> gv = herglotz_of_measure(mu, fp.point);
    double h_mod = std::abs((2.0 + gv) * (2.0 + gv));
    // Garnett-sized target at lambda: e^{-P[mu]}/|H|; keeps norm(F) <= C(phi)
    LogMagnitude target = LogMagnitude::from_log_double(-p) / LogMagnitude::from_double(h_mod);
    interp.interp.scale_mod = interp.interp.scale_mod * target;
    interp.interp.norm *= target.to_double();
    f.factors.push_back(std::move(interp));

    PeakFunction::Factor he;
    he.kind = PeakFunction::FactorKind::HerglotzMeasureExp;
    he.measure = mu;
    f.factors.push_back(std::move(he));

    PeakFunction::Factor hh;
    hh.kind = PeakFunction::FactorKind::SquaredTwoPlusG;
    hh.measure = mu;
    f.factors.push_back(std::move(hh));

    close_with_constant(f, fam, pos);
    return f;
}

double necessity_interpolant_norm(const PeakFunction& f) {
    for (const PeakFunction::Factor& fc : f.factors)
        if (fc.kind == PeakFunction::FactorKind::BlaschkeProduct) return fc.interp.norm;
    throw std::invalid_argument("necessity_interpolant_norm: no interpolant factor");
}

std::string PeakFunction::to_json() const {
    nlohmann::json j;
    j["mode"] = mode;
    j["family"] = family == FamilyKind::Nevanlinna ? "nevanlinna" : "smirnov";
    j["lambda"] = {{"angle_rad", lambda.angle.radians()}, {"gap", lambda.gap_double()}};
    j["factors"] = nlohmann::json::array();
    for (const Factor& f : factors) {
        nlohmann::json jf;
        switch (f.kind) {
            case FactorKind::BlaschkeProduct:
                jf["kind"] = "blaschke_product";
                jf["interpolant"] = nlohmann::json::parse(f.interp.to_json());
                break;
            case FactorKind::SingleBlaschke:
                jf["kind"] = "single_blaschke";
                jf["angle_rad"] = f.point.angle.radians();
                jf["gap"] = f.point.gap_double();
                break;
            case FactorKind::HerglotzPointExp:
                jf["kind"] = "herglotz_point_exp";
                jf["spike_rad"] = f.spike.radians();
                break;
            case FactorKind::HerglotzMeasureExp:
                jf["kind"] = "herglotz_measure_exp";
                jf["measure"] = nlohmann::json::parse(f.measure.to_json());
                break;
            case FactorKind::SquaredTwoPlusG:
                jf["kind"] = "squared_two_plus_g";
                jf["measure"] = nlohmann::json::parse(f.measure.to_json());
                break;
            case FactorKind::Constant:
                jf["kind"] = "constant";
                jf["log_mod"] = f.const_mod.log_double();
                jf["phase"] = f.const_phase;
                break;
        }
        j["factors"].push_back(jf);
    }
    return j.dump(2);
}

} // namespace nlab
