#include "nlab/interpolation.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace nlab {

namespace {

// (-|a|/a) b_a(z) = (|a|/a)(a-z)/(1 - conj(a) z); positive at z = 0
cplx normalized_blaschke(cplx a, cplx z) {
    double r = std::abs(a);
    if (r == 0.0) return z; // convention: b-hat_0 = z
    return (r / a) * (a - z) / (1.0 - std::conj(a) * z);
}

cplx schur_eval(const std::vector<SchurStep>& chain, cplx tail, cplx z) {
    cplx t = tail;
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
        cplx b = (z - it->node) / (1.0 - std::conj(it->node) * z);
        t = (it->param + b * t) / (1.0 + std::conj(it->param) * b * t);
    }
    return t;
}

} // namespace

cplx BoundedInterpolant::eval(cplx z) const {
    cplx v = std::polar(1.0, scale_phase) * scale_mod.to_double();
    for (const DiskPoint& a : zeros) v *= normalized_blaschke(a.to_complex(), z);
    v *= schur_eval(chain, chain_tail, mobius(recenter, z));
    return v;
}

cplx BoundedInterpolant::eval(const DiskPoint& z) const { return eval(z.to_complex()); }

LogMagnitude BoundedInterpolant::eval_mod(const DiskPoint& z) const {
    LogMagnitude m = scale_mod;
    for (const DiskPoint& a : zeros) {
        LogMagnitude r = rho(a, z);
        if (r.is_zero()) return LogMagnitude::zero();
        m = m * r;
    }
    double s = std::abs(schur_eval(chain, chain_tail, mobius(recenter, z.to_complex())));
    if (s == 0.0) return LogMagnitude::zero();
    return m * LogMagnitude::from_double(s);
}

double BoundedInterpolant::schur_abs(cplx z) const {
    return std::abs(schur_eval(chain, chain_tail, mobius(recenter, z)));
}

bool pick_matrix_psd(const std::vector<cplx>& nodes, const std::vector<cplx>& targets, double c) {
    std::size_t n = nodes.size();
    std::vector<cplx> a(n * n);
    double trace = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            cplx num = c * c - targets[i] * std::conj(targets[j]);
            a[i * n + j] = num / (1.0 - std::conj(nodes[i]) * nodes[j]);
            if (i == j) trace += std::abs(a[i * n + j].real());
        }
    double thr = 1e-12 * std::max(trace, 1e-300);

    // pivoted Cholesky on the Hermitian matrix; PSD iff no pivot < -thr
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    auto at = [&](std::size_t i, std::size_t j) -> cplx& { return a[perm[i] * n + perm[j]]; };
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (at(i, i).real() > at(p, p).real()) p = i;
        std::swap(perm[k], perm[p]);
        double d = at(k, k).real();
        if (d < -thr) return false;
        if (d <= thr) {
            for (std::size_t i = k; i < n; ++i)
                if (at(i, i).real() < -thr) return false;
            return true;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            cplx lik = at(i, k) / d;
            for (std::size_t j = k + 1; j <= i; ++j) {
                cplx v = at(i, j) - lik * std::conj(at(j, k));
                at(i, j) = v;
                if (j != i) at(j, i) = std::conj(v);
            }
        }
    }
    return true;
}

BoundedInterpolant pick_min_norm(const PickProblem& p, const PickOptions& opt) {
    std::size_t n = p.nodes.size();
    if (n == 0) throw std::invalid_argument("pick_min_norm: empty problem");
    if (n != p.targets.size()) throw std::invalid_argument("pick_min_norm: node/target size mismatch");
    if (n > opt.max_nodes) throw std::invalid_argument("pick_min_norm: too many nodes");

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (rho(p.nodes[i], p.nodes[j]).to_double() < opt.coincident_rho)
                throw std::domain_error("pick_min_norm: near-coincident nodes " +
                                        std::to_string(i) + "," + std::to_string(j));

    // recenter when the kernel dynamic range would exceed doubles
    cplx recenter = 0.0;
    {
        double gmin = 2.0, gmax = 0.0;
        cplx mean = 0.0;
        for (const DiskPoint& z : p.nodes) {
            double g = z.gap_double();
            gmin = std::min(gmin, g);
            gmax = std::max(gmax, g);
            mean += z.to_complex();
        }
        if (gmax / std::max(gmin, 1e-300) > 1e30) {
            mean /= static_cast<double>(n);
            double r = std::abs(mean);
            if (r > 1.0 - 1e-9) mean *= (1.0 - 1e-9) / r;
            recenter = mean;
        }
    }
    std::vector<cplx> zs(n);
    for (std::size_t i = 0; i < n; ++i) zs[i] = mobius(recenter, p.nodes[i].to_complex());

    double c_lo = 0.0;
    for (const cplx& v : p.targets) c_lo = std::max(c_lo, std::abs(v));
    BoundedInterpolant out;
    out.recenter = recenter;
    if (c_lo == 0.0) { // zero data
        out.norm = 0.0;
        out.scale_mod = LogMagnitude::zero();
        out.chain_tail = 0.0;
        return out;
    }

    double c_hi = c_lo;
    if (!pick_matrix_psd(zs, p.targets, c_lo * (1.0 + 1e-13))) {
        c_hi = c_lo * 2.0;
        while (!pick_matrix_psd(zs, p.targets, c_hi)) {
            c_hi *= 2.0;
            if (c_hi > 1e300)
                throw std::domain_error("pick_min_norm: minimal norm exceeds double range");
        }
        double lo = c_lo;
        double gap_goal = std::max(1e-9, 0.01 * opt.tol);
        while (c_hi / lo - 1.0 > gap_goal) {
            double mid = std::sqrt(lo * c_hi);
            if (pick_matrix_psd(zs, p.targets, mid))
                c_hi = mid;
            else
                lo = mid;
        }
    }

    // realization: smallest margin above the bracket that reproduces the
    // node values to full accuracy
    auto build_chain = [&](double c, std::vector<SchurStep>& chain) -> bool {
        std::vector<cplx> w(n);
        for (std::size_t i = 0; i < n; ++i) w[i] = p.targets[i] / c;
        std::vector<cplx> zz = zs;
        chain.clear();
        for (std::size_t k = 0; k < n; ++k) {
            cplx param = w[k];
            if (std::abs(param) >= 1.0 - 1e-15) return false;
            chain.push_back({zz[k], param});
            for (std::size_t i = k + 1; i < n; ++i) {
                cplx b = (zz[i] - zz[k]) / (1.0 - std::conj(zz[k]) * zz[i]);
                w[i] = ((w[i] - param) / (1.0 - std::conj(param) * w[i])) / b;
                if (!(std::abs(w[i]) < 1e6)) return false;
            }
        }
        return true;
    };

    double margin = std::max(1e-9, 0.01 * opt.tol);
    std::vector<SchurStep> chain, best_chain;
    double best_resid = std::numeric_limits<double>::infinity(), best_c = c_hi;
    while (margin <= opt.tol * 1.001) {
        double c = c_hi * (1.0 + margin);
        if (build_chain(c, chain)) {
            double resid = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                cplx got = c * schur_eval(chain, 0.0, zs[i]);
                resid = std::max(resid,
                                 std::abs(got - p.targets[i]) / (1.0 + std::abs(p.targets[i])));
            }
            if (resid < best_resid) { best_resid = resid; best_chain = chain; best_c = c; }
            if (resid <= 3e-11) break;
        }
        margin *= 10.0;
    }
    if (best_chain.empty() && !chain.empty()) best_chain = chain;
    if (best_chain.empty())
        throw std::domain_error("pick_min_norm: realization failed near the minimal norm");

    out.norm = best_c;
    out.scale_mod = LogMagnitude::from_double(best_c);
    out.chain = std::move(best_chain);
    out.chain_tail = 0.0;
    return out;
}

BoundedInterpolant peak_interpolant(const DiskPoint& lambda, const std::vector<DiskPoint>& nodes) {
    std::size_t pos = nodes.size();
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].angle.same(lambda.angle) && nodes[i].gap.cmp(lambda.gap) == 0) { pos = i; break; }
    if (pos == nodes.size()) throw std::invalid_argument("peak_interpolant: lambda not among nodes");

    BoundedInterpolant out;
    out.chain_tail = 1.0; // S == 1; all structure sits in the Blaschke prefactor
    LogMagnitude mod = LogMagnitude::one();
    double phase = 0.0;
    cplx lam = lambda.to_complex();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (i == pos) continue;
        out.zeros.push_back(nodes[i]);
        LogMagnitude r = rho(nodes[i], lambda);
        if (r.is_zero()) throw std::domain_error("peak_interpolant: coincident nodes");
        mod = mod * r;
        phase += std::arg(normalized_blaschke(nodes[i].to_complex(), lam));
    }
    out.scale_mod = LogMagnitude::one() / mod;
    out.scale_phase = -phase;
    out.norm = out.scale_mod.to_double();
    return out;
}

std::string BoundedInterpolant::to_json() const {
    nlohmann::json j;
    j["norm"] = norm;
    j["recenter"] = {recenter.real(), recenter.imag()};
    j["scale_log_exp2"] = scale_mod.is_zero() ? nlohmann::json() : nlohmann::json(scale_mod.log().exp2);
    j["scale_log_frac"] = scale_mod.is_zero() ? 0.0 : scale_mod.log().frac.to_double();
    j["scale_zero"] = scale_mod.is_zero();
    j["scale_phase"] = scale_phase;
    j["zeros"] = nlohmann::json::array();
    for (const DiskPoint& z : zeros) {
        nlohmann::json jz;
        jz["angle_rad"] = z.angle.radians();
        jz["log_gap_exp2"] = z.gap.log().exp2;
        jz["log_gap_frac"] = z.gap.log().frac.to_double();
        j["zeros"].push_back(jz);
    }
    j["chain"] = nlohmann::json::array();
    for (const SchurStep& s : chain)
        j["chain"].push_back({s.node.real(), s.node.imag(), s.param.real(), s.param.imag()});
    j["chain_tail"] = {chain_tail.real(), chain_tail.imag()};
    return j.dump(2);
}

BoundedInterpolant BoundedInterpolant::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    BoundedInterpolant b;
    b.norm = j["norm"].get<double>();
    b.recenter = {j["recenter"][0].get<double>(), j["recenter"][1].get<double>()};
    if (j["scale_zero"].get<bool>()) {
        b.scale_mod = LogMagnitude::zero();
    } else {
        SignedLog l;
        l.exp2 = j["scale_log_exp2"].get<std::int64_t>();
        l.frac = DD(j["scale_log_frac"].get<double>());
        b.scale_mod = LogMagnitude::from_log(l);
    }
    b.scale_phase = j["scale_phase"].get<double>();
    for (const auto& jz : j["zeros"]) {
        SignedLog l;
        l.exp2 = jz["log_gap_exp2"].get<std::int64_t>();
        l.frac = DD(jz["log_gap_frac"].get<double>());
        b.zeros.emplace_back(Angle::from_radians(jz["angle_rad"].get<double>()),
                             LogMagnitude::from_log(l));
    }
    for (const auto& js : j["chain"])
        b.chain.push_back({{js[0].get<double>(), js[1].get<double>()},
                           {js[2].get<double>(), js[3].get<double>()}});
    b.chain_tail = {j["chain_tail"][0].get<double>(), j["chain_tail"][1].get<double>()};
    return b;
}

} // namespace nlab
