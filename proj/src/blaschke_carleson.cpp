#include "nlab/blaschke_carleson.hpp"

#include <cmath>
#include <map>

#include "nlab/quadrature.hpp"

namespace nlab {

LogBOmit log_B_omit(const SequenceFamily& fam, std::size_t pos) {
    if (pos >= fam.size()) throw std::out_of_range("log_B_omit: bad position");
    SignedLog total{}; // empty product = 1 when |family| = 1
    for (std::size_t j = 0; j < fam.size(); ++j) {
        if (j == pos) continue;
        LogMagnitude r = fam.member_rho(pos, j);
        if (r.is_zero()) throw std::domain_error("log_B_omit: coincident family points");
        total = total + r.log();
    }
    LogBOmit out;
    out.value = total;

    // Certified bound on the radial levels dropped by the truncation: on each
    // ray with deepest included level M, every omitted pair (a,b) at level
    // m' > M satisfies log(1/rho(lambda,a)) <= 4*2^-m'/gap(lambda) and
    // log(1/rho(lambda,b)) <= 8*2^-m'/gap(lambda); the geometric sum gives
    // 12*2^-M/gap per ray.
    if (fam.family == FamilyKind::Nevanlinna) {
        double inv_gap = 1.0 / fam.at(pos).point.gap_double();
        std::vector<double> parts;
        for (int n = 1; n <= fam.n_gen; ++n) {
            double rays = std::ldexp(1.0, n - 1);
            double deepest = std::ldexp(1.0, -(2 * n + fam.m_extra));
            parts.push_back(rays * 12.0 * deepest * inv_gap);
        }
        out.tail_bound = pairwise_sum(parts);
    }
    return out;
}

LogBOmit log_B_omit(const SequenceFamily& fam, const PointIndex& idx) {
    return log_B_omit(fam, fam.position(idx));
}

CarlesonReport carleson_norm(const SequenceFamily& fam, int max_depth,
                             const std::vector<std::size_t>* subset) {
    if (max_depth < 0 || max_depth > 62) throw std::invalid_argument("carleson_norm: bad depth");
    std::vector<std::size_t> all;
    if (!subset) {
        all.resize(fam.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        subset = &all;
    }
    CarlesonReport rep;
    rep.depth_scanned = max_depth;
    rep.min_sep = min_separation(fam);

    std::map<std::pair<int, std::int64_t>, std::vector<double>> box_masses;
    std::vector<double> gaps;
    for (std::size_t i : *subset) {
        const FamilyPoint& fp = fam.at(i);
        double g = fp.point.gap_double();
        gaps.push_back(g);
        const Angle& a = fp.point.angle;
        for (int d = 0; d <= max_depth; ++d) {
            // strict 1-r < |I| = 2^-d
            if (!(fp.point.gap < LogMagnitude::two_pow(-d))) break;
            std::int64_t cell = (a.den_exp <= d) ? (a.num << (d - a.den_exp))
                                                 : (a.num >> (a.den_exp - d));
            box_masses[{d, cell}].push_back(g);
        }
    }
    rep.blaschke_sum = pairwise_sum(gaps);
    for (auto& [box, masses] : box_masses) {
        double ratio = pairwise_sum(std::move(masses)) * std::ldexp(1.0, box.first);
        if (ratio > rep.norm) {
            rep.norm = ratio;
            rep.argmax = CarlesonBox(box.first, box.second);
        }
    }
    return rep;
}

LogMagnitude min_separation(const SequenceFamily& fam) {
    if (fam.size() < 2) return LogMagnitude::zero();
    LogMagnitude best;
    bool have = false;
    // twin pairs first; for the constructed families they attain the minimum
    for (std::size_t i = 0; i < fam.size(); ++i) {
        const FamilyPoint& p = fam.at(i);
        if (p.idx.kind != PointKind::A) continue;
        PointIndex t = p.idx;
        t.kind = PointKind::B;
        if (!fam.contains(t)) continue;
        LogMagnitude r = fam.member_rho(i, fam.position(t));
        if (!have || r < best) { best = r; have = true; }
    }
    double best_d = have ? best.to_double() : 2.0;
    for (std::size_t i = 0; i < fam.size(); ++i) {
        for (std::size_t j = i + 1; j < fam.size(); ++j) {
            const FamilyPoint &p = fam.at(i), &q = fam.at(j);
            if (p.idx.n == q.idx.n && p.idx.k == q.idx.k && p.idx.m == q.idx.m) continue;
            // cheap double prefilter; the exact log-domain path only runs on
            // candidates near the current minimum
            double approx = std::abs(mobius(p.point.to_complex(), q.point.to_complex()));
            if (approx > 2.0 * best_d + 1e-12 && approx > 1e-3) continue;
            LogMagnitude r = fam.member_rho(i, j);
            if (!have || r < best) {
                best = r;
                have = true;
                best_d = best.to_double();
            }
        }
    }
    return best;
}

double nevanlinna_blaschke_sum(int n_gen, int m_extra, bool with_tails) {
    std::vector<double> parts;
    for (int n = 1; n <= n_gen; ++n) {
        double rays = std::ldexp(1.0, n - 1);
        std::vector<double> ray_parts;
        for (int m = 2 * n; m <= 2 * n + m_extra; ++m) ray_parts.push_back(std::ldexp(1.0, -m));
        if (with_tails) ray_parts.push_back(std::ldexp(1.0, -(2 * n + m_extra))); // geometric tail
        parts.push_back(rays * pairwise_sum(std::move(ray_parts)));
    }
    return pairwise_sum(std::move(parts));
}

TheoremACheck theorem_A_check(const SequenceFamily& fam, const BoundaryMeasure& cert) {
    TheoremACheck out;
    for (std::size_t i = 0; i < fam.size(); ++i) {
        const FamilyPoint& fp = fam.at(i);
        TheoremACheck::Row row;
        row.idx = fp.idx;
        row.p_mu = poisson_eval(cert, fp.point);
        LogBOmit lb = log_B_omit(fam, i);
        row.log_inv_b = -lb.log_double();
        row.tail_bound = lb.tail_bound;
        row.margin = row.p_mu - row.log_inv_b;
        if (row.margin < 0.0) out.accepted = false;
        out.rows.push_back(row);
    }
    return out;
}

} // namespace nlab
