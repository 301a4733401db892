#include "nlab/dyadic_model.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace nlab {

const FamilyPoint& SequenceFamily::find(const PointIndex& idx) const {
    auto it = by_index_.find(idx);
    if (it == by_index_.end()) throw std::out_of_range("SequenceFamily: index not in family");
    return points_[it->second];
}

std::size_t SequenceFamily::position(const PointIndex& idx) const {
    auto it = by_index_.find(idx);
    if (it == by_index_.end()) throw std::out_of_range("SequenceFamily: index not in family");
    return it->second;
}

PointIndex SequenceFamily::twin(const PointIndex& idx) const {
    if (!contains(idx)) throw std::out_of_range("SequenceFamily: index not in family");
    PointIndex t = idx;
    t.kind = (idx.kind == PointKind::A) ? PointKind::B : PointKind::A;
    return t;
}

LogMagnitude SequenceFamily::member_rho(std::size_t i, std::size_t j) const {
    const FamilyPoint& p = points_[i];
    const FamilyPoint& q = points_[j];
    if (p.idx.n == q.idx.n && p.idx.k == q.idx.k && p.idx.m == q.idx.m) {
        if (p.idx.kind == q.idx.kind) return LogMagnitude::zero();
        const FamilyPoint& a = (p.idx.kind == PointKind::A) ? p : q;
        return rho_collinear_delta(a.point.gap, a.twin_delta);
    }
    return rho(p.point, q.point);
}

std::vector<std::size_t> SequenceFamily::kind_positions(PointKind kind) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < points_.size(); ++i)
        if (points_[i].idx.kind == kind) out.push_back(i);
    return out;
}

void SequenceFamily::push(FamilyPoint fp) {
    by_index_[fp.idx] = points_.size();
    points_.push_back(std::move(fp));
}

SequenceFamily SequenceFamily::build_nevanlinna(int n_gen, int m_extra, std::size_t point_cap) {
    if (n_gen < 1 || m_extra < 0) throw std::invalid_argument("build_nevanlinna: N_gen >= 1, M_extra >= 0");
    std::size_t count = 2 * std::size_t(m_extra + 1) * ((std::size_t(1) << n_gen) - 1);
    if (count > point_cap) throw std::length_error("build_nevanlinna: point cap exceeded");

    SequenceFamily fam;
    fam.family = FamilyKind::Nevanlinna;
    fam.n_gen = n_gen;
    fam.m_extra = m_extra;
    LogMagnitude one = LogMagnitude::one();
    for (int n = 1; n <= n_gen; ++n) {
        for (std::int64_t k = 1; k < (std::int64_t(1) << n); k += 2) {
            Angle angle = Angle::from_turns_dyadic(k, n);
            for (int m = 2 * n; m <= 2 * n + m_extra; ++m) {
                LogMagnitude gap_a = LogMagnitude::two_pow(-m);
                // gap(B) - gap(A) = e^{-2^m} (1 - 2^-m), exact in log domain
                LogMagnitude e = LogMagnitude::from_log(
                    SignedLog::from_dd(dd_neg(dd_ldexp(DD(1.0), m))));
                LogMagnitude delta = e * log_sub_exp(one, gap_a);
                LogMagnitude gap_b = log_add_exp(gap_a, delta);
                fam.push({{n, k, m, PointKind::A}, DiskPoint(angle, gap_a), delta});
                fam.push({{n, k, m, PointKind::B}, DiskPoint(angle, gap_b), delta});
            }
        }
    }
    return fam;
}

SequenceFamily SequenceFamily::build_smirnov(int n_gen, std::size_t point_cap) {
    if (n_gen < 1) throw std::invalid_argument("build_smirnov: N_gen >= 1");
    std::size_t count = 2 * ((std::size_t(1) << n_gen) - 1);
    if (count > point_cap) throw std::length_error("build_smirnov: point cap exceeded");

    SequenceFamily fam;
    fam.family = FamilyKind::Smirnov;
    fam.n_gen = n_gen;
    LogMagnitude one = LogMagnitude::one();
    for (int n = 1; n <= n_gen; ++n) {
        LogMagnitude s = LogMagnitude::two_pow(-2 * n);
        // target rho(a,b) = exp(-2^{2n}/(2n))
        DD log_rho = dd_div(dd_neg(dd_ldexp(DD(1.0), 2 * n)), DD(2.0 * n));
        LogMagnitude rho_t = LogMagnitude::from_log(SignedLog::from_dd(log_rho));
        // invert the collinear formula: delta = rho (2s - s^2) / (1 - rho (1-s))
        LogMagnitude one_minus_s = log_sub_exp(one, s);
        LogMagnitude two_s_minus_s2 = log_add_exp(s, s * one_minus_s);
        LogMagnitude delta = rho_t * two_s_minus_s2 / log_sub_exp(one, rho_t * one_minus_s);
        LogMagnitude gap_b = log_add_exp(s, delta);
        for (std::int64_t k = 1; k < (std::int64_t(1) << n); k += 2) {
            Angle angle = Angle::from_turns_dyadic(k, n);
            fam.push({{n, k, 2 * n, PointKind::A}, DiskPoint(angle, s), delta});
            fam.push({{n, k, 2 * n, PointKind::B}, DiskPoint(angle, gap_b), delta});
        }
    }
    return fam;
}

void SequenceFamily::export_csv(std::ostream& os) const {
    os << "kind,n,k,m,angle_turns_num,angle_turns_den_exp,log_gap_exp2,log_gap_frac\n";
    for (const FamilyPoint& fp : points_) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", fp.point.gap.log().frac.to_double());
        os << (fp.idx.kind == PointKind::A ? 'A' : 'B') << ',' << fp.idx.n << ',' << fp.idx.k
           << ',' << fp.idx.m << ',' << fp.point.angle.num << ',' << fp.point.angle.den_exp
           << ',' << fp.point.gap.log().exp2 << ',' << buf << '\n';
    }
}

SequenceFamily SequenceFamily::import_csv(std::istream& is) {
    SequenceFamily fam;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (lineno == 1 && line.rfind("kind,", 0) == 0) continue;
        std::istringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 8)
            throw std::runtime_error("sequence CSV: malformed row " + std::to_string(lineno));
        try {
            PointIndex idx;
            idx.kind = (fields[0] == "B") ? PointKind::B : PointKind::A;
            idx.n = std::stoi(fields[1]);
            idx.k = std::stoll(fields[2]);
            idx.m = std::stoi(fields[3]);
            Angle angle = Angle::from_turns_dyadic(std::stoll(fields[4]), std::stoi(fields[5]));
            SignedLog lg;
            lg.exp2 = std::stoll(fields[6]);
            lg.frac = DD(std::stod(fields[7]));
            LogMagnitude gap = LogMagnitude::from_log(lg);
            fam.push({idx, DiskPoint(angle, gap), LogMagnitude::zero()});
        } catch (const std::exception&) {
            throw std::runtime_error("sequence CSV: malformed row " + std::to_string(lineno));
        }
    }
    return fam;
}

} // namespace nlab
