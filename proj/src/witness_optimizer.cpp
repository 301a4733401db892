#include "nlab/witness_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nlab/blaschke_carleson.hpp"
#include "nlab/boundary_measures.hpp"
#include "nlab/quadrature.hpp"

namespace nlab {

namespace {

constexpr double PIVOT_EPS = 1e-11;
constexpr double COST_EPS = 1e-9;

struct Tableau {
    std::size_t m, ncols; // ncols excludes the rhs column
    std::vector<double> t; // (m) x (ncols+1)
    std::vector<double> d; // reduced-cost row, ncols+1 (last = -objective)
    std::vector<std::size_t> basis;

    double& at(std::size_t i, std::size_t j) { return t[i * (ncols + 1) + j]; }

    void pivot(std::size_t r, std::size_t j) {
        double p = at(r, j);
        double inv = 1.0 / p;
        for (std::size_t q = 0; q <= ncols; ++q) at(r, q) *= inv;
        at(r, j) = 1.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == r) continue;
            double f = at(i, j);
            if (f == 0.0) continue;
            for (std::size_t q = 0; q <= ncols; ++q) at(i, q) -= f * at(r, q);
            at(i, j) = 0.0;
        }
        double f = d[j];
        if (f != 0.0) {
            for (std::size_t q = 0; q <= ncols; ++q) d[q] -= f * at(r, q);
            d[j] = 0.0;
        }
        basis[r] = j;
    }

    // returns false when the allowed columns are all priced out
    bool step(std::size_t allowed_cols, bool bland, bool& unbounded) {
        std::size_t enter = ncols;
        if (bland) {
            for (std::size_t j = 0; j < allowed_cols; ++j)
                if (d[j] < -COST_EPS) { enter = j; break; }
        } else {
            double best = -COST_EPS;
            for (std::size_t j = 0; j < allowed_cols; ++j)
                if (d[j] < best) { best = d[j]; enter = j; }
        }
        if (enter == ncols) return false;
        std::size_t leave = m;
        double best_ratio = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            double a = at(i, enter);
            if (a <= PIVOT_EPS) continue;
            double ratio = at(i, ncols) / a;
            if (leave == m || ratio < best_ratio - 1e-15 ||
                (ratio < best_ratio + 1e-15 && basis[i] < basis[leave])) {
                leave = i;
                best_ratio = ratio;
            }
        }
        if (leave == m) { unbounded = true; return false; }
        pivot(leave, enter);
        return true;
    }
};

} // namespace

SimplexResult simplex_min_ge(const std::vector<std::vector<double>>& A,
                             const std::vector<double>& b, const std::vector<double>& c,
                             int max_iterations) {
    std::size_t m = A.size(), n = c.size();
    if (b.size() != m) throw std::invalid_argument("simplex_min_ge: row/rhs mismatch");
    for (const auto& row : A)
        if (row.size() != n) throw std::invalid_argument("simplex_min_ge: ragged matrix");
    for (double bi : b)
        if (bi < 0.0) throw std::invalid_argument("simplex_min_ge: negative rhs");

    SimplexResult res;
    Tableau T;
    T.m = m;
    T.ncols = n + 2 * m; // x | surplus | artificial
    T.t.assign(m * (T.ncols + 1), 0.0);
    T.basis.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) T.at(i, j) = A[i][j];
        T.at(i, n + i) = -1.0;
        T.at(i, n + m + i) = 1.0;
        T.at(i, T.ncols) = b[i];
        T.basis[i] = n + m + i;
    }

    // phase 1: minimize artificial mass; reduced costs = -(column sums)
    T.d.assign(T.ncols + 1, 0.0);
    for (std::size_t j = 0; j <= T.ncols; ++j) {
        if (j >= n + m && j < T.ncols) continue;
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += T.at(i, j);
        T.d[j] = -s;
    }
    int iters = 0;
    bool unbounded = false;
    auto run = [&](std::size_t allowed) {
        int since_switch = 0;
        bool bland = false;
        while (iters < max_iterations) {
            if (!T.step(allowed, bland, unbounded)) return true;
            ++iters;
            if (!bland && ++since_switch > 4 * static_cast<int>(m + n)) bland = true;
        }
        return false;
    };
    if (!run(n + m)) { res.iterations = iters; return res; }
    double art_mass = -T.d[T.ncols];
    if (art_mass > 1e-7) {
        res.infeasible = true;
        res.iterations = iters;
        return res;
    }
    // drive leftover zero-level artificials out of the basis where possible
    for (std::size_t i = 0; i < m; ++i) {
        if (T.basis[i] < n + m) continue;
        for (std::size_t j = 0; j < n + m; ++j) {
            if (std::abs(T.at(i, j)) > 1e-9) { T.pivot(i, j); break; }
        }
    }

    // phase 2 reduced costs from the true objective
    T.d.assign(T.ncols + 1, 0.0);
    for (std::size_t j = 0; j < n; ++j) T.d[j] = c[j];
    for (std::size_t i = 0; i < m; ++i) {
        double cb = (T.basis[i] < n) ? c[T.basis[i]] : 0.0;
        if (cb == 0.0) continue;
        for (std::size_t q = 0; q <= T.ncols; ++q) T.d[q] -= cb * T.at(i, q);
    }
    if (!run(n + m) || unbounded) { res.iterations = iters; return res; }

    res.optimal = true;
    res.iterations = iters;
    res.x.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        if (T.basis[i] < n) res.x[T.basis[i]] = T.at(i, T.ncols);
    res.value = 0.0;
    for (std::size_t j = 0; j < n; ++j) res.value += c[j] * res.x[j];
    res.dual.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) res.dual[i] = std::max(0.0, T.d[n + i]);
    return res;
}

std::vector<double> build_witness_grid(const SequenceFamily& fam, const WitnessGridOptions& opt) {
    std::vector<double> angles;
    int depth = std::min(fam.n_gen + opt.endpoint_depth_extra, 24);
    std::int64_t cells = std::int64_t(1) << depth;
    for (std::int64_t j = 0; j < cells; ++j)
        angles.push_back(TWO_PI * static_cast<double>(j) / static_cast<double>(cells));

    double gap_min = 2.0;
    for (const FamilyPoint& fp : fam.points()) gap_min = std::min(gap_min, fp.point.gap_double());
    double finest = gap_min * opt.refine_factor;
    double coarse = TWO_PI / static_cast<double>(cells);
    std::vector<double> centers;
    for (const FamilyPoint& fp : fam.points()) centers.push_back(fp.point.angle.radians());
    std::sort(centers.begin(), centers.end());
    centers.erase(std::unique(centers.begin(), centers.end()), centers.end());
    for (double c0 : centers)
        for (double off = finest; off < coarse; off *= 2.0) {
            angles.push_back(c0 + off);
            angles.push_back(c0 - off);
        }
    for (int j = 0; j < opt.uniform; ++j)
        angles.push_back(TWO_PI * (j + 0.5) / opt.uniform);

    for (double& a : angles) {
        a = std::remainder(a, TWO_PI);
        if (a < 0) a += TWO_PI;
    }
    std::sort(angles.begin(), angles.end());
    angles.erase(std::unique(angles.begin(), angles.end()), angles.end());
    return angles;
}

LpInstance build_lp_instance(const SequenceFamily& fam, RhsMode mode, bool density,
                             const WitnessGridOptions& opt) {
    if (fam.size() == 0) throw std::invalid_argument("build_lp_instance: empty truncation");
    LpInstance inst;
    inst.mode = mode;
    inst.density = density;
    inst.angles = build_witness_grid(fam, opt);
    std::size_t n = inst.angles.size();

    inst.cost.assign(n, 1.0);
    for (std::size_t i = 0; i < fam.size(); ++i) {
        const FamilyPoint& fp = fam.at(i);
        double ci;
        if (mode == RhsMode::TwinOnly) {
            PointIndex tw = fam.twin(fp.idx);
            if (!fam.contains(tw))
                throw std::invalid_argument("build_lp_instance: twin-only rhs needs twin pairs");
            ci = -fam.member_rho(i, fam.position(tw)).log_double();
        } else {
            ci = -log_B_omit(fam, i).log_double();
        }
        if (!(ci > 0.0)) continue; // vacuous constraint
        double g = fp.point.gap_double();
        double phi = fp.point.angle.radians();
        std::vector<double> row(n);
        if (density) {
            for (std::size_t j = 0; j < n; ++j) {
                double lo = inst.angles[j];
                double hi = (j + 1 < n) ? inst.angles[j + 1] : inst.angles[0] + TWO_PI;
                double len = hi - lo;
                Arc cell{0.5 * (lo + hi), 0.5 * len};
                // average kernel over the cell: unit mass spread on it
                row[j] = harmonic_measure(g, phi, cell) * TWO_PI / len;
            }
        } else {
            for (std::size_t j = 0; j < n; ++j) row[j] = poisson_kernel(g, phi, inst.angles[j]);
        }
        inst.rows.push_back(std::move(row));
        inst.rhs.push_back(ci);
    }
    return inst;
}

WitnessResult min_mass_lp(const SequenceFamily& fam, RhsMode mode,
                          const WitnessGridOptions& opt, bool density) {
    LpInstance inst = build_lp_instance(fam, mode, density, opt);
    std::size_t m = inst.rows.size(), n = inst.angles.size();
    WitnessResult out;
    out.columns = n;
    out.constraints = m;
    if (m == 0) { out.optimal = true; return out; }

    // scale every row so the rhs is 1
    std::vector<std::vector<double>> A = inst.rows;
    for (std::size_t i = 0; i < m; ++i)
        for (double& v : A[i]) v /= inst.rhs[i];
    std::vector<double> b(m, 1.0);

    SimplexResult s = simplex_min_ge(A, b, inst.cost);
    if (!s.optimal)
        throw std::runtime_error(s.infeasible ? "min_mass_lp: infeasible instance"
                                              : "min_mass_lp: iteration limit reached");
    out.optimal = true;
    out.value = s.value;
    out.dual = s.dual;
    for (double y : s.dual) out.dual_value += y;
    out.duality_gap = std::abs(out.value - out.dual_value) / (std::abs(out.value) + 1e-30);

    double mx = 0.0;
    for (double v : s.x) mx = std::max(mx, v);
    for (std::size_t j = 0; j < n; ++j)
        if (s.x[j] > 1e-12 * mx) out.support.push_back({inst.angles[j], s.x[j]});

    // independent certificate checks on the scaled system
    std::vector<double> aty(n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) aty[j] += s.dual[i] * A[i][j];
    double comp = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        out.max_dual_violation = std::max(out.max_dual_violation, aty[j] - inst.cost[j]);
        comp = std::max(comp, std::abs(s.x[j] * (inst.cost[j] - aty[j])));
    }
    for (std::size_t i = 0; i < m; ++i) {
        double ax = 0.0;
        for (std::size_t j = 0; j < n; ++j) ax += A[i][j] * s.x[j];
        comp = std::max(comp, std::abs(s.dual[i] * (ax - 1.0)));
    }
    out.comp_slack_residual = comp / (std::abs(out.value) + 1e-30);

    // optimum hugging the edge of a refinement ladder suggests a short grid
    double gap_min = 2.0;
    for (const FamilyPoint& fp : fam.points()) gap_min = std::min(gap_min, fp.point.gap_double());
    double finest = gap_min * opt.refine_factor;
    int depth = std::min(fam.n_gen + opt.endpoint_depth_extra, 24);
    double coarse = TWO_PI / static_cast<double>(std::int64_t(1) << depth);
    double outer = finest;
    while (outer * 2.0 < coarse) outer *= 2.0;
    for (const auto& [ang, mass] : out.support) {
        if (mass < 1e-6 * mx) continue;
        for (const FamilyPoint& fp : fam.points()) {
            double d = std::abs(std::remainder(ang - fp.point.angle.radians(), TWO_PI));
            if (std::abs(d - outer) < 1e-12 || std::abs(d - finest) < 1e-12)
                out.grid_warning = true;
        }
    }
    return out;
}

KernelSumReport kernel_sum_sup(const SequenceFamily& fam, int depth_extra) {
    KernelSumReport rep;
    std::vector<std::size_t> side = fam.kind_positions(PointKind::A);
    if (side.empty()) throw std::invalid_argument("kernel_sum_sup: empty truncation");
    struct Pt { double g, phi, w; int n; };
    std::vector<Pt> pts;
    for (std::size_t p : side) {
        double g = fam.at(p).point.gap_double();
        pts.push_back({g, fam.at(p).point.angle.radians(), g * (2.0 - g), fam.at(p).idx.n});
    }
    int depth = std::min(fam.n_gen + depth_extra, 24);
    std::int64_t cells = std::int64_t(2) << depth; // endpoints and midpoints
    rep.grid_size = static_cast<std::size_t>(cells);
    std::vector<int> dominant(fam.n_gen + 1);
    for (std::int64_t j = 0; j < cells; ++j) {
        double theta = TWO_PI * static_cast<double>(j) / static_cast<double>(cells);
        double total = 0.0;
        std::fill(dominant.begin(), dominant.end(), 0);
        for (const Pt& p : pts) {
            double sh = std::sin(0.5 * (theta - p.phi));
            double chord = p.g * p.g + 4.0 * (1.0 - p.g) * sh * sh;
            double term = p.w * p.w / chord;
            total += term;
            // per level, only the point above the interval containing theta
            // may be at comparable distance
            if (term > 1.0 && ++dominant[p.n] > 1) rep.one_dominant_ok = false;
        }
        if (total > rep.sup) { rep.sup = total; rep.sup_theta = theta; }
    }
    // absolute constant calibrated at depth 1, where the sup is the single
    // nearest-point value (2 - 1/4)^2 = 12 * 2^-2 up to 2%
    for (int n = 1; n <= fam.n_gen; ++n) rep.comparison += std::ldexp(1.0, -2 * n);
    rep.comparison *= 12.0;
    rep.ratio = rep.sup / rep.comparison;
    return rep;
}

ContradictionReport smirnov_contradiction(int n_max, int base_depth,
                                          const WitnessGridOptions& opt) {
    if (n_max < 2 || base_depth < 1 || base_depth > n_max)
        throw std::invalid_argument("smirnov_contradiction: bad depths");
    ContradictionReport rep;
    rep.n_max = n_max;
    rep.base_depth = base_depth;
    SequenceFamily base = SequenceFamily::build_smirnov(base_depth);
    rep.base_mass = min_mass_lp(base, RhsMode::TwinOnly, opt, true).value;

    double lhs_acc = 0.0;
    for (int n = 1; n <= n_max; ++n) {
        // sum over the A side at level n of (1-|a|^2) log(1/rho(a,b)):
        // 2^{n-1} points, gap 2^-2n, twin bound 2^{2n}/(2n)
        double g = std::ldexp(1.0, -2 * n);
        lhs_acc += std::ldexp(1.0, n - 1) * g * (2.0 - g) * std::ldexp(1.0, 2 * n) / (2.0 * n);
        rep.lhs.push_back(lhs_acc);
        double sup = (n >= 1) ? kernel_sum_sup(SequenceFamily::build_smirnov(n)).sup : 0.0;
        rep.sup.push_back(sup);
        rep.rhs.push_back(sup * rep.base_mass);
        if (rep.crossing_depth < 0 && lhs_acc > sup * rep.base_mass) rep.crossing_depth = n;
    }
    return rep;
}

} // namespace nlab
