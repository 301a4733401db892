#pragma once

// Gauss-Legendre panel quadrature over circle arcs, with adaptive bisection
// keyed off an embedded GL8/GL16 error estimate.  Summation is a fixed
// pairwise tree so results do not depend on evaluation order.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace nlab {

// pairwise (tree) summation; deterministic for a fixed input order
inline double pairwise_sum(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::size_t n = v.size();
    while (n > 1) {
        std::size_t h = 0;
        for (std::size_t i = 0; i + 1 < n; i += 2) v[h++] = v[i] + v[i + 1];
        if (n % 2) v[h++] = v[n - 1];
        n = h;
    }
    return v[0];
}

namespace quad_detail {
// 8-point Gauss-Legendre on [-1,1]
inline constexpr double GL8_X[8] = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
inline constexpr double GL8_W[8] = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
// 16-point Gauss-Legendre on [-1,1]
inline constexpr double GL16_X[16] = {
    -0.9894009349916499, -0.9445750230732326, -0.8656312023878318, -0.7554044083550030,
    -0.6178762444026438, -0.4580167776572274, -0.2816035507792589, -0.0950125098376374,
    0.0950125098376374,  0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
    0.7554044083550030,  0.8656312023878318,  0.9445750230732326,  0.9894009349916499};
inline constexpr double GL16_W[16] = {
    0.0271524594117541, 0.0622535239386479, 0.0951585116824928, 0.1246289712555339,
    0.1495959888165767, 0.1691565193950025, 0.1826034150449236, 0.1894506104550685,
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};
} // namespace quad_detail

template <class F>
double gl8(const F& f, double a, double b) {
    using namespace quad_detail;
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s[8];
    for (int i = 0; i < 8; ++i) s[i] = GL8_W[i] * f(c + h * GL8_X[i]);
    return h * pairwise_sum({s, s + 8});
}

template <class F>
double gl16(const F& f, double a, double b) {
    using namespace quad_detail;
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s[16];
    for (int i = 0; i < 16; ++i) s[i] = GL16_W[i] * f(c + h * GL16_X[i]);
    return h * pairwise_sum({s, s + 16});
}

struct QuadResult {
    double value = 0.0;
    double err_estimate = 0.0;
    std::size_t panels = 0;
    bool converged = true;
};

// Adaptive integral of f over [a,b]; breakpoints become initial panel edges.
template <class F>
QuadResult adaptive_integrate(const F& f, double a, double b, std::vector<double> breakpoints,
                              double rel_tol = 1e-12, double min_width = 1e-14,
                              int max_panels = 2'000'000) {
    std::vector<double> edges{a, b};
    for (double t : breakpoints)
        if (t > a && t < b) edges.push_back(t);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    struct Panel { double a, b, val, err; };
    std::vector<Panel> done;
    std::vector<Panel> todo;
    auto make = [&](double x, double y) {
        double v16 = gl16(f, x, y);
        double v8 = gl8(f, x, y);
        return Panel{x, y, v16, std::abs(v16 - v8)};
    };
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) todo.push_back(make(edges[i], edges[i + 1]));

    double scale = std::abs(b - a);
    bool converged = true;
    int used = static_cast<int>(todo.size());
    while (!todo.empty()) {
        Panel p = todo.back();
        todo.pop_back();
        double width = p.b - p.a;
        double budget = rel_tol * (std::abs(p.val) + 1e-300) + rel_tol * width / scale;
        if (p.err <= budget || width <= min_width || used >= max_panels) {
            if (p.err > budget && width > min_width) converged = false;
            done.push_back(p);
            continue;
        }
        double m = 0.5 * (p.a + p.b);
        todo.push_back(make(p.a, m));
        todo.push_back(make(m, p.b));
        used += 2;
    }
    std::sort(done.begin(), done.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    std::vector<double> vals, errs;
    vals.reserve(done.size());
    for (const Panel& p : done) { vals.push_back(p.val); errs.push_back(p.err); }
    QuadResult r;
    r.value = pairwise_sum(vals);
    r.err_estimate = pairwise_sum(errs);
    r.panels = done.size();
    r.converged = converged;
    return r;
}

// Convergence audit: refine every panel once more (doubling the count) and
// report the change.  `refined_delta` backs the self-convergence columns.
template <class F>
std::pair<QuadResult, double> integrate_with_refinement_check(
    const F& f, double a, double b, std::vector<double> breakpoints,
    double rel_tol = 1e-12, double min_width = 1e-14) {
    QuadResult base = adaptive_integrate(f, a, b, breakpoints, rel_tol, min_width);
    // re-run at half tolerance as the doubled-resolution comparison
    QuadResult fine = adaptive_integrate(f, a, b, breakpoints, rel_tol / 16.0, min_width / 2.0);
    double delta = std::abs(fine.value - base.value);
    QuadResult out = fine;
    out.err_estimate = std::max(fine.err_estimate, delta);
    return {out, delta};
}

} // namespace nlab
