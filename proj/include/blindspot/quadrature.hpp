#pragma once

// Globally adaptive Gauss-Kronrod (7/15) integration with explicit
// breakpoints. Node and weight tables come from Boost.Math.

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <queue>
#include <span>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace blindspot {

struct QuadratureSpec {
    double rel_tol = 1e-9;
    double abs_tol = 1e-14;
    int max_depth = 30;

    QuadratureSpec() = default;
    QuadratureSpec(double rel, double abs, int depth) : rel_tol(rel), abs_tol(abs), max_depth(depth) {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
            throw std::invalid_argument("quadrature tolerances must be positive");
        }
        if (max_depth < 0) throw std::invalid_argument("max_depth must be >= 0");
    }
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
};

namespace detail {

struct Panel {
    double a;
    double b;
    double value;
    double error;
    int depth;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gauss_kronrod_panel(const F& f, double a, double b, int depth) {
    using boost::math::quadrature::gauss;
    using boost::math::quadrature::gauss_kronrod;
    static const auto& xk = gauss_kronrod<double, 15>::abscissa();
    static const auto& wk = gauss_kronrod<double, 15>::weights();
    static const auto& wg = gauss<double, 7>::weights();

    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double f0 = f(c);
    double kronrod = wk[0] * f0;
    double gauss7 = wg[0] * f0;
    for (std::size_t i = 1; i < xk.size(); ++i) {
        const double pair = f(c - h * xk[i]) + f(c + h * xk[i]);
        kronrod += wk[i] * pair;
        if (i % 2 == 0) gauss7 += wg[i / 2] * pair;
    }
    return {a, b, kronrod * h, std::abs((kronrod - gauss7) * h), depth};
}

}  // namespace detail

/// Integrates f over [breaks.front(), breaks.back()], with the interior
/// breakpoints marking known kinks. Panels with the largest error estimate
/// are bisected until the total error meets max(abs_tol, rel_tol*|I|).
template <class F>
QuadratureResult integrate(const F& f, std::span<const double> breaks, const QuadratureSpec& spec = {}) {
    std::priority_queue<detail::Panel> heap;
    QuadratureResult out;
    double total = 0.0;
    double error = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (!(breaks[i + 1] > breaks[i])) continue;
        detail::Panel p = detail::gauss_kronrod_panel(f, breaks[i], breaks[i + 1], 0);
        out.evaluations += 15;
        total += p.value;
        error += p.error;
        heap.push(p);
    }
    // Panels at max depth are set aside so the loop always terminates.
    std::vector<detail::Panel> settled;
    while (!heap.empty() && error > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
        detail::Panel p = heap.top();
        heap.pop();
        if (p.depth >= spec.max_depth) {
            settled.push_back(p);
            continue;
        }
        const double m = 0.5 * (p.a + p.b);
        detail::Panel left = detail::gauss_kronrod_panel(f, p.a, m, p.depth + 1);
        detail::Panel right = detail::gauss_kronrod_panel(f, m, p.b, p.depth + 1);
        out.evaluations += 30;
        total += left.value + right.value - p.value;
        error += left.error + right.error - p.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum from the panels to shed the drift of incremental updates.
    total = 0.0;
    error = 0.0;
    for (; !heap.empty(); heap.pop()) {
        total += heap.top().value;
        error += heap.top().error;
    }
    for (const detail::Panel& p : settled) {
        total += p.value;
        error += p.error;
    }
    out.value = total;
    out.error = error;
    return out;
}

template <class F>
QuadratureResult integrate(const F& f, double a, double b, const QuadratureSpec& spec = {}) {
    const double breaks[] = {a, b};
    return integrate(f, std::span<const double>(breaks), spec);
}

/// Sorted breakpoints on [a, b]: the endpoints plus every interior candidate.
inline std::vector<double> breakpoints(double a, double b, std::initializer_list<double> interior) {
    std::vector<double> out{a};
    for (double x : interior) {
        if (x > a && x < b) out.push_back(x);
    }
    out.push_back(b);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace blindspot
