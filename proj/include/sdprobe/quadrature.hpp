// quadrature.hpp — Globally adaptive Gauss–Kronrod (G10/K21) panels
//
// The rule itself (nodes and weights) comes from Boost.Math; this header only
// drives the panel bisection. Convergence is judged against the L1 norm of the
// integrand rather than the signed result, so integrals that cancel to ~0
// (principal values at a symmetry point) terminate instead of recursing to the
// depth limit.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "sdprobe/errors.hpp"

namespace sdprobe::quad {

inline constexpr std::size_t kNodes = 21;

struct Options {
    double rel_tol{1e-9};        // relative to the integrand's L1 norm
    double abs_tol{1e-300};
    std::size_t max_panels{20000};
    // Panels wider than this are treated as unresolved (error = their L1 mass).
    // Used when the cached node values will later be multiplied by an
    // oscillatory factor.
    double max_width{0.0};
};

struct Panel {
    double a{0.0};
    double b{0.0};
    double value{0.0};
    double error{0.0};
    double l1{0.0};
    std::array<double, kNodes> fx{};  // integrand at node(i) order, see node()

    double width() const noexcept { return b - a; }
};

struct Result {
    double value{0.0};
    double error{0.0};
    double l1{0.0};
    std::vector<Panel> panels;
};

namespace detail {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, kNodes>;
using Gauss = boost::math::quadrature::gauss<double, kNodes / 2>;

// Node i in [-1, 1]: i = 0 is the centre, 1..10 positive abscissae, 11..20 mirrored.
inline double unit_node(std::size_t i) {
    const auto& x = Kronrod::abscissa();
    return i <= 10 ? x[i] : -x[i - 10];
}

inline double kronrod_weight(std::size_t i) {
    const auto& w = Kronrod::weights();
    return i <= 10 ? w[i] : w[i - 10];
}

// Gauss weight for node i, zero for pure Kronrod nodes (odd abscissae are Gauss).
inline double gauss_weight(std::size_t i) {
    const std::size_t k = i <= 10 ? i : i - 10;
    if (k % 2 == 0) return 0.0;
    return Gauss::weights()[(k - 1) / 2];
}

template <class F>
Panel evaluate(F& f, double a, double b, double max_width) {
    Panel p;
    p.a = a;
    p.b = b;
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double kr = 0.0, ga = 0.0, l1 = 0.0;
    for (std::size_t i = 0; i < kNodes; ++i) {
        const double v = f(mid + half * unit_node(i));
        p.fx[i] = v;
        kr += kronrod_weight(i) * v;
        ga += gauss_weight(i) * v;
        l1 += kronrod_weight(i) * std::abs(v);
    }
    p.value = half * kr;
    p.l1 = half * l1;
    p.error = std::abs(half * (kr - ga));
    if (max_width > 0.0 && (b - a) > max_width) p.error = std::max(p.error, p.l1);
    if (!std::isfinite(p.value)) p.error = std::numeric_limits<double>::infinity();
    return p;
}

} // namespace detail

// Absolute position of node i within panel p.
inline double node(const Panel& p, std::size_t i) {
    return 0.5 * (p.a + p.b) + 0.5 * (p.b - p.a) * detail::unit_node(i);
}

inline double weight(const Panel& p, std::size_t i) {
    return 0.5 * (p.b - p.a) * detail::kronrod_weight(i);
}

// Integrate f over the union of [cuts[k], cuts[k+1]]. cuts must be sorted;
// duplicate or degenerate segments are skipped.
template <class F>
Result integrate(F&& f, std::span<const double> cuts, const Options& opt = {}) {
    auto cmp = [](const Panel& x, const Panel& y) { return x.error < y.error; };
    std::vector<Panel> heap;

    auto totals = [&heap](double& err, double& l1) {
        err = 0.0;
        l1 = 0.0;
        for (const auto& p : heap) {
            err += p.error;
            l1 += p.l1;
        }
    };

    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        if (!(cuts[k + 1] > cuts[k])) continue;
        heap.push_back(detail::evaluate(f, cuts[k], cuts[k + 1], opt.max_width));
    }
    std::make_heap(heap.begin(), heap.end(), cmp);
    double total_err = 0.0, total_l1 = 0.0;
    totals(total_err, total_l1);

    while (!heap.empty()) {
        if (!std::isfinite(total_err) || !std::isfinite(total_l1)) totals(total_err, total_l1);
        const double target = std::max(opt.abs_tol, opt.rel_tol * total_l1);
        if (total_err <= target) break;
        if (heap.size() >= opt.max_panels) {
            throw QuadratureFailure("adaptive quadrature did not converge: error " +
                                    std::to_string(total_err) + " > " + std::to_string(target));
        }
        std::pop_heap(heap.begin(), heap.end(), cmp);
        const Panel worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            throw QuadratureFailure("adaptive quadrature: panel cannot be bisected further");
        }
        Panel left = detail::evaluate(f, worst.a, mid, opt.max_width);
        Panel right = detail::evaluate(f, mid, worst.b, opt.max_width);
        total_err += left.error + right.error - worst.error;
        total_l1 += left.l1 + right.l1 - worst.l1;
        heap.push_back(std::move(left));
        std::push_heap(heap.begin(), heap.end(), cmp);
        heap.push_back(std::move(right));
        std::push_heap(heap.begin(), heap.end(), cmp);
    }

    Result res;
    res.panels = std::move(heap);
    // Summation in position order keeps the result independent of heap layout.
    std::sort(res.panels.begin(), res.panels.end(),
              [](const Panel& x, const Panel& y) { return x.a < y.a; });
    for (const auto& p : res.panels) {
        res.value += p.value;
        res.error += p.error;
        res.l1 += p.l1;
    }
    return res;
}

} // namespace sdprobe::quad
