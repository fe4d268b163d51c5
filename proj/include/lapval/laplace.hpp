#pragma once

// Exact evaluation of L K(x) = \int_K exp(-<x,y>) dy.
//
// A simplex S = [v_0, ..., v_n] integrates in closed form through the
// Hermite-Genocchi formula
//
//     \int_S exp(-<x,y>) dy = n! vol(S) [z_0, ..., z_n] exp,   z_i = -<x, v_i>,
//
// where [z_0, ..., z_n] exp is the divided difference of the exponential.
// Polytopes are summed over their triangulation, boxes use the separable
// product, and finite unions use inclusion-exclusion.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "lapval/errors.hpp"
#include "lapval/geom.hpp"
#include "lapval/parallel.hpp"

namespace lapval {

// An order-m divided difference over nodes spanning less than
// kSeriesSpreadPerOrder * max(1, m) is summed by the centered series; wider
// ones go through the Newton table. Both routes hold a few ulps at the switch.
inline constexpr double kSeriesSpreadPerOrder = 1.5;

inline double series_threshold(std::size_t order) {
    return kSeriesSpreadPerOrder * static_cast<double>(std::max<std::size_t>(1, order));
}

namespace detail {

// e^{zbar} sum_k h_k(z - zbar) / (m+k)!, with h_k the complete homogeneous
// symmetric polynomial. Accurate for any spread; terms are bounded by
// rho^k / (k! m!), which also bounds the tail used for truncation.
inline double exp_dd_series(std::span<const double> z) {
    const std::size_t m = z.size() - 1;
    double zbar = 0.0;
    for (double v : z) zbar += v;
    zbar /= static_cast<double>(z.size());
    std::vector<double> d(z.size());
    double rho = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        d[i] = z[i] - zbar;
        rho = std::max(rho, std::abs(d[i]));
    }

    // h[j] holds h_k(d_0, ..., d_j) for the current k.
    std::vector<double> h(z.size(), 1.0);
    double coeff = 1.0 / factorial(static_cast<int>(m));
    double sum = coeff;
    double tail = coeff;  // rho^k / (k! m!)
    const double grow = std::exp(rho);
    for (int k = 1; k < 400; ++k) {
        h[0] = d[0] * h[0];
        for (std::size_t j = 1; j <= m; ++j) h[j] = h[j - 1] + d[j] * h[j];
        coeff /= static_cast<double>(m + k);
        sum += h[m] * coeff;
        tail *= rho / k;
        if (tail * rho / (k + 1) * grow < 1e-18 * std::abs(sum)) break;
    }
    return std::exp(zbar) * sum;
}

// Newton divided-difference table over the sorted nodes. Entries whose node
// range is below series_threshold(order) (including confluent repeats) come
// from the series instead of the difference quotient.
inline double exp_dd_newton(std::span<const double> nodes) {
    std::vector<double> s(nodes.begin(), nodes.end());
    std::sort(s.begin(), s.end());
    const std::size_t m = s.size() - 1;
    std::vector<double> t(s.size());
    for (std::size_t i = 0; i <= m; ++i) t[i] = std::exp(s[i]);
    for (std::size_t j = 1; j <= m; ++j) {
        for (std::size_t i = 0; i + j <= m; ++i) {
            const double spread = s[i + j] - s[i];
            if (spread < series_threshold(j))
                t[i] = exp_dd_series(std::span<const double>(s.data() + i, j + 1));
            else
                t[i] = (t[i + 1] - t[i]) / spread;
        }
    }
    return t[0];
}

}  // namespace detail

// Divided difference of z -> e^z at the given nodes (repeats allowed).
inline double exp_dd(std::span<const double> nodes) {
    if (nodes.empty()) throw DomainError("exp_dd needs at least one node");
    double lo = nodes.front(), hi = nodes.front();
    for (double z : nodes) {
        if (!std::isfinite(z)) throw DomainError("exp_dd node is not finite");
        lo = std::min(lo, z);
        hi = std::max(hi, z);
    }
    if (hi - lo < series_threshold(nodes.size() - 1)) return detail::exp_dd_series(nodes);
    return detail::exp_dd_newton(nodes);
}

inline double exp_dd(std::initializer_list<double> nodes) {
    return exp_dd(std::span<const double>(nodes.begin(), nodes.size()));
}

inline double laplace_simplex(const Simplex& s, const Vector& x) {
    if (x.size() != s.ambient_dim()) throw DimensionMismatch("laplace_simplex: point dimension differs");
    if (s.degenerate()) throw DegenerateInput("laplace_simplex: degenerate simplex");
    std::vector<double> z;
    z.reserve(s.vertices().size());
    for (const auto& v : s.vertices()) z.push_back(-x.dot(v));
    return std::abs(s.signed_det()) * exp_dd(z);
}

// Axis factors below this magnitude take their x -> 0 limit.
inline constexpr double kBoxZeroThreshold = 1e-12;

// prod_i (e^{-x_i lo_i} - e^{-x_i hi_i}) / x_i
inline double laplace_box(const Vector& lo, const Vector& hi, const Vector& x) {
    if (lo.size() != hi.size() || x.size() != lo.size()) throw DimensionMismatch("laplace_box: dimension mismatch");
    for (Eigen::Index i = 0; i < lo.size(); ++i)
        if (!(lo[i] < hi[i])) throw DomainError("laplace_box: empty box");
    double value = 1.0;
    for (Eigen::Index i = 0; i < lo.size(); ++i) {
        const double w = hi[i] - lo[i];
        const double xi = x[i];
        const double factor = std::abs(xi) < kBoxZeroThreshold ? w : -std::expm1(-xi * w) / xi;
        value *= std::exp(-xi * lo[i]) * factor;
    }
    return value;
}

enum class EvalPath {
    automatic,      // box product when the body carries a box tag
    triangulation,  // always sum over simplices
};

// Lower-dimensional bodies map to 0.
inline double laplace_polytope(const Polytope& p, const Vector& x, EvalPath path = EvalPath::automatic) {
    if (x.size() != p.ambient_dim()) throw DimensionMismatch("laplace_polytope: point dimension differs");
    if (!p.full_dimensional()) return 0.0;
    if (path == EvalPath::automatic && p.box_tag()) return laplace_box(p.box_tag()->lo, p.box_tag()->hi, x);
    double sum = 0.0;
    for (const auto& s : p.simplices())
        if (!s.degenerate()) sum += laplace_simplex(s, x);
    return sum;
}

// Inclusion-exclusion expansion of a union: signed, full-dimensional
// intersections of the parts. Intersections that drop dimension contribute
// nothing, and neither do any of their supersets.
struct SignedBody {
    int sign;
    Polytope body;
};

inline std::vector<SignedBody> inclusion_exclusion_terms(const PolyUnion& u) {
    for (const auto& p : u.parts)
        if (!p.full_dimensional()) throw DegenerateInput("union parts must be full-dimensional");
    std::vector<SignedBody> terms;
    const std::size_t m = u.parts.size();
    auto expand = [&](auto&& self, std::size_t start, const Polytope& cur, int depth) -> void {
        for (std::size_t j = start; j < m; ++j) {
            Polytope next = intersect(cur, u.parts[j]);
            if (!next.full_dimensional()) continue;
            terms.push_back(SignedBody{depth % 2 == 0 ? 1 : -1, next});
            self(self, j + 1, next, depth + 1);
        }
    };
    for (std::size_t i = 0; i < m; ++i) {
        terms.push_back(SignedBody{1, u.parts[i]});
        expand(expand, i + 1, u.parts[i], 1);
    }
    return terms;
}

inline double laplace_union(const PolyUnion& u, const Vector& x) {
    double sum = 0.0;
    for (const auto& t : inclusion_exclusion_terms(u)) sum += t.sign * laplace_polytope(t.body, x);
    return sum;
}

struct TransformValue {
    double value = 0.0;
    const Polytope* body = nullptr;
    Vector point;
};

// Pointwise laplace_polytope; points are evaluated concurrently.
inline std::vector<TransformValue> laplace_grid(const Polytope& p, const std::vector<Vector>& xs) {
    std::vector<TransformValue> out(xs.size());
    if (p.full_dimensional() && !p.box_tag()) (void)p.simplices();
    parallel_for(xs.size(), [&](std::size_t i) {
        out[i] = TransformValue{laplace_polytope(p, xs[i]), &p, xs[i]};
    });
    return out;
}

}  // namespace lapval
