#pragma once

// The transform z(f) = L(h ∘ f) on step functions f = sum_i alpha_i 1_{E_i}
// with convex polytope regions E_i. Since h ∘ f is again a step function,
// z(f)(x) = sum_i h(alpha_i) L E_i(x).

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lapval/errors.hpp"
#include "lapval/geom.hpp"
#include "lapval/laplace.hpp"
#include "lapval/valuation.hpp"

namespace lapval {

struct StepPiece {
    double weight;
    Polytope region;
};

class StepFunction {
public:
    explicit StepFunction(int n, std::vector<StepPiece> pieces = {}) : n_(n) {
        if (n < 1) throw DomainError("StepFunction: n must be >= 1");
        for (auto& p : pieces) add(p.weight, std::move(p.region));
    }

    // Zero weights and empty regions are dropped.
    void add(double weight, Polytope region) {
        if (!std::isfinite(weight)) throw DomainError("StepFunction: weight is not finite");
        if (region.ambient_dim() != n_) throw DimensionMismatch("StepFunction: region dimension differs");
        if (weight == 0.0 || region.is_empty()) return;
        pieces_.push_back(StepPiece{weight, std::move(region)});
    }

    int ambient_dim() const { return n_; }
    const std::vector<StepPiece>& pieces() const { return pieces_; }
    bool is_zero() const { return pieces_.empty(); }

    double operator()(const Vector& y) const {
        for (const auto& p : pieces_)
            if (p.region.full_dimensional() && p.region.contains(y, 0.0)) return p.weight;
        return 0.0;
    }

    StepFunction scaled(double s) const {
        StepFunction out(n_);
        for (const auto& p : pieces_) out.add(s * p.weight, p.region);
        return out;
    }

    // y -> f(phi^{-1}(y - t)): regions phi E_i + t, same weights.
    StepFunction pushed_forward(const LinearMap& phi, const Vector& t) const {
        StepFunction out(n_);
        for (const auto& p : pieces_) out.add(p.weight, transform_body(p.region, phi, t));
        return out;
    }

    double l1_norm() const {
        double s = 0.0;
        for (const auto& p : pieces_) s += std::abs(p.weight) * volume(p.region);
        return s;
    }

private:
    int n_;
    std::vector<StepPiece> pieces_;
};

struct GrowthFunction {
    std::function<double(double)> h;
    double gamma = 1.0;
    std::string name;

    double operator()(double a) const { return h(a); }
};

// 0, +-10^{-k} for k = 1..6, and a quarter-step grid over [-10, 10].
inline std::vector<double> default_growth_sample() {
    std::vector<double> s{0.0};
    for (int k = 1; k <= 6; ++k) {
        s.push_back(std::pow(10.0, -k));
        s.push_back(-std::pow(10.0, -k));
    }
    for (int i = -40; i <= 40; ++i)
        if (i != 0) s.push_back(0.25 * i);
    return s;
}

inline GrowthFunction validate_h(std::function<double(double)> h, double gamma,
                                 const std::vector<double>& sample = default_growth_sample(), std::string name = {}) {
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw DomainError("validate_h: gamma must be finite and >= 0");
    const bool has_zero = std::find(sample.begin(), sample.end(), 0.0) != sample.end();
    const auto [lo, hi] = std::minmax_element(sample.begin(), sample.end());
    const bool near_zero = std::any_of(sample.begin(), sample.end(),
                                       [](double a) { return a != 0.0 && std::abs(a) <= 1e-6; });
    if (!has_zero || *lo > -10.0 || *hi < 10.0 || !near_zero)
        throw DomainError("validate_h: sample must contain 0, points within 1e-6 of 0, and span [-10, 10]");

    if (h(0.0) != 0.0) throw ZeroViolation("h(0) = " + std::to_string(h(0.0)) + ", expected 0");
    // report the sample point with the largest ratio |h(alpha)| / |alpha|
    double worst_ratio = 0.0, worst_at = 0.0;
    for (double a : sample) {
        if (a == 0.0) continue;
        const double v = h(a);
        const double ratio = std::isfinite(v) ? std::abs(v) / std::abs(a) : INFINITY;
        if (ratio > worst_ratio) {
            worst_ratio = ratio;
            worst_at = a;
        }
    }
    if (worst_ratio > gamma * (1.0 + 1e-12))
        throw GrowthViolation("|h(alpha)| / |alpha| = " + std::to_string(worst_ratio) + " at alpha = " +
                              std::to_string(worst_at) + " exceeds gamma = " + std::to_string(gamma));
    constexpr double step = 1e-9;
    for (double a : sample) {
        const double v = h(a);
        if (std::abs(h(a + step) - v) > 1e-4 * (1.0 + std::abs(v)))
            throw ContinuityViolation("h jumps near alpha = " + std::to_string(a));
    }
    return GrowthFunction{std::move(h), gamma, std::move(name)};
}

// identity, saturate, scaled:<c>, and the inadmissible specimens sqrtsign and
// affine1. The declared gamma is attached; nothing is validated here.
inline GrowthFunction growth_from_name(const std::string& name) {
    if (name == "identity") return {[](double a) { return a; }, 1.0, name};
    if (name == "saturate") return {[](double a) { return a / (1.0 + std::abs(a)); }, 1.0, name};
    if (name == "sqrtsign")
        return {[](double a) { return a == 0.0 ? 0.0 : std::copysign(std::sqrt(std::abs(a)), a); }, 10.0, name};
    if (name == "affine1") return {[](double a) { return a + 1.0; }, 1.0, name};
    if (name.rfind("scaled:", 0) == 0) {
        double c = 0.0;
        try {
            std::size_t used = 0;
            c = std::stod(name.substr(7), &used);
            if (used != name.size() - 7) throw std::invalid_argument(name);
        } catch (const std::exception&) {
            throw ParseError("growth function: cannot read constant in '" + name + "'");
        }
        if (!std::isfinite(c)) throw ParseError("growth function: constant is not finite");
        return {[c](double a) { return c * a; }, std::abs(c), name};
    }
    throw ParseError("unknown growth function '" + name + "'");
}

// Common refinement into convex cells, with max / min of the two values on
// each cell (a value missing from one side counts as 0).
inline std::pair<StepFunction, StepFunction> join_meet(const StepFunction& f, const StepFunction& g) {
    const int n = f.ambient_dim();
    if (g.ambient_dim() != n) throw DimensionMismatch("join_meet: ambient dimensions differ");
    StepFunction join(n), meet(n);
    auto emit = [&](double a, double b, const Polytope& cell) {
        join.add(std::max(a, b), cell);
        meet.add(std::min(a, b), cell);
    };
    auto outside = [](const Polytope& region, const StepFunction& other) {
        std::vector<Polytope> rest{region};
        for (const auto& q : other.pieces()) {
            if (!q.region.full_dimensional()) continue;
            std::vector<Polytope> next;
            for (const auto& r : rest)
                for (auto& cell : set_difference(r, q.region)) next.push_back(std::move(cell));
            rest = std::move(next);
            if (rest.empty()) break;
        }
        return rest;
    };
    for (const auto& p : f.pieces()) {
        if (!p.region.full_dimensional()) continue;
        for (const auto& q : g.pieces()) {
            if (!q.region.full_dimensional()) continue;
            Polytope cell = intersect(p.region, q.region);
            if (cell.full_dimensional()) emit(p.weight, q.weight, cell);
        }
        for (const auto& cell : outside(p.region, g)) emit(p.weight, 0.0, cell);
    }
    for (const auto& q : g.pieces()) {
        if (!q.region.full_dimensional()) continue;
        for (const auto& cell : outside(q.region, f)) emit(0.0, q.weight, cell);
    }
    return {std::move(join), std::move(meet)};
}

inline double transform_indicator(double alpha, const Polytope& e, const GrowthFunction& h, const Vector& x) {
    if (alpha == 0.0) return 0.0;
    const double ha = h(alpha);
    if (ha == 0.0) return 0.0;
    return ha * laplace_polytope(e, x);
}

namespace detail {

inline std::pair<Vector, Vector> bounding_box(const Polytope& p) {
    Vector lo = p.vertices().front(), hi = lo;
    for (const auto& v : p.vertices()) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }
    return {lo, hi};
}

inline double transform_step_unchecked(const StepFunction& f, const GrowthFunction& h, const Vector& x) {
    double sum = 0.0;
    for (const auto& p : f.pieces()) sum += transform_indicator(p.weight, p.region, h, x);
    return sum;
}

// sum_i |h(alpha_i)| L E_i(x): the size the residuals are measured against.
inline double transform_scale(const StepFunction& f, const GrowthFunction& h, const Vector& x) {
    double sum = 0.0;
    for (const auto& p : f.pieces()) sum += std::abs(transform_indicator(p.weight, p.region, h, x));
    return sum;
}

}  // namespace detail

// Throws OverlapError when two regions share more than 1e-9 of the larger
// region's volume.
inline void check_disjoint(const StepFunction& f) {
    const auto& ps = f.pieces();
    std::vector<std::pair<Vector, Vector>> boxes;
    std::vector<double> vols;
    for (const auto& p : ps) {
        boxes.push_back(detail::bounding_box(p.region));
        vols.push_back(volume(p.region));
    }
    for (std::size_t i = 0; i < ps.size(); ++i) {
        if (!ps[i].region.full_dimensional()) continue;
        for (std::size_t j = i + 1; j < ps.size(); ++j) {
            if (!ps[j].region.full_dimensional()) continue;
            const Vector lo = boxes[i].first.cwiseMax(boxes[j].first);
            const Vector hi = boxes[i].second.cwiseMin(boxes[j].second);
            if ((lo.array() >= hi.array()).any()) continue;
            const Polytope common = intersect(ps[i].region, ps[j].region);
            if (volume(common) > 1e-9 * std::max(vols[i], vols[j]))
                throw OverlapError("step function pieces " + std::to_string(i) + " and " + std::to_string(j) +
                                   " overlap");
        }
    }
}

inline double transform_step(const StepFunction& f, const GrowthFunction& h, const Vector& x) {
    if (x.size() != f.ambient_dim()) throw DimensionMismatch("transform_step: point dimension differs");
    check_disjoint(f);
    return detail::transform_step_unchecked(f, h, x);
}

// z(f v g) + z(f ^ g) = z(f) + z(g), residual relative to the summed piece
// magnitudes of f and g (the two sides may cancel to 0).
inline CheckReport check_function_valuation(const StepFunction& f, const StepFunction& g, const GrowthFunction& h,
                                            const std::vector<Vector>& xs, double tol) {
    check_disjoint(f);
    check_disjoint(g);
    const auto [join, meet] = join_meet(f, g);
    CheckReport r("function-valuation", tol);
    for (const auto& x : xs) {
        const double lhs = detail::transform_step_unchecked(join, h, x) + detail::transform_step_unchecked(meet, h, x);
        const double rhs = detail::transform_step_unchecked(f, h, x) + detail::transform_step_unchecked(g, h, x);
        const double scale = detail::transform_scale(f, h, x) + detail::transform_scale(g, h, x);
        r.record(relative_error(lhs - rhs, scale), nullptr, x);
    }
    return r;
}

// z(f ∘ phi^{-1})(x) = |det phi| z(f)(phi^t x) and z(f(. - t))(x) = e^{-<x,t>} z(f)(x).
inline CheckReport check_function_covariance(const StepFunction& f, const GrowthFunction& h, const LinearMap& phi,
                                             const Vector& t, const std::vector<Vector>& xs, double tol) {
    if (!(phi.det() > 0.0)) throw DomainError("check_function_covariance: determinant must be positive");
    check_disjoint(f);
    const int n = f.ambient_dim();
    const StepFunction mapped = f.pushed_forward(phi, Vector::Zero(n));
    const StepFunction moved = f.pushed_forward(LinearMap::identity(n), t);
    CheckReport r("function-covariance", tol);
    for (const auto& x : xs) {
        const Vector y = phi.apply_transpose(x);
        const double gl = detail::transform_step_unchecked(mapped, h, x) - phi.det() * detail::transform_step_unchecked(f, h, y);
        r.record(relative_error(gl, phi.det() * detail::transform_scale(f, h, y)), nullptr, x, "linear");
        const double shift = std::exp(-x.dot(t));
        const double tr = detail::transform_step_unchecked(moved, h, x) - shift * detail::transform_step_unchecked(f, h, x);
        r.record(relative_error(tr, shift * detail::transform_scale(f, h, x)), nullptr, x, "translation");
    }
    return r;
}

// g_k = floor(2^k f) / 2^k on the same regions: nondecreasing in k, g_k -> f.
inline StepFunction monotone_staircase(const StepFunction& f, int k) {
    if (k < 0 || k > 60) throw DomainError("monotone_staircase: k outside 0..60");
    const double scale = std::ldexp(1.0, k);
    StepFunction out(f.ambient_dim());
    for (const auto& p : f.pieces()) out.add(std::floor(p.weight * scale) / scale, p.region);
    return out;
}

struct GrowthWitness {
    int j;
    double alpha;           // |h(alpha)| > 2^j |alpha|
    double ratio;           // |h(alpha)| / |alpha|
    StepFunction g;         // alpha 1_{E_j}, E_j = [0, 2^{-j}/|alpha|] x [0,1]^{n-1}
    double l1_norm;         // = 2^{-j}
    double value_at_origin; // z(g)(o) = h(alpha) 2^{-j} / |alpha|
};

// For j = 1..jmax, the first alpha = +-2^{-t} (t = 0..1000) breaking
// |h(alpha)| <= 2^j |alpha|. Levels where no such alpha exists are skipped,
// so an h with growth constant gamma yields no witnesses for 2^j >= gamma.
inline std::vector<GrowthWitness> growth_witnesses(const GrowthFunction& h, int n, int jmax) {
    if (n < 1) throw DomainError("growth_witnesses: n must be >= 1");
    if (jmax < 1 || jmax > 60) throw DomainError("growth_witnesses: jmax outside 1..60");
    std::vector<GrowthWitness> out;
    for (int j = 1; j <= jmax; ++j) {
        const double bound = std::ldexp(1.0, j);
        std::optional<double> found;
        for (int t = 0; t <= 1000 && !found; ++t)
            for (double a : {std::ldexp(1.0, -t), -std::ldexp(1.0, -t)})
                if (std::abs(h(a)) > bound * std::abs(a)) {
                    found = a;
                    break;
                }
        if (!found) continue;
        const double a = *found;
        Vector hi = Vector::Ones(n);
        hi[0] = std::ldexp(1.0, -j) / std::abs(a);
        StepFunction g(n);
        g.add(a, Polytope::box(Vector::Zero(n), hi));
        const double norm = g.l1_norm();
        const double at_o = detail::transform_step_unchecked(g, h, Vector::Zero(n));
        out.push_back(GrowthWitness{j, a, std::abs(h(a)) / std::abs(a), std::move(g), norm, at_o});
    }
    return out;
}

}  // namespace lapval
