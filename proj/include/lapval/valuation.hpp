#pragma once

// Property harness for maps Z from polytopes to functions on R^n. Each check
// evaluates one structural identity of the Laplace transform (splitting by a
// hyperplane, positive GL covariance, logarithmic translation covariance, the
// cube recursion along e_1, ...) for a candidate Z and reports the worst
// relative residual.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lapval/errors.hpp"
#include "lapval/geom.hpp"
#include "lapval/laplace.hpp"

namespace lapval {

using BodyFunction = std::function<double(const Polytope&, const Vector&)>;
using PointFunction = std::function<double(const Vector&)>;

struct ValuationHandle {
    BodyFunction eval;
    std::string label;
    bool simple_extended = false;  // lower-dimensional bodies already map to 0

    double operator()(const Polytope& p, const Vector& x) const { return eval(p, x); }
};

inline ValuationHandle laplace_valuation() {
    return {[](const Polytope& p, const Vector& x) { return laplace_polytope(p, x); }, "laplace", true};
}

inline ValuationHandle scaled(const ValuationHandle& z, double c) {
    return {[z, c](const Polytope& p, const Vector& x) { return c * z(p, x); },
            std::to_string(c) + "*" + z.label, z.simple_extended};
}

// The extension that is Z on full-dimensional bodies and 0 below.
inline ValuationHandle extend_simple(const ValuationHandle& z) {
    if (z.simple_extended) return z;
    return {[z](const Polytope& p, const Vector& x) { return p.full_dimensional() ? z(p, x) : 0.0; },
            z.label, true};
}

inline double relative_error(double residual, double reference) {
    if (!std::isfinite(residual)) return std::numeric_limits<double>::infinity();
    return std::abs(residual) / std::max(std::abs(reference), 1e-300);
}

struct Witness {
    std::optional<Polytope> body;
    Vector point;
    double rel_err = 0.0;
    std::string note;
};

struct CheckReport {
    std::string name;
    int trials = 0;
    double max_rel_err = 0.0;
    double tol = 0.0;
    bool passed = true;
    std::vector<Witness> witnesses;

    static constexpr std::size_t kMaxWitnesses = 8;

    CheckReport(std::string n, double t) : name(std::move(n)), tol(t) {}

    void record(double rel, const Polytope* body, const Vector& x, std::string note = {}) {
        ++trials;
        if (!(rel <= max_rel_err)) max_rel_err = std::isnan(rel) ? std::numeric_limits<double>::infinity() : rel;
        if (!(rel <= tol)) {
            passed = false;
            if (witnesses.size() < kMaxWitnesses)
                witnesses.push_back(Witness{body ? std::optional<Polytope>(*body) : std::nullopt, x, rel, std::move(note)});
        }
    }

    // Reports merge associatively: trials add, errors take the max.
    void merge(const CheckReport& other) {
        trials += other.trials;
        max_rel_err = std::max(max_rel_err, other.max_rel_err);
        passed = passed && other.passed;
        for (const auto& w : other.witnesses)
            if (witnesses.size() < kMaxWitnesses) witnesses.push_back(w);
    }
};

// Z K(x) = Z(K ∩ H^+)(x) + Z(K ∩ H^-)(x)
inline CheckReport check_split(const ValuationHandle& z, const Polytope& k, const Hyperplane& h,
                               const std::vector<Vector>& xs, double tol) {
    if (!k.full_dimensional()) throw DegenerateInput("check_split: body must be full-dimensional");
    const double eps = kDegeneracyTol * k.diameter();
    bool below = false, above = false;
    for (const auto& v : k.vertices()) {
        const double s = h.signed_distance(v);
        below = below || s < -eps;
        above = above || s > eps;
    }
    if (!below || !above) throw DegenerateInput("check_split: hyperplane misses the interior of the body");
    const auto parts = clip(k, h);
    CheckReport r("split", tol);
    for (const auto& x : xs) {
        const double whole = z(k, x);
        r.record(relative_error(whole - z(parts.minus, x) - z(parts.plus, x), whole), &k, x);
    }
    return r;
}

// Z(phi K)(x) = |det phi| Z K(phi^t x), det phi > 0
inline CheckReport check_gl_covariance(const ValuationHandle& z, const Polytope& k, const LinearMap& phi,
                                       const std::vector<Vector>& xs, double tol) {
    if (!(phi.det() > 0.0)) throw DomainError("check_gl_covariance: determinant must be positive");
    const Polytope image = transform_body(k, phi, Vector::Zero(k.ambient_dim()));
    CheckReport r("gl-covariance", tol);
    for (const auto& x : xs) {
        const double lhs = z(image, x);
        r.record(relative_error(lhs - std::abs(phi.det()) * z(k, phi.apply_transpose(x)), lhs), &k, x);
    }
    return r;
}

// Z(K + t)(x) = e^{-<t,x>} Z K(x)
inline CheckReport check_translation_covariance(const ValuationHandle& z, const Polytope& k, const Vector& t,
                                                const std::vector<Vector>& xs, double tol) {
    const Polytope moved = translate(k, t);
    CheckReport r("translation-covariance", tol);
    for (const auto& x : xs) {
        const double lhs = z(moved, x);
        const double rhs = t.isZero(0.0) ? z(k, x) : std::exp(-t.dot(x)) * z(k, x);
        r.record(relative_error(lhs - rhs, lhs), &k, x);
    }
    return r;
}

// f(x) = lambda f(phi_1^t x) + (1 - lambda) f(phi_2^t x), where phi_1^t and
// phi_2^t replace x_1, respectively x_2, by lambda x_1 + (1 - lambda) x_2.
inline CheckReport check_eq30(const PointFunction& f, double lambda, const std::vector<Vector>& xs, double tol) {
    if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("check_eq30: lambda must lie in (0,1)");
    CheckReport r("eq30", tol);
    for (const auto& x : xs) {
        if (x.size() < 2) throw DimensionMismatch("check_eq30: needs n >= 2");
        const double mixed = lambda * x[0] + (1.0 - lambda) * x[1];
        Vector y1 = x, y2 = x;
        y1[0] = mixed;
        y2[1] = mixed;
        const double fx = f(x);
        r.record(relative_error(fx - lambda * f(y1) - (1.0 - lambda) * f(y2), fx), nullptr, x);
    }
    return r;
}

enum class Permutations { even, all };

inline CheckReport check_permutation_symmetry(const PointFunction& f, const std::vector<Vector>& xs, double tol,
                                              Permutations which = Permutations::even) {
    CheckReport r("permutation-symmetry", tol);
    for (const auto& x : xs) {
        const int n = static_cast<int>(x.size());
        if (n < 2) throw DimensionMismatch("check_permutation_symmetry: needs n >= 2");
        if (n > 8) throw SizeLimitError("check_permutation_symmetry: n limited to 8");
        const double fx = f(x);
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        while (std::next_permutation(perm.begin(), perm.end())) {
            int inversions = 0;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
            if (which == Permutations::even && inversions % 2 != 0) continue;
            Vector px(n);
            for (int i = 0; i < n; ++i) px[i] = x[perm[i]];
            r.record(relative_error(fx - f(px), fx), nullptr, px);
        }
    }
    return r;
}

struct CubeRecursionReport {
    CheckReport report;
    double c;           // Z C^n(e_1) / (1 - e^{-1})
    double c_negative;  // -Z C^n(-e_1) / (1 - e)
};

// Along the e_1 axis a simple, covariant Z must satisfy
//   (q/p) Z C^n((q/p) e_1) = (1/p) sum_{j<q} e^{-j/p} Z C^n(e_1/p)
// (and the mirrored relation on -e_1), which pins Z C^n(r e_1) to
// c (1 - e^{-r}) / r with c = Z C^n(e_1) / (1 - e^{-1}).
inline CubeRecursionReport check_cube_recursion(const ValuationHandle& z, int n, int p, int q, double tol) {
    if (p < 1 || q < 1) throw DomainError("check_cube_recursion: p and q must be >= 1");
    const Polytope cube = Polytope::cube(n);
    const Vector e1 = basis_vector(n, 0);
    auto zc = [&](double r) { return z(cube, r * e1); };
    const double pd = p, qd = q;

    CheckReport r("cube-recursion", tol);
    const double c = zc(1.0) / (1.0 - std::exp(-1.0));
    const double c_neg = -zc(-1.0) / (1.0 - std::exp(1.0));
    for (const double sign : {1.0, -1.0}) {
        const Vector at = sign * (qd / pd) * e1;
        double sum = 0.0;
        for (int j = 0; j < q; ++j) sum += std::exp(-sign * j / pd);
        const double lhs = qd / pd * zc(sign * qd / pd);
        r.record(relative_error(lhs - sum / pd * zc(sign / pd), lhs), &cube, at, "q/p recursion");

        const double unit = zc(sign / pd);
        const double pinned = pd * std::expm1(-sign / pd) / std::expm1(-sign) * zc(sign);
        r.record(relative_error(unit - pinned, unit), &cube, sign / pd * e1, "q = p relation");

        const double rr = sign * qd / pd;
        const double model = (sign > 0 ? c : c_neg) * -std::expm1(-rr) / rr;
        r.record(relative_error(zc(rr) - model, zc(rr)), &cube, at, "calibrated cube formula");
    }
    r.record(relative_error(c - c_neg, c), &cube, e1, "c from +e_1 equals c from -e_1");
    return {std::move(r), c, c_neg};
}

struct ContinuityReport {
    CheckReport report;
    std::vector<double> distances;  // hausdorff(K_i, K)
    std::vector<double> errors;     // |Z K_i(x) - Z K(x)|
};

// Z K_i(x) -> Z K(x) along a sequence with nonincreasing Hausdorff distance
// to K. max_rel_err carries the final absolute error, or any increase of the
// error along the sequence, whichever is larger.
inline ContinuityReport check_continuity(const ValuationHandle& z, const std::vector<Polytope>& seq,
                                         const Polytope& k, const Vector& x, double tol) {
    if (seq.empty()) throw DomainError("check_continuity: empty sequence");
    ContinuityReport out{CheckReport("continuity", tol), {}, {}};
    const double target = z(k, x);
    for (const auto& ki : seq) {
        out.distances.push_back(hausdorff(ki, k));
        out.errors.push_back(std::abs(z(ki, x) - target));
    }
    for (std::size_t i = 1; i < out.distances.size(); ++i)
        if (out.distances[i] > out.distances[i - 1] * (1.0 + 1e-9) + 1e-15)
            throw DomainError("check_continuity: Hausdorff distances must be nonincreasing");
    double worst_increase = 0.0;
    std::size_t worst_at = 0;
    for (std::size_t i = 1; i < out.errors.size(); ++i) {
        const double inc = out.errors[i] - out.errors[i - 1];
        if (inc > worst_increase) {
            worst_increase = inc;
            worst_at = i;
        }
    }
    out.report.record(out.errors.back(), &seq.back(), x, "final error");
    out.report.trials = static_cast<int>(seq.size());
    if (worst_increase > 0.0) {
        const int trials = out.report.trials;
        out.report.record(worst_increase, &seq[worst_at], x, "error increased along the sequence");
        out.report.trials = trials;
    }
    return out;
}

}  // namespace lapval
