#pragma once

// Random instances for the property checks: hulls of 6-12 uniform points in
// [-1,1]^n, upper-triangular maps with diagonal in [0.5, 2], points uniform
// in [-3,3]^n, hyperplanes through an interior point, and box step functions.

#include <cstdint>
#include <random>
#include <vector>

#include "lapval/functrans.hpp"
#include "lapval/geom.hpp"

namespace lapval {

class InstanceGenerator {
public:
    explicit InstanceGenerator(std::uint64_t seed) : rng_(seed) {}

    std::mt19937_64& engine() { return rng_; }

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    Vector vector(int n, double lo, double hi) {
        Vector v(n);
        for (int i = 0; i < n; ++i) v[i] = uniform(lo, hi);
        return v;
    }

    Vector point(int n) { return vector(n, -3.0, 3.0); }

    std::vector<Vector> points(int n, int count) {
        std::vector<Vector> xs;
        for (int i = 0; i < count; ++i) xs.push_back(point(n));
        return xs;
    }

    // Redrawn until full-dimensional.
    Polytope body(int n) {
        for (;;) {
            const int count = integer(std::max(6, n + 1), std::max(12, n + 1));
            std::vector<Vector> pts;
            for (int i = 0; i < count; ++i) pts.push_back(vector(n, -1.0, 1.0));
            Polytope p = Polytope::from_points(std::move(pts));
            if (p.full_dimensional() && volume(p) > 1e-3) return p;
        }
    }

    LinearMap upper_triangular(int n) {
        Matrix m = Matrix::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            m(i, i) = uniform(0.5, 2.0);
            for (int j = i + 1; j < n; ++j) m(i, j) = uniform(-1.0, 1.0);
        }
        return LinearMap(m);
    }

    // Random direction through a random convex combination of the vertices.
    Hyperplane cut(const Polytope& p) {
        const int n = p.ambient_dim();
        Vector inner = Vector::Zero(n);
        double total = 0.0;
        for (const auto& v : p.vertices()) {
            const double w = uniform(0.1, 1.0);
            inner += w * v;
            total += w;
        }
        inner /= total;
        Vector normal = vector(n, -1.0, 1.0);
        while (normal.norm() < 1e-3) normal = vector(n, -1.0, 1.0);
        return Hyperplane(normal, normal.dot(inner));
    }

    // A random box in [-1,1]^n cut by one or two hyperplanes into interior-
    // disjoint convex pieces with weights in [-3, 3].
    StepFunction step_function(int n) {
        Vector lo(n), hi(n);
        for (int i = 0; i < n; ++i) {
            const double a = uniform(-1.0, 0.6), b = uniform(a + 0.3, 1.0);
            lo[i] = a;
            hi[i] = b;
        }
        std::vector<Polytope> cells{Polytope::box(lo, hi)};
        const int cuts = integer(1, 2);
        for (int c = 0; c < cuts; ++c) {
            std::vector<Polytope> next;
            const Hyperplane h = cut(cells.front());
            for (const auto& cell : cells) {
                auto parts = clip(cell, h);
                if (parts.minus.full_dimensional()) next.push_back(std::move(parts.minus));
                if (parts.plus.full_dimensional()) next.push_back(std::move(parts.plus));
            }
            cells = std::move(next);
        }
        StepFunction f(n);
        for (auto& cell : cells) {
            double w = 0.0;
            while (std::abs(w) < 0.05) w = uniform(-3.0, 3.0);
            f.add(w, std::move(cell));
        }
        return f;
    }

private:
    std::mt19937_64 rng_;
};

}  // namespace lapval
