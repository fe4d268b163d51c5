#pragma once

// Monte Carlo estimates of \int e^{-<x,y>} g(y) dy by uniform sampling of an
// axis-aligned bounding box. Membership is tested against facet inequalities
// only; no triangulation or transform code is involved.
//
// Sample i uses coordinates u(seed, i*n + c), c = 0..n-1, from a counter-based
// splitmix64 stream, so the estimate does not depend on how samples are split
// across threads. Partial sums over fixed chunks are combined in index order.

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "lapval/errors.hpp"
#include "lapval/functrans.hpp"
#include "lapval/geom.hpp"
#include "lapval/parallel.hpp"

namespace lapval {

struct MCEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t samples = 0;
    std::uint64_t seed = 0;
};

inline constexpr std::int64_t kMinOracleSamples = 1000;

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Uniform in [0, 1) at position `counter` of the stream keyed by `key`.
inline double counter_uniform(std::uint64_t key, std::uint64_t counter) {
    const std::uint64_t bits = splitmix64(key + counter * 0x9E3779B97F4A7C15ull);
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

struct FacetSystem {
    Matrix a;  // rows: outward normals
    Vector b;

    explicit FacetSystem(const Polytope& p) : a(p.facets().size(), p.ambient_dim()), b(p.facets().size()) {
        for (std::size_t i = 0; i < p.facets().size(); ++i) {
            a.row(static_cast<Eigen::Index>(i)) = p.facets()[i].normal.transpose();
            b[static_cast<Eigen::Index>(i)] = p.facets()[i].offset;
        }
    }
    bool contains(const Vector& y) const { return ((a * y - b).array() <= 0.0).all(); }
};

inline void extend_bounds(const Polytope& p, Vector& lo, Vector& hi) {
    for (const auto& v : p.vertices()) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }
}

// integrand(y) is evaluated at uniform points of [lo, hi].
inline MCEstimate sample_box(const Vector& lo, const Vector& hi, const Vector& x,
                             const std::function<double(const Vector&)>& integrand, std::int64_t count,
                             std::uint64_t seed) {
    const int n = static_cast<int>(lo.size());
    const double box_volume = (hi - lo).prod();
    const std::uint64_t key = splitmix64(seed);
    constexpr std::int64_t chunk = 8192;
    const std::int64_t chunks = (count + chunk - 1) / chunk;
    std::vector<double> sums(chunks), squares(chunks);
    parallel_for(static_cast<std::size_t>(chunks), [&](std::size_t c) {
        Vector y(n);
        double s = 0.0, s2 = 0.0;
        const std::int64_t begin = static_cast<std::int64_t>(c) * chunk;
        const std::int64_t end = std::min(count, begin + chunk);
        for (std::int64_t i = begin; i < end; ++i) {
            for (int k = 0; k < n; ++k)
                y[k] = lo[k] + (hi[k] - lo[k]) * counter_uniform(key, static_cast<std::uint64_t>(i) * n + k);
            const double g = integrand(y);
            if (g == 0.0) continue;
            const double v = g * std::exp(-x.dot(y));
            s += v;
            s2 += v * v;
        }
        sums[c] = s;
        squares[c] = s2;
    });
    double s = 0.0, s2 = 0.0;
    for (std::int64_t c = 0; c < chunks; ++c) {
        s += sums[c];
        s2 += squares[c];
    }
    const double nd = static_cast<double>(count);
    const double mean = s / nd;
    const double var = std::max(0.0, (s2 - nd * mean * mean) / (nd - 1.0));
    return MCEstimate{box_volume * mean, box_volume * std::sqrt(var / nd), count, seed};
}

inline void check_sample_count(std::int64_t count) {
    if (count < kMinOracleSamples) throw DomainError("Monte Carlo oracle needs at least 1000 samples");
}

}  // namespace detail

inline MCEstimate mc_body(const Polytope& p, const Vector& x, std::int64_t count, std::uint64_t seed) {
    detail::check_sample_count(count);
    if (x.size() != p.ambient_dim()) throw DimensionMismatch("mc_body: point dimension differs");
    if (!p.full_dimensional()) throw DegenerateInput("mc_body: body must be full-dimensional");
    Vector lo = p.vertices().front(), hi = lo;
    detail::extend_bounds(p, lo, hi);
    const detail::FacetSystem sys(p);
    return detail::sample_box(lo, hi, x, [&](const Vector& y) { return sys.contains(y) ? 1.0 : 0.0; }, count, seed);
}

inline MCEstimate mc_union(const PolyUnion& u, const Vector& x, std::int64_t count, std::uint64_t seed) {
    detail::check_sample_count(count);
    if (x.size() != u.ambient_dim()) throw DimensionMismatch("mc_union: point dimension differs");
    std::vector<detail::FacetSystem> systems;
    Vector lo, hi;
    for (const auto& p : u.parts) {
        if (!p.full_dimensional()) continue;
        if (lo.size() == 0) lo = hi = p.vertices().front();
        detail::extend_bounds(p, lo, hi);
        systems.emplace_back(p);
    }
    if (systems.empty()) return MCEstimate{0.0, 0.0, count, seed};
    return detail::sample_box(lo, hi, x,
                              [&](const Vector& y) {
                                  for (const auto& s : systems)
                                      if (s.contains(y)) return 1.0;
                                  return 0.0;
                              },
                              count, seed);
}

inline MCEstimate mc_step(const StepFunction& f, const GrowthFunction& h, const Vector& x, std::int64_t count,
                          std::uint64_t seed) {
    detail::check_sample_count(count);
    if (x.size() != f.ambient_dim()) throw DimensionMismatch("mc_step: point dimension differs");
    std::vector<detail::FacetSystem> systems;
    std::vector<double> values;
    Vector lo, hi;
    for (const auto& p : f.pieces()) {
        if (!p.region.full_dimensional()) continue;
        const double v = h(p.weight);
        if (v == 0.0) continue;
        if (lo.size() == 0) lo = hi = p.region.vertices().front();
        detail::extend_bounds(p.region, lo, hi);
        systems.emplace_back(p.region);
        values.push_back(v);
    }
    if (systems.empty()) return MCEstimate{0.0, 0.0, count, seed};
    return detail::sample_box(lo, hi, x,
                              [&](const Vector& y) {
                                  for (std::size_t i = 0; i < systems.size(); ++i)
                                      if (systems[i].contains(y)) return values[i];
                                  return 0.0;
                              },
                              count, seed);
}

}  // namespace lapval
