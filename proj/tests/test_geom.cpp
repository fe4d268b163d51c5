#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "lapval/geom.hpp"
#include "lapval/random.hpp"

using namespace lapval;

namespace {

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out[i++] = x;
    return out;
}

double simplex_volume_sum(const Polytope& p) {
    double s = 0.0;
    for (const auto& t : triangulate(p)) s += t.volume();
    return s;
}

// Points spread along the boundary of a 2D polygon, vertices in hull order.
std::vector<Vector> boundary_samples(const std::vector<Vector>& ring, int per_edge) {
    std::vector<Vector> out;
    for (std::size_t i = 0; i < ring.size(); ++i) {
        const Vector& a = ring[i];
        const Vector& b = ring[(i + 1) % ring.size()];
        for (int k = 0; k < per_edge; ++k) out.push_back(a + (b - a) * (static_cast<double>(k) / per_edge));
    }
    return out;
}

double point_cloud_hausdorff(const std::vector<Vector>& a, const std::vector<Vector>& b) {
    auto one_side = [](const std::vector<Vector>& p, const std::vector<Vector>& q) {
        double worst = 0.0;
        for (const auto& u : p) {
            double best = INFINITY;
            for (const auto& v : q) best = std::min(best, (u - v).norm());
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(one_side(a, b), one_side(b, a));
}

}  // namespace

TEST(Geom, UnitCubeMeasures) {
    const Polytope c = Polytope::cube(3);
    EXPECT_NEAR(volume(c), 1.0, 1e-15);
    EXPECT_NEAR(surface_area(c), 6.0, 1e-14);
    EXPECT_EQ(triangulate(c).size(), 6u);
    EXPECT_NEAR(simplex_volume_sum(c), 1.0, 1e-14);
}

TEST(Geom, StandardTrianglePerimeter) {
    const Polytope t = Polytope::standard_simplex(2);
    EXPECT_NEAR(volume(t), 0.5, 1e-15);
    EXPECT_NEAR(surface_area(t), 2.0 + std::sqrt(2.0), 1e-14);
}

TEST(Geom, HullDropsInteriorPoints) {
    const Polytope p = convex_hull({vec({0, 0}), vec({1, 0}), vec({1, 1}), vec({0, 1}), vec({0.5, 0.5})});
    EXPECT_EQ(p.vertices().size(), 4u);
    EXPECT_NEAR(volume(p), 1.0, 1e-15);
}

TEST(Geom, LowerDimensionalHull) {
    const Polytope seg = convex_hull({vec({0, 0}), vec({1, 1}), vec({0.5, 0.5})});
    EXPECT_EQ(seg.dim(), 1);
    EXPECT_FALSE(seg.full_dimensional());
    EXPECT_EQ(seg.vertices().size(), 2u);
    EXPECT_EQ(volume(seg), 0.0);
}

TEST(Geom, HullIsIdempotent) {
    InstanceGenerator gen(7);
    for (int n = 2; n <= 4; ++n)
        for (int t = 0; t < 10; ++t) {
            const Polytope p = gen.body(n);
            const Polytope q = convex_hull(p.vertices());
            ASSERT_EQ(p.vertices().size(), q.vertices().size());
            for (std::size_t i = 0; i < p.vertices().size(); ++i)
                EXPECT_LT((p.vertices()[i] - q.vertices()[i]).norm(), 1e-15);
            EXPECT_EQ(p.facets().size(), q.facets().size());
        }
}

// Triangulation volumes against the facet-pyramid recursion.
TEST(Geom, TriangulationVolumeMatchesFacetRecursion) {
    InstanceGenerator gen(11);
    for (int n = 2; n <= 5; ++n)
        for (int t = 0; t < 10; ++t) {
            const Polytope p = gen.body(n);
            const double v = volume(p);
            EXPECT_NEAR(simplex_volume_sum(p), v, 1e-12 * v) << "n = " << n;
        }
}

TEST(Geom, TriangulationIsInteriorDisjointCover) {
    InstanceGenerator gen(5);
    std::mt19937_64 rng(99);
    for (int n = 2; n <= 3; ++n) {
        const Polytope p = gen.body(n);
        const auto simplices = triangulate(p);
        std::vector<Polytope> cells;
        for (const auto& s : simplices) cells.push_back(Polytope::from_simplex(s));
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        int checked = 0;
        for (int k = 0; k < 1000; ++k) {
            Vector y(n);
            for (int i = 0; i < n; ++i) y[i] = u(rng);
            if (distance(y, p) < 1e-9 && !p.contains(y, -1e-6)) continue;
            bool boundary = false;
            int inside = 0;
            for (const auto& c : cells) {
                if (c.contains(y, -1e-9)) ++inside;
                else if (c.contains(y, 1e-9)) boundary = true;
            }
            if (boundary) continue;
            EXPECT_EQ(inside, p.contains(y) ? 1 : 0);
            ++checked;
        }
        EXPECT_GT(checked, 900);
    }
}

TEST(Geom, ClipStandardSimplex) {
    const auto parts = clip(Polytope::standard_simplex(3), Hyperplane(Vector::Ones(3), 0.5));
    EXPECT_NEAR(volume(parts.minus), 0.125 / 6.0, 1e-15);
    EXPECT_NEAR(volume(parts.plus), 1.0 / 6.0 - 0.125 / 6.0, 1e-15);
    EXPECT_EQ(parts.section.dim(), 2);
}

TEST(Geom, ClipPartitionsByMembership) {
    InstanceGenerator gen(3);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int n = 2; n <= 4; ++n)
        for (int t = 0; t < 5; ++t) {
            const Polytope p = gen.body(n);
            const Hyperplane h = gen.cut(p);
            const auto parts = clip(p, h);
            EXPECT_NEAR(volume(parts.minus) + volume(parts.plus), volume(p), 1e-12);
            for (int k = 0; k < 1000; ++k) {
                Vector y(n);
                for (int i = 0; i < n; ++i) y[i] = u(rng);
                const double s = h.signed_distance(y);
                if (std::abs(s) < 1e-9 || distance(y, p) < 1e-9 && !p.contains(y, -1e-9)) continue;
                if (!p.contains(y, -1e-9)) {
                    EXPECT_FALSE(parts.minus.contains(y, -1e-9) || parts.plus.contains(y, -1e-9));
                    continue;
                }
                EXPECT_EQ(parts.minus.contains(y, 1e-9), s < 0);
                EXPECT_EQ(parts.plus.contains(y, 1e-9), s > 0);
            }
        }
}

TEST(Geom, ClipMissingBodyKeepsItWhole) {
    const Polytope c = Polytope::cube(2);
    const auto parts = clip(c, Hyperplane(vec({1, 0}), 5.0));
    EXPECT_NEAR(volume(parts.minus), 1.0, 1e-15);
    EXPECT_TRUE(parts.plus.is_empty() || !parts.plus.full_dimensional());
}

TEST(Geom, HausdorffOfTranslatedSquare) {
    const double eps = 0.3;
    const Polytope c = Polytope::cube(2);
    EXPECT_NEAR(hausdorff(c, translate(c, vec({eps, eps}))), eps * std::sqrt(2.0), 1e-12);
    EXPECT_EQ(hausdorff(c, c), 0.0);
}

// Brute force over dense boundary samples of two polygons.
TEST(Geom, HausdorffMatchesBruteForce) {
    const std::vector<Vector> tri{vec({0, 0}), vec({2, 0}), vec({0, 1})};
    const std::vector<Vector> quad{vec({0.2, -0.3}), vec({1.5, 0.1}), vec({1.1, 1.2}), vec({-0.4, 0.6})};
    const double exact = hausdorff(convex_hull(tri), convex_hull(quad));
    const double brute = point_cloud_hausdorff(boundary_samples(tri, 800), boundary_samples(quad, 800));
    EXPECT_NEAR(exact, brute, 5e-3);
}

TEST(Geom, HausdorffTriangleInequality) {
    InstanceGenerator gen(21);
    for (int t = 0; t < 20; ++t) {
        const int n = 2 + t % 2;
        const Polytope a = gen.body(n), b = gen.body(n), c = gen.body(n);
        EXPECT_LE(hausdorff(a, c), hausdorff(a, b) + hausdorff(b, c) + 1e-12);
        EXPECT_NEAR(hausdorff(a, b), hausdorff(b, a), 1e-12);
    }
}

TEST(Geom, TransformComposition) {
    InstanceGenerator gen(8);
    for (int n = 2; n <= 4; ++n) {
        const Polytope p = gen.body(n);
        const LinearMap phi = gen.upper_triangular(n), psi = gen.upper_triangular(n);
        const Vector zero = Vector::Zero(n);
        const Polytope twice = transform_body(transform_body(p, phi, zero), psi, zero);
        const Polytope once = transform_body(p, psi.compose(phi), zero);
        EXPECT_LT(hausdorff(twice, once), 1e-12);
        EXPECT_NEAR(volume(once), psi.det() * phi.det() * volume(p), 1e-12 * volume(once));
    }
}

TEST(Geom, SingularMapRejected) {
    Matrix m(2, 2);
    m << 1, 2, 2, 4;
    EXPECT_THROW(LinearMap{m}, SingularMap);
}

TEST(Geom, BoxBoundsValidated) {
    EXPECT_THROW(Polytope::box(vec({0, 1}), vec({1, 1})), DomainError);
    EXPECT_THROW(Polytope::box(vec({0}), vec({1, 1})), DimensionMismatch);
}

TEST(Geom, IntersectBoxes) {
    const Polytope a = Polytope::box(vec({0, 0}), vec({2, 2})), b = Polytope::box(vec({1, 1}), vec({3, 3}));
    EXPECT_NEAR(volume(intersect(a, b)), 1.0, 1e-15);
    const Polytope touch = intersect(a, Polytope::box(vec({2, 0}), vec({3, 1})));
    EXPECT_EQ(touch.dim(), 1);
    EXPECT_TRUE(intersect(a, Polytope::box(vec({5, 5}), vec({6, 6}))).is_empty());
}

TEST(Geom, IntersectAndDifferencePartitionVolume) {
    InstanceGenerator gen(4);
    for (int n = 2; n <= 3; ++n)
        for (int t = 0; t < 10; ++t) {
            const Polytope p = gen.body(n), q = gen.body(n);
            double diff = 0.0;
            for (const auto& piece : set_difference(p, q)) diff += volume(piece);
            EXPECT_NEAR(diff + volume(intersect(p, q)), volume(p), 1e-12);
        }
}

TEST(Geom, DistanceToSquare) {
    const Polytope c = Polytope::cube(2);
    EXPECT_NEAR(distance(vec({2, 0.5}), c), 1.0, 1e-12);
    EXPECT_NEAR(distance(vec({2, 2}), c), std::sqrt(2.0), 1e-12);
    EXPECT_EQ(distance(vec({0.5, 0.5}), c), 0.0);
}
