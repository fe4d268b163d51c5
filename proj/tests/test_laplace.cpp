#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>

#include <cmath>
#include <cstdlib>
#include <random>
#include <vector>

#include "lapval/dissect.hpp"
#include "lapval/laplace.hpp"
#include "lapval/random.hpp"

using namespace lapval;
using boost::math::quadrature::gauss_kronrod;
using Big = boost::multiprecision::cpp_dec_float_100;

namespace {

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out[i++] = x;
    return out;
}

// Newton table in 100 decimal digits over distinct nodes.
double reference_exp_dd(const std::vector<double>& z) {
    std::vector<Big> t, s;
    for (double v : z) {
        s.emplace_back(v);
        t.push_back(exp(Big(v)));
    }
    for (std::size_t j = 1; j < z.size(); ++j)
        for (std::size_t i = 0; i + j < z.size(); ++i) t[i] = (t[i + 1] - t[i]) / (s[i + j] - s[i]);
    return static_cast<double>(t[0]);
}

// \int_T e^{-<x,y>} dy over the triangle conv{a, b, c} by nested Gauss-Kronrod
// on y = a + u (b - a) + v (c - a), 0 <= v <= 1 - u.
double quadrature_triangle(const Vector& a, const Vector& b, const Vector& c, const Vector& x) {
    const double jac = std::abs((b - a)[0] * (c - a)[1] - (b - a)[1] * (c - a)[0]);
    auto inner = [&](double u) {
        return gauss_kronrod<double, 31>::integrate(
            [&](double v) { return std::exp(-x.dot(a + u * (b - a) + v * (c - a))); }, 0.0, 1.0 - u, 10, 1e-14);
    };
    return jac * gauss_kronrod<double, 31>::integrate(inner, 0.0, 1.0, 10, 1e-14);
}

}  // namespace

TEST(ExpDD, SingleNodeIsExp) {
    EXPECT_DOUBLE_EQ(exp_dd({0.7}), std::exp(0.7));
}

TEST(ExpDD, TwoNodesIsDifferenceQuotient) {
    EXPECT_NEAR(exp_dd({0.0, 2.0}), (std::exp(2.0) - 1.0) / 2.0, 1e-15 * std::exp(2.0));
}

TEST(ExpDD, ConfluentNodesGiveDerivatives) {
    EXPECT_NEAR(exp_dd({1.3, 1.3}), std::exp(1.3), 1e-15 * std::exp(1.3));
    EXPECT_NEAR(exp_dd({0.0, 0.0, 0.0}), 0.5, 1e-16);
    EXPECT_NEAR(exp_dd({-2.0, -2.0, -2.0, -2.0}), std::exp(-2.0) / 6.0, 1e-16);
}

TEST(ExpDD, ClusteredNodes) {
    EXPECT_NEAR(exp_dd({0.0, 1e-13, 2e-13}), 0.5, 1e-10);
}

TEST(ExpDD, SymmetricInNodeOrder) {
    EXPECT_EQ(exp_dd({3.0, -1.0, 0.5}), exp_dd({0.5, 3.0, -1.0}));
}

TEST(ExpDD, MatchesHighPrecisionReference) {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> count(2, 9);
    std::uniform_real_distribution<double> centre(-20.0, 20.0), logspread(-5.0, 1.5);
    double worst = 0.0;
    for (int t = 0; t < 2000; ++t) {
        const int m = count(rng);
        const double c = centre(rng), w = std::pow(10.0, logspread(rng));
        std::uniform_real_distribution<double> node(c - w, c + w);
        std::vector<double> z;
        for (int i = 0; i < m; ++i) z.push_back(node(rng));
        std::sort(z.begin(), z.end());
        if (std::adjacent_find(z.begin(), z.end(), [](double a, double b) { return b - a < 1e-6; }) != z.end())
            continue;
        const double ref = reference_exp_dd(z);
        worst = std::max(worst, std::abs(exp_dd(z) - ref) / std::abs(ref));
    }
    EXPECT_LT(worst, 1e-13);
}

TEST(ExpDD, RejectsBadNodes) {
    EXPECT_THROW(exp_dd(std::span<const double>{}), DomainError);
    EXPECT_THROW(exp_dd({0.0, NAN}), DomainError);
    EXPECT_THROW(exp_dd({INFINITY}), DomainError);
}

TEST(Laplace, CubeAlongAxis) {
    for (int n = 1; n <= 4; ++n)
        for (double r : {-3.0, -0.2, 0.2, 1.0, 5.0}) {
            const double expected = -std::expm1(-r) / r;
            EXPECT_NEAR(laplace_polytope(Polytope::cube(n), r * basis_vector(n, 0)), expected, 1e-14 * expected);
        }
}

TEST(Laplace, CubeAtOriginIsOne) {
    EXPECT_EQ(laplace_polytope(Polytope::cube(3), Vector::Zero(3)), 1.0);
}

// L T^2 (r, 0) = \int_0^1 e^{-r y}(1 - y) dy against (r - 1 + e^{-r}) / r^2.
TEST(Laplace, TriangleAlongAxisAgainstQuadrature) {
    const Polytope t = Polytope::standard_simplex(2);
    for (double r : {-4.0, -1.0, -1e-3, 0.5, 2.0, 9.0}) {
        const double quad =
            gauss_kronrod<double, 61>::integrate([r](double y) { return std::exp(-r * y) * (1.0 - y); }, 0.0, 1.0, 15, 1e-15);
        const double closed = (r - 1.0 + std::exp(-r)) / (r * r);
        EXPECT_NEAR(laplace_polytope(t, vec({r, 0.0})), quad, 1e-13 * std::abs(quad)) << r;
        if (std::abs(r) > 0.1) EXPECT_NEAR(closed, quad, 1e-13 * std::abs(quad));
    }
}

TEST(Laplace, RandomPolygonsAgainstQuadrature) {
    InstanceGenerator gen(31);
    for (int t = 0; t < 10; ++t) {
        const Polytope p = gen.body(2);
        const Vector x = gen.point(2);
        double quad = 0.0;
        for (const auto& s : triangulate(p))
            quad += quadrature_triangle(s.vertices()[0], s.vertices()[1], s.vertices()[2], x);
        const double exact = laplace_polytope(p, x);
        EXPECT_NEAR(exact, quad, 1e-11 * std::abs(quad));
    }
}

TEST(Laplace, OriginGivesVolume) {
    InstanceGenerator gen(12);
    for (int t = 0; t < 30; ++t) {
        const int n = 1 + t % 4;
        const Polytope p = gen.body(n);
        EXPECT_NEAR(laplace_polytope(p, Vector::Zero(n)), volume(p), 1e-12 * volume(p));
    }
}

TEST(Laplace, BoxPathAgreesWithTriangulation) {
    InstanceGenerator gen(13);
    const Polytope b = Polytope::box(vec({-0.5, 0.25, 1.0}), vec({0.3, 1.0, 1.5}));
    for (int t = 0; t < 20; ++t) {
        const Vector x = gen.point(3);
        const double box = laplace_polytope(b, x);
        EXPECT_NEAR(laplace_polytope(b, x, EvalPath::triangulation), box, 1e-12 * box);
    }
}

TEST(Laplace, BoxNearZeroAxis) {
    const double v = laplace_box(vec({0.0, 0.0}), vec({2.0, 1.0}), vec({1e-13, 1.0}));
    EXPECT_NEAR(v, 2.0 * -std::expm1(-1.0), 1e-12);
}

TEST(Laplace, LowerDimensionalBodyIsZero) {
    const Polytope seg = Polytope::from_points({vec({0, 0}), vec({1, 1})});
    EXPECT_EQ(laplace_polytope(seg, vec({0.3, -0.2})), 0.0);
}

TEST(Laplace, DegenerateSimplexRejected) {
    const Simplex s({vec({0, 0}), vec({1, 1}), vec({2, 2})}, true);
    EXPECT_THROW(laplace_simplex(s, vec({0, 0})), DegenerateInput);
}

TEST(Laplace, DimensionMismatch) {
    EXPECT_THROW(laplace_polytope(Polytope::cube(2), Vector::Zero(3)), DimensionMismatch);
}

TEST(Laplace, UnionOfDisjointPartsIsSum) {
    const Polytope a = Polytope::cube(2), b = translate(Polytope::cube(2), vec({3, 0}));
    const Vector x = vec({0.4, -0.7});
    EXPECT_NEAR(laplace_union(PolyUnion({a, b}), x), laplace_polytope(a, x) + laplace_polytope(b, x), 1e-14);
}

TEST(Laplace, UnionWithNestedPart) {
    const Polytope big = Polytope::cube(2);
    const Polytope small = Polytope::box(vec({0.2, 0.2}), vec({0.6, 0.7}));
    const Vector x = vec({1.1, 0.3});
    EXPECT_NEAR(laplace_union(PolyUnion({big, small}), x), laplace_polytope(big, x), 1e-14);
}

// 2T^2 ∪ C^2: the union is C^2 plus the triangle with vertices (1,0), (2,0), (1,1)
// and its mirror (0,1), (1,1), (0,2).
TEST(Laplace, UnionOfSimplexAndCube) {
    const Polytope t2 = dilated_simplex(2, 2), c = Polytope::cube(2);
    const Polytope right = convex_hull({vec({1, 0}), vec({2, 0}), vec({1, 1})});
    const Polytope top = convex_hull({vec({0, 1}), vec({1, 1}), vec({0, 2})});
    for (double s : {-1.0, 0.5, 2.0}) {
        const Vector x = vec({s, 0.3});
        const double direct = laplace_polytope(c, x) + laplace_polytope(right, x) + laplace_polytope(top, x);
        EXPECT_NEAR(laplace_union(PolyUnion({t2, c}), x), direct, 1e-13 * direct);
    }
}

TEST(Laplace, GridIndependentOfThreadCount) {
    InstanceGenerator gen(14);
    const Polytope p = gen.body(3);
    const auto xs = gen.points(3, 64);
    setenv("LAPVAL_THREADS", "1", 1);
    const auto serial = laplace_grid(p, xs);
    setenv("LAPVAL_THREADS", "4", 1);
    const auto parallel = laplace_grid(p, xs);
    unsetenv("LAPVAL_THREADS");
    for (std::size_t i = 0; i < xs.size(); ++i) {
        EXPECT_EQ(serial[i].value, parallel[i].value);
        EXPECT_EQ(serial[i].value, laplace_polytope(p, xs[i]));
    }
}
