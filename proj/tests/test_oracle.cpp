#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

#include "lapval/dissect.hpp"
#include "lapval/oracle.hpp"
#include "lapval/random.hpp"

using namespace lapval;

namespace {

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out[i++] = x;
    return out;
}

constexpr std::int64_t kSamples = 1000000;

}  // namespace

TEST(Oracle, TriangleVolume) {
    const auto e = mc_body(Polytope::standard_simplex(2), Vector::Zero(2), kSamples, 1);
    EXPECT_LE(std::abs(e.mean - 0.5), 4.0 * e.std_error);
    EXPECT_GT(e.std_error, 0.0);
    EXPECT_EQ(e.samples, kSamples);
}

TEST(Oracle, CubeAlongAxis) {
    const auto e = mc_body(Polytope::cube(2), vec({1, 0}), kSamples, 2);
    EXPECT_LE(std::abs(e.mean - (1.0 - std::exp(-1.0))), 4.0 * e.std_error);
}

TEST(Oracle, SameSeedBitIdentical) {
    InstanceGenerator gen(3);
    const Polytope p = gen.body(3);
    const Vector x = gen.point(3);
    const auto a = mc_body(p, x, 100000, 77), b = mc_body(p, x, 100000, 77);
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.std_error, b.std_error);
}

TEST(Oracle, IndependentOfThreadCount) {
    InstanceGenerator gen(4);
    const Polytope p = gen.body(3);
    const Vector x = gen.point(3);
    setenv("LAPVAL_THREADS", "1", 1);
    const auto serial = mc_body(p, x, 200000, 5);
    setenv("LAPVAL_THREADS", "3", 1);
    const auto threaded = mc_body(p, x, 200000, 5);
    unsetenv("LAPVAL_THREADS");
    EXPECT_EQ(serial.mean, threaded.mean);
    EXPECT_EQ(serial.std_error, threaded.std_error);
}

TEST(Oracle, DistinctSeedsAgreeStatistically) {
    InstanceGenerator gen(5);
    const Polytope p = gen.body(2);
    const Vector x = gen.point(2);
    const auto a = mc_body(p, x, 200000, 10), b = mc_body(p, x, 200000, 11);
    EXPECT_NE(a.mean, b.mean);
    EXPECT_LE(std::abs(a.mean - b.mean), 6.0 * std::hypot(a.std_error, b.std_error));
}

TEST(Oracle, Preconditions) {
    EXPECT_THROW(mc_body(Polytope::cube(2), vec({0, 0}), 999, 1), DomainError);
    const Polytope seg = Polytope::from_points({vec({0, 0}), vec({1, 1})});
    EXPECT_THROW(mc_body(seg, vec({0, 0}), 1000, 1), DegenerateInput);
}

TEST(Oracle, RandomBodiesCoverage) {
    InstanceGenerator gen(6);
    int inside = 0;
    for (int t = 0; t < 20; ++t) {
        const int n = 2 + t % 2;
        const Polytope p = gen.body(n);
        const Vector x = gen.point(n);
        const auto e = mc_body(p, x, 200000, 100 + t);
        inside += std::abs(e.mean - laplace_polytope(p, x)) <= 4.0 * e.std_error;
    }
    EXPECT_GE(inside, 18);
}

TEST(OracleUnion, SinglePartMatchesBody) {
    const Polytope t = Polytope::standard_simplex(2);
    const Vector x = vec({0.5, -0.5});
    const auto u = mc_union(PolyUnion({t}), x, kSamples, 9);
    const auto b = mc_body(t, x, kSamples, 10);
    EXPECT_LE(std::abs(u.mean - b.mean), 4.0 * std::hypot(u.std_error, b.std_error));
}

TEST(OracleUnion, SimplexAndCube) {
    const PolyUnion u({dilated_simplex(2, 2), Polytope::cube(2)});
    for (double s : {-1.0, 1.5}) {
        const Vector x = vec({s, 0.0});
        const auto e = mc_union(u, x, kSamples, 12);
        EXPECT_LE(std::abs(e.mean - laplace_union(u, x)), 4.0 * e.std_error);
    }
}

TEST(OracleUnion, DisjointPartsAdd) {
    const Polytope a = Polytope::cube(2), b = translate(Polytope::standard_simplex(2), vec({2, 2}));
    const Vector x = vec({0.3, 0.1});
    const auto e = mc_union(PolyUnion({a, b}), x, kSamples, 13);
    EXPECT_LE(std::abs(e.mean - laplace_polytope(a, x) - laplace_polytope(b, x)), 4.0 * e.std_error);
}

TEST(OracleStep, IndicatorOfSquare) {
    StepFunction f(2);
    f.add(1.0, Polytope::cube(2));
    const Vector x = vec({-0.4, 0.8});
    const auto e = mc_step(f, growth_from_name("identity"), x, kSamples, 14);
    EXPECT_LE(std::abs(e.mean - laplace_polytope(Polytope::cube(2), x)), 4.0 * e.std_error);
}

TEST(OracleStep, TwoPiecesSaturated) {
    StepFunction f(2);
    f.add(2.0, Polytope::box(vec({0, 0}), vec({1, 1})));
    f.add(-0.5, Polytope::box(vec({1, 0}), vec({2, 0.5})));
    const auto h = growth_from_name("saturate");
    const Vector x = vec({0.7, -0.3});
    const auto e = mc_step(f, h, x, kSamples, 15);
    EXPECT_LE(std::abs(e.mean - transform_step(f, h, x)), 4.0 * e.std_error);
}

TEST(OracleStep, ZeroFunctionExactlyZero) {
    StepFunction f(2);
    f.add(0.0, Polytope::cube(2));
    const auto e = mc_step(f, growth_from_name("identity"), vec({1, 1}), 1000, 16);
    EXPECT_EQ(e.mean, 0.0);
    EXPECT_EQ(e.std_error, 0.0);
}
