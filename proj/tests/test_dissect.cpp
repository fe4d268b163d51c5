#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "lapval/dissect.hpp"
#include "lapval/random.hpp"

using namespace lapval;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(a); }

}  // namespace

TEST(OrderSimplices, CountAndOrientation) {
    for (int n = 1; n <= 5; ++n) {
        const auto pieces = cube_order_simplices(n);
        EXPECT_EQ(pieces.size(), static_cast<std::size_t>(factorial(n)));
        double vol = 0.0;
        for (const auto& s : pieces) {
            EXPECT_NEAR(s.signed_det(), 1.0, 1e-15);
            vol += s.volume();
        }
        EXPECT_NEAR(vol, 1.0, 1e-13);
    }
}

TEST(OrderSimplices, TransformsSumToCube) {
    InstanceGenerator gen(1);
    for (int n = 2; n <= 4; ++n) {
        const auto pieces = cube_order_simplices(n);
        for (const auto& x : gen.points(n, 10)) {
            double sum = 0.0;
            for (const auto& s : pieces) sum += laplace_simplex(s, x);
            EXPECT_LT(rel(laplace_polytope(Polytope::cube(n), x), sum), 1e-12);
        }
    }
}

TEST(OrderSimplices, SizeGuard) {
    EXPECT_THROW(cube_order_simplices(9), SizeLimitError);
    EXPECT_THROW(cube_order_simplices(0), DomainError);
}

TEST(SplitSimplex, MapsAndPieces) {
    for (int n = 2; n <= 4; ++n)
        for (double lambda : {0.2, 0.5, 0.9}) {
            const auto s = split_simplex(n, lambda);
            EXPECT_NEAR(s.phi1.det(), lambda, 1e-15);
            EXPECT_NEAR(s.phi2.det(), 1.0 - lambda, 1e-15);
            const Polytope t = Polytope::standard_simplex(n);
            const Vector o = Vector::Zero(n);
            EXPECT_LT(hausdorff(transform_body(t, s.phi1, o), s.piece_minus), 1e-12);
            EXPECT_LT(hausdorff(transform_body(t, s.phi2, o), s.piece_plus), 1e-12);
            EXPECT_NEAR(volume(s.piece_minus) + volume(s.piece_plus), volume(t), 1e-14);
        }
}

TEST(SplitSimplex, LambdaOutsideRange) {
    EXPECT_THROW(split_simplex(2, 0.0), DomainError);
    EXPECT_THROW(split_simplex(2, 1.0), DomainError);
    EXPECT_THROW(split_simplex(1, 0.5), DomainError);
}

TEST(MPiece, Endpoints) {
    for (int n = 2; n <= 4; ++n) {
        EXPECT_LT(hausdorff(m_piece(1, n), Polytope::standard_simplex(n)), 1e-14);
        EXPECT_TRUE(m_piece(n, n).box_tag().has_value());
        EXPECT_NEAR(volume(m_piece(n + 3, n)), 1.0, 1e-15);
    }
    // M_2^3 = 2T^3 ∩ C^3: the cube minus the corner simplex at (1,1,1) cut by x+y+z = 2
    EXPECT_NEAR(volume(m_piece(2, 3)), 1.0 - 1.0 / 6.0, 1e-14);
    EXPECT_THROW(m_piece(0, 2), DomainError);
}

TEST(Lattice, TwoByTwo) {
    const auto pieces = lattice_decomposition(2, 2);
    ASSERT_EQ(pieces.size(), 3u);
    std::set<std::pair<double, double>> shifts;
    for (const auto& p : pieces) shifts.insert({p.shift[0], p.shift[1]});
    EXPECT_EQ(shifts, (std::set<std::pair<double, double>>{{0, 0}, {1, 0}, {0, 1}}));
}

TEST(Lattice, PieceCountAndVolume) {
    for (int n = 2; n <= 3; ++n)
        for (int m = 1; m <= 5; ++m) {
            const auto pieces = lattice_decomposition(m, n);
            EXPECT_EQ(static_cast<double>(pieces.size()), binomial(m + n - 1, n));
            double vol = 0.0;
            for (const auto& p : pieces) vol += volume(p.body);
            EXPECT_NEAR(vol, std::pow(m, n) / factorial(n), 1e-12);
        }
    EXPECT_EQ(lattice_decomposition(6, 3).size(), 56u);
}

TEST(Lattice, SizeGuard) {
    EXPECT_THROW(lattice_decomposition(200, 4), SizeLimitError);
}

TEST(Identities, ScalingLatticeReduction) {
    for (int n = 2; n <= 3; ++n)
        for (int m = n; m <= 6; ++m)
            for (double s : {-2.0, -0.5, 0.5, 2.0}) {
                const auto a = scaling_check(m, n, s);
                EXPECT_LT(rel(a.lhs, a.rhs), 1e-12);
                const auto b = lattice_identity(m, n, s);
                EXPECT_LT(rel(b.lhs, b.rhs), 1e-12) << "m=" << m << " n=" << n << " s=" << s;
                const auto c = reduction_identity(m, n, s);
                EXPECT_LT(rel(c.lhs, c.rhs), 1e-12) << "m=" << m << " n=" << n << " s=" << s;
            }
}

TEST(Coefficients, LevelWeightClosedFormInPlane) {
    for (int k = 0; k <= 6; ++k)
        for (double s : {-1.5, 0.3, 2.0}) {
            double direct = 0.0;
            for (int k1 = 0; k1 <= k; ++k1) direct += std::exp(-k1 * s);
            EXPECT_NEAR(lattice_level_weight(k, 2, s), direct, 1e-13 * direct);
        }
    EXPECT_EQ(lattice_level_weight(4, 2, 0.0), 5.0);
}

TEST(Coefficients, ACoeffValues) {
    EXPECT_EQ(a_coeff(0, 3, 0.7), 1.0);
    EXPECT_NEAR(a_coeff(1, 3, 0.7), std::exp(-0.7) + 2.0, 1e-15);
    EXPECT_NEAR(a_coeff(2, 3, 0.7), 2.0 * std::exp(-0.7) + 1.0, 1e-15);
    EXPECT_THROW(a_coeff(3, 3, 0.0), DomainError);
}

TEST(Coefficients, BCoeffGuards) {
    EXPECT_THROW(b_coeff(0, 3, 2, 0.5), DomainError);
    EXPECT_THROW(b_coeff(1, 1, 2, 0.5), DomainError);
}
