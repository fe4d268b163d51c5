#pragma once

// Explicit dissections of the unit cube C^n and of dilates of the standard
// simplex T^n, and the coefficients that express L(mT^n) along the e_1 axis
// through the bodies M_j^n = jT^n ∩ C^n.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "lapval/errors.hpp"
#include "lapval/geom.hpp"
#include "lapval/laplace.hpp"

namespace lapval {

inline constexpr int kMaxOrderSimplexDim = 8;
inline constexpr double kMaxLatticePieces = 1e5;

inline double binomial(int a, int b) {
    if (b < 0 || a < 0 || b > a) return 0.0;
    b = std::min(b, a - b);
    double r = 1.0;
    for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return std::round(r);
}

// The n! simplices {0 <= x_{i_1} <= ... <= x_{i_n} <= 1}. Vertex order is
// chosen so that linear_part() has determinant +1.
inline std::vector<Simplex> cube_order_simplices(int n) {
    if (n < 1) throw DomainError("cube_order_simplices: n must be >= 1");
    if (n > kMaxOrderSimplexDim) throw SizeLimitError("cube_order_simplices: n! pieces, n limited to 8");
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<Simplex> out;
    do {
        // walk from o to (1,...,1) raising the largest coordinate x_{i_n} first
        std::vector<Vector> v{Vector::Zero(n)};
        for (int k = n - 1; k >= 0; --k) v.push_back(v.back() + basis_vector(n, perm[k]));
        Simplex s(v);
        if (s.signed_det() < 0) {
            std::swap(v[1], v[2]);
            s = Simplex(std::move(v));
        }
        out.push_back(std::move(s));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

struct SplitResult {
    double lambda;
    LinearMap phi1;
    LinearMap phi2;
    Polytope piece_minus;  // T^n ∩ H_lambda^-  (= phi1 T^n)
    Polytope piece_plus;   // T^n ∩ H_lambda^+  (= phi2 T^n)
};

// H_lambda: the hyperplane through o with normal (1-lambda) e_1 - lambda e_2.
inline Hyperplane split_hyperplane(int n, double lambda) {
    Vector normal = Vector::Zero(n);
    normal[0] = 1.0 - lambda;
    normal[1] = -lambda;
    return Hyperplane(normal, 0.0);
}

inline SplitResult split_simplex(int n, double lambda) {
    if (n < 2) throw DomainError("split_simplex: n must be >= 2");
    if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("split_simplex: lambda must lie in (0,1)");
    Matrix m1 = Matrix::Identity(n, n);
    m1(0, 0) = lambda;
    m1(1, 0) = 1.0 - lambda;
    Matrix m2 = Matrix::Identity(n, n);
    m2(0, 1) = lambda;
    m2(1, 1) = 1.0 - lambda;
    auto parts = clip(Polytope::standard_simplex(n), split_hyperplane(n, lambda));
    return SplitResult{lambda, LinearMap(m1), LinearMap(m2), std::move(parts.minus), std::move(parts.plus)};
}

// M_k^n = kT^n ∩ C^n
inline Polytope m_piece(int k, int n) {
    if (k < 1) throw DomainError("m_piece: k must be >= 1");
    if (n < 1) throw DomainError("m_piece: n must be >= 1");
    if (k >= n) return Polytope::cube(n);
    return clip(Polytope::cube(n), Hyperplane(Vector::Ones(n), static_cast<double>(k))).minus;
}

inline Polytope dilated_simplex(int m, int n) {
    return transform_body(Polytope::standard_simplex(n), LinearMap::scaling(n, m), Vector::Zero(n));
}

struct LatticePiece {
    Polytope body;  // M_j^n + shift
    Vector shift;
    int j;
};

// mT^n cut along the integer lattice: for every k_1 + ... + k_n = k <= m-1
// the cell C^n + (k_1, ..., k_n) meets mT^n in M_{m-k}^n + (k_1, ..., k_n).
inline std::vector<LatticePiece> lattice_decomposition(int m, int n) {
    if (m < 1 || n < 1) throw DomainError("lattice_decomposition: m and n must be >= 1");
    if (binomial(m + n - 1, n) > kMaxLatticePieces) throw SizeLimitError("lattice_decomposition: more than 1e5 pieces");
    std::vector<Polytope> pieces;
    for (int j = 1; j <= m; ++j) pieces.push_back(m_piece(j, n));

    std::vector<LatticePiece> out;
    std::vector<int> k(n, 0);
    auto emit = [&](auto&& self, int axis, int used) -> void {
        if (axis == n) {
            Vector shift(n);
            for (int i = 0; i < n; ++i) shift[i] = k[i];
            const int j = m - used;
            out.push_back(LatticePiece{translate(pieces[j - 1], shift), shift, j});
            return;
        }
        for (int v = 0; used + v <= m - 1; ++v) {
            k[axis] = v;
            self(self, axis + 1, used + v);
        }
        k[axis] = 0;
    };
    emit(emit, 0, 0);
    return out;
}

// sum_{k_1=0}^{k} e^{-k_1 s} C(k - k_1 + n - 2, n - 2): the total weight
// e^{-<shift, s e_1>} of the lattice cells at level k.
inline double lattice_level_weight(int k, int n, double s) {
    if (n < 2) throw DomainError("lattice_level_weight: n must be >= 2");
    if (n == 2) {
        if (s == 0.0) return k + 1.0;
        return std::expm1(-(k + 1.0) * s) / std::expm1(-s);
    }
    double total = 0.0;
    for (int k1 = 0; k1 <= k; ++k1) total += std::exp(-k1 * s) * binomial(k - k1 + n - 2, n - 2);
    return total;
}

// a_0(s) = 1, a_i(s) = C(n-1, i-1) e^{-s} + C(n-1, i)
inline double a_coeff(int i, int n, double s) {
    if (n < 1 || i < 0 || i > n - 1) throw DomainError("a_coeff: index outside 0..n-1");
    if (i == 0) return 1.0;
    return binomial(n - 1, i - 1) * std::exp(-s) + binomial(n - 1, i);
}

// b_j(m,s) = sum_{k=m-n+1}^{m-j} (-1)^{m-k-j} a_{m-k-j}(s) W_k(s), with W_k the lattice level weight.
inline double b_coeff(int j, int m, int n, double s) {
    if (n < 2 || j < 1 || j > n - 1) throw DomainError("b_coeff: index outside 1..n-1");
    if (m < n) throw DomainError("b_coeff: requires m >= n");
    double total = 0.0;
    for (int k = m - n + 1; k <= m - j; ++k) {
        const int i = m - k - j;
        const double sign = i % 2 == 0 ? 1.0 : -1.0;
        total += sign * a_coeff(i, n, s) * lattice_level_weight(k, n, s);
    }
    return total;
}

struct IdentitySides {
    double lhs;
    double rhs;
};

// L(mT^n)(s e_1) against m^n L(T^n)(m s e_1).
inline IdentitySides scaling_check(int m, int n, double s) {
    if (m < 1) throw DomainError("scaling_check: m must be >= 1");
    const Vector x = s * basis_vector(n, 0);
    const double lhs = laplace_polytope(dilated_simplex(m, n), x);
    const double rhs = std::pow(static_cast<double>(m), n) * laplace_polytope(Polytope::standard_simplex(n), m * x);
    return {lhs, rhs};
}

// L(mT^n)(s e_1) = sum_{k=0}^{m-1} L(M_{m-k}^n)(s e_1) W_k(s).
inline IdentitySides lattice_identity(int m, int n, double s) {
    const Vector x = s * basis_vector(n, 0);
    double rhs = 0.0;
    for (int k = 0; k <= m - 1; ++k) rhs += laplace_polytope(m_piece(m - k, n), x) * lattice_level_weight(k, n, s);
    return {laplace_polytope(dilated_simplex(m, n), x), rhs};
}

// The b_j recursion for L itself, keeping the cube cells (m - k >= n) that a
// valuation vanishing on cubes would drop:
//   g(m,s) = L C^n(s e_1) sum_{k=0}^{m-n} W_k(s) + sum_{j=1}^{n-1} b_j(m,s) g(j,s),
// with g(j,s) = L(jT^n)(s e_1).
inline IdentitySides reduction_identity(int m, int n, double s) {
    if (n < 2 || m < n) throw DomainError("reduction_identity: requires n >= 2 and m >= n");
    const Vector x = s * basis_vector(n, 0);
    double cube_cells = 0.0;
    for (int k = 0; k <= m - n; ++k) cube_cells += lattice_level_weight(k, n, s);
    double rhs = laplace_polytope(Polytope::cube(n), x) * cube_cells;
    for (int j = 1; j <= n - 1; ++j) rhs += b_coeff(j, m, n, s) * laplace_polytope(dilated_simplex(j, n), x);
    return {laplace_polytope(dilated_simplex(m, n), x), rhs};
}

}  // namespace lapval
