#pragma once

// Convex polytopes in R^n: hull, clipping, triangulation, volume and the
// Hausdorff metric. Every type here is immutable after construction.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lapval/errors.hpp"

namespace lapval {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Geometric predicates treat quantities below kDegeneracyTol * diameter as zero.
inline constexpr double kDegeneracyTol = 1e-12;

inline Vector basis_vector(int n, int i) {
    Vector e = Vector::Zero(n);
    e[i] = 1.0;
    return e;
}

inline bool lex_less(const Vector& a, const Vector& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return true;
        if (b[i] < a[i]) return false;
    }
    return false;
}

inline bool all_finite(const Vector& v) { return v.allFinite(); }

inline double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

// ---------------------------------------------------------------------------

class LinearMap {
public:
    explicit LinearMap(Matrix m) : m_(std::move(m)) {
        if (m_.rows() != m_.cols() || m_.rows() < 1)
            throw DimensionMismatch("linear map must be a square matrix");
        if (!m_.allFinite()) throw DomainError("linear map has non-finite entries");
        det_ = m_.rows() == 1 ? m_(0, 0) : m_.fullPivLu().determinant();
        double scale = 1.0;
        for (Eigen::Index j = 0; j < m_.cols(); ++j) scale *= m_.col(j).norm();
        if (det_ == 0.0 || std::abs(det_) <= kDegeneracyTol * scale)
            throw SingularMap("linear map is singular");
    }

    static LinearMap identity(int n) { return LinearMap(Matrix::Identity(n, n)); }
    static LinearMap scaling(int n, double s) { return LinearMap(s * Matrix::Identity(n, n)); }

    int dim() const { return static_cast<int>(m_.rows()); }
    const Matrix& matrix() const { return m_; }
    double det() const { return det_; }

    Vector apply(const Vector& y) const { return m_ * y; }
    Vector apply_transpose(const Vector& x) const { return m_.transpose() * x; }

    // (*this) o inner
    LinearMap compose(const LinearMap& inner) const { return LinearMap(m_ * inner.m_); }

    bool is_diagonal() const {
        for (Eigen::Index i = 0; i < m_.rows(); ++i)
            for (Eigen::Index j = 0; j < m_.cols(); ++j)
                if (i != j && m_(i, j) != 0.0) return false;
        return true;
    }

private:
    Matrix m_;
    double det_ = 0.0;
};

// {y : <normal, y> = offset}; H^- is the <= side, H^+ the >= side.
struct Hyperplane {
    Vector normal;
    double offset = 0.0;

    Hyperplane(Vector n, double b) : normal(std::move(n)), offset(b) {
        if (normal.size() < 1 || !(normal.norm() > 0.0) || !normal.allFinite() || !std::isfinite(offset))
            throw DomainError("hyperplane normal must be finite and nonzero");
    }

    double signed_distance(const Vector& y) const { return (normal.dot(y) - offset) / normal.norm(); }
};

struct Box {
    Vector lo;
    Vector hi;
};

// Supporting hyperplane of a full-dimensional polytope: unit outward normal,
// offset, and the indices of the polytope vertices lying on it.
struct Facet {
    Vector normal;
    double offset = 0.0;
    std::vector<int> vertices;
};

// ---------------------------------------------------------------------------

class Simplex {
public:
    explicit Simplex(std::vector<Vector> vertices, bool allow_degenerate = false)
        : v_(std::move(vertices)) {
        if (v_.empty()) throw DomainError("simplex needs vertices");
        const auto n = v_.front().size();
        if (static_cast<Eigen::Index>(v_.size()) != n + 1)
            throw DimensionMismatch("simplex in R^n needs n+1 vertices");
        for (const auto& v : v_)
            if (v.size() != n) throw DimensionMismatch("simplex vertices differ in dimension");
        Matrix edges(n, n);
        double scale = 1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            edges.col(i) = v_[i + 1] - v_[0];
            scale *= edges.col(i).norm();
        }
        det_ = n == 1 ? edges(0, 0) : edges.fullPivLu().determinant();
        degenerate_ = det_ == 0.0 || std::abs(det_) <= kDegeneracyTol * scale;
        if (degenerate_ && !allow_degenerate) throw DegenerateInput("simplex vertices are affinely dependent");
    }

    static Simplex standard(int n) {
        std::vector<Vector> v{Vector::Zero(n)};
        for (int i = 0; i < n; ++i) v.push_back(basis_vector(n, i));
        return Simplex(std::move(v));
    }

    int ambient_dim() const { return static_cast<int>(v_.front().size()); }
    const std::vector<Vector>& vertices() const { return v_; }
    bool degenerate() const { return degenerate_; }
    double signed_det() const { return det_; }
    double volume() const { return std::abs(det_) / factorial(ambient_dim()); }

    // The affine map y -> linear_part() y + vertices()[0] sends T^n onto this simplex.
    LinearMap linear_part() const {
        const int n = ambient_dim();
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m.col(i) = v_[i + 1] - v_[0];
        return LinearMap(m);
    }

private:
    std::vector<Vector> v_;
    double det_ = 0.0;
    bool degenerate_ = false;
};

// ---------------------------------------------------------------------------

namespace detail {

inline double diameter(const std::vector<Vector>& pts) {
    double d = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, (pts[i] - pts[j]).norm());
    return d;
}

inline Vector mean(const std::vector<Vector>& pts) {
    Vector c = Vector::Zero(pts.front().size());
    for (const auto& p : pts) c += p;
    return c / static_cast<double>(pts.size());
}

// Orthonormal frame of the affine hull, found by pivoted Gram-Schmidt.
struct AffineFrame {
    Vector origin;
    Matrix basis;  // n x d, orthonormal columns

    int dim() const { return static_cast<int>(basis.cols()); }
    Vector project(const Vector& p) const { return basis.transpose() * (p - origin); }
};

inline AffineFrame affine_frame(const std::vector<Vector>& pts, double tol) {
    const auto n = pts.front().size();
    AffineFrame f{pts.front(), Matrix(n, 0)};
    const double diam = diameter(pts);
    if (diam == 0.0) return f;
    std::vector<Vector> r;
    r.reserve(pts.size());
    for (const auto& p : pts) r.push_back(p - f.origin);
    std::vector<Vector> cols;
    while (static_cast<Eigen::Index>(cols.size()) < n) {
        std::size_t best = 0;
        double best_norm = -1.0;
        for (std::size_t i = 0; i < r.size(); ++i) {
            const double nr = r[i].norm();
            if (nr > best_norm) {
                best_norm = nr;
                best = i;
            }
        }
        if (best_norm <= tol * diam) break;
        Vector q = r[best] / best_norm;
        for (const auto& c : cols) q -= c * c.dot(q);
        q.normalize();
        for (auto& ri : r) ri -= q * q.dot(ri);
        cols.push_back(q);
    }
    f.basis.resize(n, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) f.basis.col(static_cast<Eigen::Index>(j)) = cols[j];
    return f;
}

inline bool next_combination(std::vector<int>& idx, int m) {
    const int k = static_cast<int>(idx.size());
    int i = k - 1;
    while (i >= 0 && idx[i] == m - k + i) --i;
    if (i < 0) return false;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    return true;
}

inline int normal_rank(const std::vector<const Vector*>& normals, int d) {
    if (normals.empty()) return 0;
    Matrix m(static_cast<Eigen::Index>(normals.size()), d);
    for (std::size_t i = 0; i < normals.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = normals[i]->transpose();
    Eigen::FullPivLU<Matrix> lu(m);
    lu.setThreshold(1e-9);
    return static_cast<int>(lu.rank());
}

// Facets of the hull of a point set that is full-dimensional in R^d. Every
// d-subset spanning a supporting hyperplane is tried; hyperplanes are keyed by
// their incidence set, and incidence sets strictly contained in another
// (supporting planes of lower faces) are discarded. Normals are refitted to all
// incident points.
inline std::vector<Facet> hull_facets(const std::vector<Vector>& pts, double tol) {
    const int d = static_cast<int>(pts.front().size());
    const int m = static_cast<int>(pts.size());
    const double diam = diameter(pts);
    const double eps = tol * diam;
    const Vector centroid = mean(pts);

    std::map<std::vector<int>, std::pair<Vector, double>> found;
    std::vector<int> idx(d);
    std::iota(idx.begin(), idx.end(), 0);
    Matrix a(d - 1, d);
    Vector nrm(d);
    std::vector<int> incident;
    do {
        if (d == 1) {
            nrm[0] = 1.0;
        } else {
            for (int r = 0; r + 1 < d; ++r) a.row(r) = (pts[idx[r + 1]] - pts[idx[0]]).transpose();
            for (int k = 0; k < d; ++k) {
                Matrix minor(d - 1, d - 1);
                for (int c = 0, cc = 0; c < d; ++c)
                    if (c != k) minor.col(cc++) = a.col(c);
                const double det = d - 1 == 1 ? minor(0, 0) : minor.determinant();
                nrm[k] = (k % 2 == 0) ? det : -det;
            }
        }
        const double len = nrm.norm();
        if (!(len > 1e-14 * std::pow(diam, d - 1))) continue;
        Vector u = nrm / len;
        double off = u.dot(pts[idx[0]]);
        if (u.dot(centroid) > off) {
            u = -u;
            off = -off;
        }
        bool supporting = true;
        incident.clear();
        for (int i = 0; i < m; ++i) {
            const double s = u.dot(pts[i]) - off;
            if (s > eps) {
                supporting = false;
                break;
            }
            if (s >= -eps) incident.push_back(i);
        }
        if (!supporting) continue;
        found.emplace(incident, std::make_pair(u, off));
    } while (next_combination(idx, m));

    std::vector<Facet> facets;
    for (auto it = found.begin(); it != found.end(); ++it) {
        bool dominated = false;
        for (auto jt = found.begin(); jt != found.end() && !dominated; ++jt) {
            if (jt == it || jt->first.size() <= it->first.size()) continue;
            dominated = std::includes(jt->first.begin(), jt->first.end(), it->first.begin(), it->first.end());
        }
        if (dominated) continue;

        const auto& inc = it->first;
        Vector u = it->second.first;
        if (d > 1 && static_cast<int>(inc.size()) > 1) {
            std::vector<Vector> fp;
            for (int i : inc) fp.push_back(pts[i]);
            const Vector c = mean(fp);
            Matrix centered(static_cast<Eigen::Index>(fp.size()), d);
            for (std::size_t i = 0; i < fp.size(); ++i) centered.row(static_cast<Eigen::Index>(i)) = (fp[i] - c).transpose();
            Eigen::JacobiSVD<Matrix> svd(centered, Eigen::ComputeFullV);
            Vector refit = svd.matrixV().col(d - 1);
            if (refit.dot(u) < 0) refit = -refit;
            u = refit;
        }
        double off = 0.0;
        for (int i : inc) off += u.dot(pts[i]);
        off /= static_cast<double>(inc.size());
        facets.push_back(Facet{u, off, inc});
    }
    return facets;
}

// Indices of points that are vertices: those whose incident facet normals span R^d.
inline std::vector<int> extreme_indices(const std::vector<Vector>& pts, const std::vector<Facet>& facets) {
    const int d = static_cast<int>(pts.front().size());
    std::vector<std::vector<const Vector*>> on(pts.size());
    for (const auto& f : facets)
        for (int i : f.vertices) on[i].push_back(&f.normal);
    std::vector<int> out;
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (normal_rank(on[i], d) == d) out.push_back(static_cast<int>(i));
    return out;
}

// Restrict facet incidence lists to the kept points and renumber them.
inline std::vector<Facet> reindex_facets(std::vector<Facet> facets, const std::vector<int>& keep, std::size_t total) {
    std::vector<int> map(total, -1);
    for (std::size_t k = 0; k < keep.size(); ++k) map[keep[k]] = static_cast<int>(k);
    for (auto& f : facets) {
        std::vector<int> v;
        for (int i : f.vertices)
            if (map[i] >= 0) v.push_back(map[i]);
        f.vertices = std::move(v);
    }
    return facets;
}

// Pulling triangulation of a full-dimensional point set in R^d whose points
// are all extreme: simplices are cones from the apex over a recursive
// triangulation of each facet not containing it. The apex in every facet is
// the point with the smallest rank.
inline void fan_triangulate(const std::vector<Vector>& pts, const std::vector<int>& rank,
                            const std::vector<Facet>& facets, int apex, double tol,
                            std::vector<std::vector<int>>& out) {
    const int d = static_cast<int>(pts.front().size());
    if (static_cast<int>(pts.size()) == d + 1) {
        std::vector<int> all(pts.size());
        std::iota(all.begin(), all.end(), 0);
        out.push_back(std::move(all));
        return;
    }
    for (const auto& f : facets) {
        if (std::find(f.vertices.begin(), f.vertices.end(), apex) != f.vertices.end()) continue;
        if (static_cast<int>(f.vertices.size()) == d) {
            std::vector<int> s = f.vertices;
            s.push_back(apex);
            out.push_back(std::move(s));
            continue;
        }
        std::vector<Vector> sub;
        for (int i : f.vertices) sub.push_back(pts[i]);
        const AffineFrame frame = affine_frame(sub, tol);
        std::vector<Vector> proj;
        for (const auto& p : sub) proj.push_back(frame.project(p));
        std::vector<int> sub_rank;
        int sub_apex = 0;
        for (std::size_t k = 0; k < f.vertices.size(); ++k) {
            sub_rank.push_back(rank[f.vertices[k]]);
            if (sub_rank[k] < sub_rank[sub_apex]) sub_apex = static_cast<int>(k);
        }
        std::vector<std::vector<int>> sub_out;
        if (frame.dim() == d - 1) {
            const auto sub_facets = hull_facets(proj, tol);
            fan_triangulate(proj, sub_rank, sub_facets, sub_apex, tol, sub_out);
        }
        for (auto& s : sub_out) {
            for (auto& i : s) i = f.vertices[i];
            s.push_back(apex);
            out.push_back(std::move(s));
        }
    }
}

// d-volume of the hull of a full-dimensional point set in R^d, summing
// facet pyramids around the centroid.
inline double volume_recursive(const std::vector<Vector>& pts, const std::vector<Facet>& facets, double tol) {
    const int d = static_cast<int>(pts.front().size());
    if (d == 1) {
        double lo = pts.front()[0], hi = lo;
        for (const auto& p : pts) {
            lo = std::min(lo, p[0]);
            hi = std::max(hi, p[0]);
        }
        return hi - lo;
    }
    if (static_cast<int>(pts.size()) == d + 1) {
        Matrix e(d, d);
        for (int i = 0; i < d; ++i) e.col(i) = pts[i + 1] - pts[0];
        return std::abs(e.determinant()) / factorial(d);
    }
    const Vector c = mean(pts);
    double vol = 0.0;
    for (const auto& f : facets) {
        const double h = f.offset - f.normal.dot(c);
        std::vector<Vector> sub;
        for (int i : f.vertices) sub.push_back(pts[i]);
        const AffineFrame frame = affine_frame(sub, tol);
        if (frame.dim() != d - 1) continue;
        std::vector<Vector> proj;
        for (const auto& p : sub) proj.push_back(frame.project(p));
        const auto sub_facets = d - 1 >= 1 ? hull_facets(proj, tol) : std::vector<Facet>{};
        vol += h * volume_recursive(proj, sub_facets, tol) / d;
    }
    return vol;
}

// Minimum-norm point of conv(pts) by Wolfe's algorithm.
inline Vector min_norm_point(const std::vector<Vector>& pts) {
    const auto n = pts.front().size();
    double scale = 0.0;
    for (const auto& p : pts) scale = std::max(scale, p.squaredNorm());
    if (scale == 0.0) return Vector::Zero(n);

    std::size_t start = 0;
    for (std::size_t i = 1; i < pts.size(); ++i)
        if (pts[i].squaredNorm() < pts[start].squaredNorm()) start = i;
    std::vector<std::size_t> corral{start};
    std::vector<double> w{1.0};
    Vector x = pts[start];

    for (int major = 0; major < 1000; ++major) {
        std::size_t j = 0;
        double best = x.dot(pts[0]);
        for (std::size_t i = 1; i < pts.size(); ++i) {
            const double v = x.dot(pts[i]);
            if (v < best) {
                best = v;
                j = i;
            }
        }
        if (x.squaredNorm() - best <= 1e-14 * scale) break;
        if (std::find(corral.begin(), corral.end(), j) != corral.end()) break;
        corral.push_back(j);
        w.push_back(0.0);

        for (int minor = 0; minor < 1000; ++minor) {
            const auto k = static_cast<Eigen::Index>(corral.size());
            Matrix sys = Matrix::Zero(k + 1, k + 1);
            Vector rhs = Vector::Zero(k + 1);
            for (Eigen::Index a = 0; a < k; ++a) {
                for (Eigen::Index b = 0; b < k; ++b) sys(a, b) = pts[corral[a]].dot(pts[corral[b]]);
                sys(a, k) = 1.0;
                sys(k, a) = 1.0;
            }
            rhs[k] = 1.0;
            const Vector sol = sys.completeOrthogonalDecomposition().solve(rhs);
            bool interior = true;
            for (Eigen::Index a = 0; a < k; ++a)
                if (sol[a] <= 1e-14) interior = false;
            if (interior) {
                for (Eigen::Index a = 0; a < k; ++a) w[a] = sol[a];
                break;
            }
            double theta = 1.0;
            for (Eigen::Index a = 0; a < k; ++a)
                if (sol[a] <= 1e-14 && w[a] - sol[a] > 0.0) theta = std::min(theta, w[a] / (w[a] - sol[a]));
            for (Eigen::Index a = 0; a < k; ++a) w[a] = theta * sol[a] + (1.0 - theta) * w[a];
            std::vector<std::size_t> c2;
            std::vector<double> w2;
            for (Eigen::Index a = 0; a < k; ++a) {
                if (w[a] > 1e-14) {
                    c2.push_back(corral[a]);
                    w2.push_back(w[a]);
                }
            }
            corral = std::move(c2);
            w = std::move(w2);
        }
        const double total = std::accumulate(w.begin(), w.end(), 0.0);
        x = Vector::Zero(n);
        for (std::size_t a = 0; a < corral.size(); ++a) x += (w[a] / total) * pts[corral[a]];
    }
    return x;
}

}  // namespace detail

// ---------------------------------------------------------------------------

class Polytope {
public:
    static Polytope empty(int n) {
        Polytope p;
        p.n_ = n;
        p.dim_ = -1;
        return p;
    }

    // Convex hull of a finite point set. Near-duplicate points (closer than
    // tol * diameter) are merged; vertices are stored in lexicographic order.
    static Polytope from_points(std::vector<Vector> points, double tol = kDegeneracyTol) {
        if (points.empty()) throw DomainError("convex hull of an empty point set");
        const auto n = points.front().size();
        if (n < 1) throw DimensionMismatch("points must have dimension >= 1");
        for (const auto& p : points) {
            if (p.size() != n) throw DimensionMismatch("points differ in dimension");
            if (!p.allFinite()) throw DomainError("non-finite coordinate");
        }
        std::sort(points.begin(), points.end(), lex_less);
        const double diam = detail::diameter(points);
        std::vector<Vector> pts;
        for (auto& p : points) {
            bool dup = false;
            for (const auto& q : pts)
                if ((p - q).norm() <= tol * diam) {
                    dup = true;
                    break;
                }
            if (!dup) pts.push_back(std::move(p));
        }

        Polytope out;
        out.n_ = static_cast<int>(n);
        const detail::AffineFrame frame = detail::affine_frame(pts, tol);
        out.dim_ = frame.dim();
        if (out.dim_ == 0) {
            out.v_ = {pts.front()};
        } else if (out.dim_ == out.n_) {
            auto facets = detail::hull_facets(pts, tol);
            const auto keep = detail::extreme_indices(pts, facets);
            for (int i : keep) out.v_.push_back(pts[i]);
            out.facets_ = detail::reindex_facets(std::move(facets), keep, pts.size());
        } else {
            std::vector<Vector> proj;
            for (const auto& p : pts) proj.push_back(frame.project(p));
            const auto facets = detail::hull_facets(proj, tol);
            for (int i : detail::extreme_indices(proj, facets)) out.v_.push_back(pts[i]);
        }
        out.diam_ = detail::diameter(out.v_);
        return out;
    }

    static Polytope box(const Vector& lo, const Vector& hi) {
        const auto n = lo.size();
        if (n < 1 || hi.size() != n) throw DimensionMismatch("box bounds differ in dimension");
        if (!lo.allFinite() || !hi.allFinite()) throw DomainError("non-finite box bound");
        for (Eigen::Index i = 0; i < n; ++i)
            if (!(lo[i] < hi[i])) throw DomainError("empty box: lo must be < hi on every axis");
        if (n > 20) throw SizeLimitError("box dimension too large for vertex enumeration");
        Polytope out;
        out.n_ = static_cast<int>(n);
        out.dim_ = out.n_;
        const std::size_t count = std::size_t{1} << n;
        for (std::size_t mask = 0; mask < count; ++mask) {
            Vector v(n);
            for (Eigen::Index i = 0; i < n; ++i) v[i] = (mask >> (n - 1 - i)) & 1u ? hi[i] : lo[i];
            out.v_.push_back(v);
        }
        for (Eigen::Index i = 0; i < n; ++i) {
            Facet low{-basis_vector(out.n_, static_cast<int>(i)), -lo[i], {}};
            Facet high{basis_vector(out.n_, static_cast<int>(i)), hi[i], {}};
            for (std::size_t k = 0; k < out.v_.size(); ++k)
                (out.v_[k][i] == lo[i] ? low : high).vertices.push_back(static_cast<int>(k));
            out.facets_.push_back(std::move(low));
            out.facets_.push_back(std::move(high));
        }
        out.box_ = Box{lo, hi};
        out.diam_ = (hi - lo).norm();
        return out;
    }

    static Polytope cube(int n) { return box(Vector::Zero(n), Vector::Ones(n)); }
    static Polytope standard_simplex(int n) { return from_points(Simplex::standard(n).vertices()); }
    static Polytope from_simplex(const Simplex& s) { return from_points(s.vertices()); }

    int ambient_dim() const { return n_; }
    int dim() const { return dim_; }
    bool is_empty() const { return dim_ < 0; }
    bool full_dimensional() const { return dim_ == n_; }
    double diameter() const { return diam_; }

    const std::vector<Vector>& vertices() const { return v_; }
    // Empty unless the polytope is full-dimensional.
    const std::vector<Facet>& facets() const { return facets_; }
    const std::optional<Box>& box_tag() const { return box_; }

    bool contains(const Vector& y, double tol = kDegeneracyTol) const {
        if (!full_dimensional()) return false;
        const double eps = tol * std::max(diam_, 1.0);
        for (const auto& f : facets_)
            if (f.normal.dot(y) - f.offset > eps) return false;
        return true;
    }

    // Cached pulling triangulation from the lexicographically smallest vertex.
    const std::vector<Simplex>& simplices() const;

private:
    struct TriangulationCache {
        std::once_flag once;
        std::vector<Simplex> simplices;
    };

    Polytope() = default;

    int n_ = 0;
    int dim_ = -1;
    double diam_ = 0.0;
    std::vector<Vector> v_;
    std::vector<Facet> facets_;
    std::optional<Box> box_;
    std::shared_ptr<TriangulationCache> cache_ = std::make_shared<TriangulationCache>();
};

// Finite union of polytopes; parts may overlap.
struct PolyUnion {
    std::vector<Polytope> parts;

    explicit PolyUnion(std::vector<Polytope> p) : parts(std::move(p)) {
        if (parts.empty()) throw DomainError("union needs at least one part");
        for (const auto& q : parts)
            if (q.ambient_dim() != parts.front().ambient_dim())
                throw DimensionMismatch("union parts differ in ambient dimension");
    }

    int ambient_dim() const { return parts.front().ambient_dim(); }
};

struct ClipResult {
    Polytope minus;    // P ∩ H^-
    Polytope plus;     // P ∩ H^+
    Polytope section;  // P ∩ H
};

// ---------------------------------------------------------------------------

inline Polytope convex_hull(std::vector<Vector> points, double tol = kDegeneracyTol) {
    return Polytope::from_points(std::move(points), tol);
}

// Triangulation of a full-dimensional polytope as a cone from `apex` (a vertex
// index, default the lexicographically smallest vertex) over recursively
// triangulated facets.
inline std::vector<Simplex> triangulate(const Polytope& p, int apex = 0) {
    if (!p.full_dimensional()) throw DegenerateInput("triangulate requires a full-dimensional polytope");
    const auto& v = p.vertices();
    if (apex < 0 || apex >= static_cast<int>(v.size())) throw DomainError("apex is not a vertex index");
    std::vector<int> rank(v.size());
    std::iota(rank.begin(), rank.end(), 0);
    rank[apex] = -1;
    std::vector<std::vector<int>> idx;
    detail::fan_triangulate(v, rank, p.facets(), apex, kDegeneracyTol, idx);
    std::vector<Simplex> out;
    out.reserve(idx.size());
    for (const auto& s : idx) {
        std::vector<Vector> sv;
        for (int i : s) sv.push_back(v[i]);
        out.emplace_back(std::move(sv), true);
    }
    return out;
}

inline const std::vector<Simplex>& Polytope::simplices() const {
    if (!full_dimensional()) throw DegenerateInput("triangulate requires a full-dimensional polytope");
    std::call_once(cache_->once, [this] { cache_->simplices = triangulate(*this); });
    return cache_->simplices;
}

inline double volume(const Polytope& p) {
    if (!p.full_dimensional()) return 0.0;
    if (p.box_tag()) return (p.box_tag()->hi - p.box_tag()->lo).prod();
    return detail::volume_recursive(p.vertices(), p.facets(), kDegeneracyTol);
}

// Sum of the (n-1)-volumes of the facets.
inline double surface_area(const Polytope& p) {
    if (!p.full_dimensional()) throw DegenerateInput("surface area requires a full-dimensional polytope");
    const int n = p.ambient_dim();
    if (n == 1) return 2.0;
    double total = 0.0;
    for (const auto& f : p.facets()) {
        std::vector<Vector> sub;
        for (int i : f.vertices) sub.push_back(p.vertices()[i]);
        const auto frame = detail::affine_frame(sub, kDegeneracyTol);
        if (frame.dim() != n - 1) continue;
        std::vector<Vector> proj;
        for (const auto& q : sub) proj.push_back(frame.project(q));
        total += detail::volume_recursive(proj, detail::hull_facets(proj, kDegeneracyTol), kDegeneracyTol);
    }
    return total;
}

// Euclidean distance from y to the polytope.
inline double distance(const Vector& y, const Polytope& p) {
    if (p.is_empty()) throw DomainError("distance to an empty body");
    if (p.contains(y, 0.0)) return 0.0;
    std::vector<Vector> shifted;
    for (const auto& v : p.vertices()) shifted.push_back(v - y);
    return detail::min_norm_point(shifted).norm();
}

inline double hausdorff(const Polytope& a, const Polytope& b) {
    if (a.ambient_dim() != b.ambient_dim()) throw DimensionMismatch("hausdorff: ambient dimensions differ");
    if (a.is_empty() || b.is_empty()) throw DomainError("hausdorff distance of an empty body");
    double d = 0.0;
    for (const auto& v : a.vertices()) d = std::max(d, distance(v, b));
    for (const auto& v : b.vertices()) d = std::max(d, distance(v, a));
    return d;
}

// phi P + t
inline Polytope transform_body(const Polytope& p, const LinearMap& phi, const Vector& t) {
    if (phi.dim() != p.ambient_dim() || t.size() != p.ambient_dim())
        throw DimensionMismatch("transform_body: dimension mismatch");
    if (p.is_empty()) return p;
    if (p.box_tag() && phi.is_diagonal()) {
        const Vector a = phi.matrix().diagonal().cwiseProduct(p.box_tag()->lo) + t;
        const Vector b = phi.matrix().diagonal().cwiseProduct(p.box_tag()->hi) + t;
        return Polytope::box(a.cwiseMin(b), a.cwiseMax(b));
    }
    std::vector<Vector> pts;
    for (const auto& v : p.vertices()) pts.push_back(phi.apply(v) + t);
    return Polytope::from_points(std::move(pts));
}

inline Polytope translate(const Polytope& p, const Vector& t) {
    return transform_body(p, LinearMap::identity(p.ambient_dim()), t);
}

namespace detail {

// Vertex pairs spanning an edge: their common facets have normals of rank n-1.
inline std::vector<std::pair<int, int>> edges(const Polytope& p) {
    const int n = p.ambient_dim();
    const int m = static_cast<int>(p.vertices().size());
    std::vector<std::pair<int, int>> out;
    if (n == 1) {
        if (m == 2) out.emplace_back(0, 1);
        return out;
    }
    std::vector<std::vector<int>> on(m);
    for (int f = 0; f < static_cast<int>(p.facets().size()); ++f)
        for (int i : p.facets()[f].vertices) on[i].push_back(f);
    std::vector<int> common;
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            common.clear();
            std::set_intersection(on[i].begin(), on[i].end(), on[j].begin(), on[j].end(), std::back_inserter(common));
            if (static_cast<int>(common.size()) < n - 1) continue;
            std::vector<const Vector*> normals;
            for (int f : common) normals.push_back(&p.facets()[f].normal);
            if (normal_rank(normals, n) == n - 1) out.emplace_back(i, j);
        }
    }
    return out;
}

inline int axis_of(const Vector& normal) {
    int axis = -1;
    for (Eigen::Index i = 0; i < normal.size(); ++i) {
        if (normal[i] == 0.0) continue;
        if (axis >= 0) return -1;
        axis = static_cast<int>(i);
    }
    return axis;
}

}  // namespace detail

// Splits P by H into P ∩ H^-, P ∩ H^+ and P ∩ H. Any part may come back
// empty or lower dimensional.
inline ClipResult clip(const Polytope& p, const Hyperplane& h, double tol = kDegeneracyTol) {
    const int n = p.ambient_dim();
    if (h.normal.size() != n) throw DimensionMismatch("clip: hyperplane dimension differs");
    if (!p.full_dimensional()) throw DegenerateInput("clip requires a full-dimensional polytope");

    if (const int axis = detail::axis_of(h.normal); axis >= 0 && p.box_tag()) {
        const double cut = h.offset / h.normal[axis];
        const Box& b = *p.box_tag();
        const bool flip = h.normal[axis] < 0;  // then H^- is the upper side
        Polytope lower = Polytope::empty(n), upper = Polytope::empty(n), section = Polytope::empty(n);
        if (cut <= b.lo[axis]) {
            upper = p;
        } else if (cut >= b.hi[axis]) {
            lower = p;
        } else {
            Vector hi1 = b.hi, lo2 = b.lo;
            hi1[axis] = cut;
            lo2[axis] = cut;
            lower = Polytope::box(b.lo, hi1);
            upper = Polytope::box(lo2, b.hi);
        }
        if (cut >= b.lo[axis] && cut <= b.hi[axis]) {
            std::vector<Vector> pts;
            for (const auto& v : lower.is_empty() ? upper.vertices() : lower.vertices()) {
                Vector q = v;
                q[axis] = cut;
                pts.push_back(q);
            }
            section = Polytope::from_points(std::move(pts));
        }
        if (flip) std::swap(lower, upper);
        return ClipResult{std::move(lower), std::move(upper), std::move(section)};
    }

    const auto& v = p.vertices();
    const double eps = tol * std::max(p.diameter(), 1e-300);
    std::vector<double> s(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) s[i] = h.signed_distance(v[i]);
    std::vector<Vector> minus, plus, sec;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (s[i] <= eps) minus.push_back(v[i]);
        if (s[i] >= -eps) plus.push_back(v[i]);
        if (std::abs(s[i]) <= eps) sec.push_back(v[i]);
    }
    for (const auto& [i, j] : detail::edges(p)) {
        if ((s[i] < -eps && s[j] > eps) || (s[i] > eps && s[j] < -eps)) {
            const double t = s[i] / (s[i] - s[j]);
            Vector q = v[i] + t * (v[j] - v[i]);
            minus.push_back(q);
            plus.push_back(q);
            sec.push_back(std::move(q));
        }
    }
    auto build = [n](std::vector<Vector> pts) {
        return pts.empty() ? Polytope::empty(n) : Polytope::from_points(std::move(pts));
    };
    return ClipResult{build(std::move(minus)), build(std::move(plus)), build(std::move(sec))};
}

// P ∩ Q, by clipping P against the facets of Q.
inline Polytope intersect(const Polytope& p, const Polytope& q) {
    const int n = p.ambient_dim();
    if (q.ambient_dim() != n) throw DimensionMismatch("intersect: ambient dimensions differ");
    if (p.is_empty() || q.is_empty()) return Polytope::empty(n);
    if (p.box_tag() && q.box_tag()) {
        const Vector lo = p.box_tag()->lo.cwiseMax(q.box_tag()->lo);
        const Vector hi = p.box_tag()->hi.cwiseMin(q.box_tag()->hi);
        if ((lo.array() > hi.array()).any()) return Polytope::empty(n);
        if ((lo.array() < hi.array()).all()) return Polytope::box(lo, hi);
        // touching boxes: the common face
        std::vector<Vector> pts;
        for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
            Vector c(n);
            for (int i = 0; i < n; ++i) c[i] = (mask >> i) & 1u ? hi[i] : lo[i];
            pts.push_back(std::move(c));
        }
        return Polytope::from_points(std::move(pts));
    }
    if (!p.full_dimensional() || !q.full_dimensional())
        throw DegenerateInput("intersect requires full-dimensional operands");
    Polytope cur = p;
    for (const auto& f : q.facets()) {
        cur = clip(cur, Hyperplane(f.normal, f.offset)).minus;
        if (!cur.full_dimensional()) return cur;
    }
    return cur;
}

// P \ Q as interior-disjoint convex pieces: the part of P outside facet k of Q
// but inside facets 0..k-1.
inline std::vector<Polytope> set_difference(const Polytope& p, const Polytope& q) {
    if (!p.full_dimensional()) return {};
    if (!q.full_dimensional()) return {p};
    std::vector<Polytope> out;
    Polytope rest = p;
    for (const auto& f : q.facets()) {
        auto parts = clip(rest, Hyperplane(f.normal, f.offset));
        if (parts.plus.full_dimensional()) out.push_back(std::move(parts.plus));
        rest = std::move(parts.minus);
        if (!rest.full_dimensional()) break;
    }
    return out;
}

}  // namespace lapval
