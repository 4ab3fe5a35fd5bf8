#pragma once

// Asymptotic partition function P_A(b): the volume of the fiber polytope
//   { x in R^n : W_A x = b, x >= 0 },
// where the columns of W_A are the positive roots, measured in the
// translate of the Lebesgue measure on ker(W_A) that gives a fundamental
// cell of ker(W_A) ∩ Z^n volume one.
//
// Vertices are the feasible basic solutions (column subsets of size r).
// The volume comes from a pulling triangulation: every facet of the polytope
// lies in a coordinate hyperplane x_i = 0, so faces are identified by the
// vertex sets they contain, and each face not containing the apex is coned
// over recursively. Simplex volumes are exact rational determinants in
// kernel-lattice coordinates.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "orbitdh/errors.hpp"
#include "orbitdh/integer_lattice.hpp"
#include "orbitdh/rational.hpp"
#include "orbitdh/rootsys.hpp"

namespace orbitdh {

struct FiberPolytope {
  IntMatrix matrix;                           // W_A, r x n
  RootVector rhs;                             // b
  std::vector<IntegerVector> kernel_basis;    // n - r vectors
  std::optional<RationalVector> particular_solution;
  std::vector<RationalVector> vertices;       // sorted
};

class FiberGeometry {
 public:
  explicit FiberGeometry(const RootSystem& rs) : rank_(rs.rank()), n_(rs.num_positive_roots()) {
    matrix_.assign(rank_, std::vector<std::int64_t>(n_, 0));
    for (std::size_t j = 0; j < n_; ++j)
      for (std::size_t i = 0; i < rank_; ++i) matrix_[i][j] = rs.positive_roots()[j][i];

    IntegerMatrix a(rank_, IntegerVector(n_));
    for (std::size_t i = 0; i < rank_; ++i)
      for (std::size_t j = 0; j < n_; ++j) a[i][j] = BigInt(static_cast<long>(matrix_[i][j]));
    kernel_ = integer_kernel(a);
    ensure(kernel_.size() == n_ - rank_, "W_A does not have full row rank");
    ensure(saturation_index(kernel_) == 1, "kernel basis is not saturated");

    enumerate_bases();
  }

  std::size_t rank() const { return rank_; }
  std::size_t num_columns() const { return n_; }
  std::size_t dimension() const { return n_ - rank_; }
  const IntMatrix& matrix() const { return matrix_; }
  const std::vector<IntegerVector>& kernel_basis() const { return kernel_; }

  // All vertices of the fiber polytope, sorted lexicographically; empty iff infeasible.
  std::vector<RationalVector> vertices(const RootVector& b) const {
    require(b.size() == rank_, "expected a vector of length " + std::to_string(rank_));
    std::set<RationalVector> found;
    for (const auto& basis : bases_) {
      RationalVector x = multiply(basis.inverse, b.coords);
      if (std::any_of(x.begin(), x.end(), [](const Rational& q) { return sgn(q) < 0; })) continue;
      RationalVector full(n_, Rational(0));
      for (std::size_t k = 0; k < rank_; ++k) full[basis.columns[k]] = x[k];
      found.insert(std::move(full));
    }
    return {found.begin(), found.end()};
  }

  FiberPolytope polytope(const RootVector& b) const {
    FiberPolytope p{matrix_, b, kernel_, std::nullopt, vertices(b)};
    if (!p.vertices.empty()) {
      p.particular_solution = p.vertices.front();
    } else if (!bases_.empty()) {
      // any real solution of W_A x = b (possibly with negative entries)
      const auto& basis = bases_.front();
      RationalVector x = multiply(basis.inverse, b.coords);
      RationalVector full(n_, Rational(0));
      for (std::size_t k = 0; k < rank_; ++k) full[basis.columns[k]] = x[k];
      p.particular_solution = std::move(full);
    }
    return p;
  }

  // True when b lies on a wall of the chamber complex: the fiber polytope is
  // nonempty and has a degenerate vertex (support smaller than r), i.e. b is
  // in the cone spanned by fewer than r columns.
  bool on_wall(const RootVector& b) const {
    for (const auto& v : vertices(b)) {
      const auto support = std::count_if(v.begin(), v.end(), [](const Rational& q) { return sgn(q) != 0; });
      if (static_cast<std::size_t>(support) < rank_) return true;
    }
    return false;
  }

  Rational volume(const RootVector& b) const { return volume(b, kernel_); }

  // Volume measured against an arbitrary basis of the kernel lattice.
  Rational volume(const RootVector& b, const std::vector<IntegerVector>& basis) const {
    const auto verts = vertices(b);
    if (verts.empty()) return Rational(0);
    const std::size_t d = n_ - rank_;
    if (d == 0) return Rational(1);
    require(basis.size() == d, "kernel basis must have " + std::to_string(d) + " vectors");
    if (verts.size() < d + 1) return Rational(0);

    const auto coords = kernel_coordinates(verts, basis);
    if (affine_dimension(coords, all_indices(verts.size())) < d) return Rational(0);

    Triangulator tri{verts, coords, n_, {}};
    const auto simplices = tri.triangulate(all_indices(verts.size()), d);
    Rational total(0);
    RationalMatrix m(d, RationalVector(d));
    for (const auto& s : simplices) {
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) m[i][j] = coords[s[i + 1]][j] - coords[s[0]][j];
      total += abs(determinant(m));
    }
    BigInt fact = 1;
    for (std::size_t k = 2; k <= d; ++k) fact *= static_cast<unsigned long>(k);
    total /= fact;
    return total;
  }

 private:
  struct Basis {
    std::vector<std::size_t> columns;
    RationalMatrix inverse;
  };

  static std::vector<std::size_t> all_indices(std::size_t n) {
    std::vector<std::size_t> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = i;
    return v;
  }

  void enumerate_bases() {
    std::vector<std::size_t> cols(rank_);
    for (std::size_t i = 0; i < rank_; ++i) cols[i] = i;
    if (rank_ > n_) return;
    for (;;) {
      RationalMatrix sub(rank_, RationalVector(rank_));
      for (std::size_t i = 0; i < rank_; ++i)
        for (std::size_t k = 0; k < rank_; ++k) sub[i][k] = make_rational(matrix_[i][cols[k]]);
      if (auto inv = inverse(sub)) bases_.push_back({cols, std::move(*inv)});
      // next combination
      std::size_t i = rank_;
      while (i > 0 && cols[i - 1] == n_ - rank_ + i - 1) --i;
      if (i == 0) break;
      ++cols[i - 1];
      for (std::size_t k = i; k < rank_; ++k) cols[k] = cols[k - 1] + 1;
    }
  }

  // Coordinates t with v - v_0 = K t for every vertex v.
  std::vector<RationalVector> kernel_coordinates(const std::vector<RationalVector>& verts,
                                                 const std::vector<IntegerVector>& basis) const {
    const std::size_t d = basis.size();
    RationalMatrix k(n_, RationalVector(d));
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t i = 0; i < n_; ++i) k[i][j] = Rational(basis[j][i]);
    // pick d independent rows of K
    RationalMatrix kt = transpose(k);
    auto reduced = kt;
    const auto pivots = row_reduce(reduced);
    require(pivots.size() == d, "kernel basis vectors are linearly dependent");
    RationalMatrix square(d, RationalVector(d));
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t j = 0; j < d; ++j) square[r][j] = k[pivots[r]][j];
    const auto inv = inverse(square);
    ensure(inv.has_value(), "singular kernel submatrix");

    std::vector<RationalVector> out;
    out.reserve(verts.size());
    for (const auto& v : verts) {
      RationalVector diff(d);
      for (std::size_t r = 0; r < d; ++r) diff[r] = v[pivots[r]] - verts[0][pivots[r]];
      RationalVector t = multiply(*inv, diff);
      // the remaining coordinates must agree: v - v0 lies in ker(W_A)
      for (std::size_t i = 0; i < n_; ++i) {
        Rational acc(0);
        for (std::size_t j = 0; j < d; ++j) acc += k[i][j] * t[j];
        ensure(acc == v[i] - verts[0][i], "vertex difference is not spanned by the kernel basis");
      }
      out.push_back(std::move(t));
    }
    return out;
  }

  static std::size_t affine_dimension(const std::vector<RationalVector>& coords,
                                      const std::vector<std::size_t>& subset) {
    if (subset.size() <= 1) return 0;
    RationalMatrix m;
    for (std::size_t k = 1; k < subset.size(); ++k) m.push_back(coords[subset[k]] - coords[subset[0]]);
    return orbitdh::rank(std::move(m));
  }

  struct Triangulator {
    const std::vector<RationalVector>& verts;
    const std::vector<RationalVector>& coords;
    std::size_t n;
    std::map<std::vector<std::size_t>, std::vector<std::vector<std::size_t>>> memo;

    // Simplices (vertex index lists of length dim + 1) triangulating the face
    // spanned by `face`, which has affine dimension `dim`.
    std::vector<std::vector<std::size_t>> triangulate(const std::vector<std::size_t>& face, std::size_t dim) {
      if (dim == 0) return {{face.front()}};
      if (auto it = memo.find(face); it != memo.end()) return it->second;
      const std::size_t apex = face.front();
      std::set<std::vector<std::size_t>> facets;
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::size_t> sub;
        for (auto v : face)
          if (sgn(verts[v][i]) == 0) sub.push_back(v);
        if (sub.size() == face.size() || sub.size() < dim) continue;
        if (std::find(sub.begin(), sub.end(), apex) != sub.end()) continue;
        if (affine_dimension(coords, sub) != dim - 1) continue;
        facets.insert(std::move(sub));
      }
      std::vector<std::vector<std::size_t>> out;
      for (const auto& facet : facets) {
        for (auto s : triangulate(facet, dim - 1)) {
          s.insert(s.begin(), apex);
          out.push_back(std::move(s));
        }
      }
      memo.emplace(face, out);
      return out;
    }
  };

  std::size_t rank_, n_;
  IntMatrix matrix_;
  std::vector<IntegerVector> kernel_;
  std::vector<Basis> bases_;
};

inline std::vector<IntegerVector> kernel_lattice_basis(const RootSystem& rs) {
  return FiberGeometry(rs).kernel_basis();
}

inline std::vector<RationalVector> fiber_vertices(const RootSystem& rs, const RootVector& b) {
  return FiberGeometry(rs).vertices(b);
}

inline Rational asymptotic_partition_volume(const RootSystem& rs, const RootVector& b) {
  return FiberGeometry(rs).volume(b);
}

}  // namespace orbitdh
