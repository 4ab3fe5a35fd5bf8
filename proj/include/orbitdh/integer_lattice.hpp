#pragma once

// Integer column-style Hermite reduction: A * U = [H | 0] with U unimodular.
// The trailing columns of U give a basis of the saturated kernel lattice
// ker(A) ∩ Z^n.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "orbitdh/errors.hpp"
#include "orbitdh/rational.hpp"

namespace orbitdh {

using IntegerVector = std::vector<BigInt>;
using IntegerMatrix = std::vector<IntegerVector>;  // row-major

struct ColumnHermiteResult {
  IntegerMatrix reduced;       // A * U, lower echelon with zero trailing columns
  IntegerMatrix unimodular;    // U (n x n)
  std::size_t rank = 0;
};

inline ColumnHermiteResult column_hermite(IntegerMatrix a) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  IntegerMatrix u(cols, IntegerVector(cols, BigInt(0)));
  for (std::size_t i = 0; i < cols; ++i) u[i][i] = 1;

  // new_p = s*col_p + t*col_j ; new_j = -(b/g)*col_p + (a/g)*col_j
  auto combine = [](IntegerMatrix& m, std::size_t p, std::size_t j, const BigInt& s, const BigInt& t,
                    const BigInt& x, const BigInt& y) {
    for (auto& row : m) {
      const BigInt cp = row[p], cj = row[j];
      row[p] = s * cp + t * cj;
      row[j] = x * cp + y * cj;
    }
  };

  std::size_t pivot = 0;
  for (std::size_t i = 0; i < rows && pivot < cols; ++i) {
    for (std::size_t j = pivot + 1; j < cols; ++j) {
      if (a[i][j] == 0) continue;
      BigInt g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a[i][pivot].get_mpz_t(), a[i][j].get_mpz_t());
      const BigInt x = -a[i][j] / g, y = a[i][pivot] / g;
      combine(a, pivot, j, s, t, x, y);
      combine(u, pivot, j, s, t, x, y);
    }
    if (a[i][pivot] != 0) {
      if (a[i][pivot] < 0) {
        for (auto& row : a) row[pivot] = -row[pivot];
        for (auto& row : u) row[pivot] = -row[pivot];
      }
      ++pivot;
    }
  }
  return {std::move(a), std::move(u), pivot};
}

// Basis (as a list of vectors) of ker(A) ∩ Z^n for an integer matrix A.
inline std::vector<IntegerVector> integer_kernel(const IntegerMatrix& a) {
  auto h = column_hermite(a);
  const std::size_t cols = h.unimodular.size();
  std::vector<IntegerVector> basis;
  for (std::size_t j = h.rank; j < cols; ++j) {
    IntegerVector v(cols);
    for (std::size_t i = 0; i < cols; ++i) v[i] = h.unimodular[i][j];
    basis.push_back(std::move(v));
  }
  for (const auto& v : basis)
    for (const auto& row : a) {
      BigInt acc = 0;
      for (std::size_t i = 0; i < cols; ++i) acc += row[i] * v[i];
      ensure(acc == 0, "integer kernel vector is not in the kernel");
    }
  return basis;
}

// Index of the lattice spanned by `basis` inside its rational saturation
// (the gcd of maximal minors). Equals 1 iff the basis spans all integer
// points of its real span. Returns 0 for a dependent family.
inline BigInt saturation_index(const std::vector<IntegerVector>& basis) {
  if (basis.empty()) return BigInt(1);
  auto h = column_hermite(basis);
  if (h.rank < basis.size()) return BigInt(0);
  BigInt det = 1;
  for (std::size_t i = 0; i < basis.size(); ++i) det *= h.reduced[i][i];
  return abs(det);
}

}  // namespace orbitdh
