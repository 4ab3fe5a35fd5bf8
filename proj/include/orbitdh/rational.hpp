#pragma once

// Exact arithmetic primitives shared by every module: GMP-backed integers and
// rationals, dense rational matrices, and the handful of elimination routines
// (rank, solve, determinant, inverse) the rest of the library is built on.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "orbitdh/errors.hpp"

namespace orbitdh {

using BigInt = mpz_class;
using Rational = mpq_class;

using RationalVector = std::vector<Rational>;
using RationalMatrix = std::vector<RationalVector>;  // row-major
using IntMatrix = std::vector<std::vector<std::int64_t>>;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  Rational q(BigInt(static_cast<long>(num)), BigInt(static_cast<long>(den)));
  q.canonicalize();
  return q;
}

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

inline bool all_integers(const RationalVector& v) {
  for (const auto& q : v)
    if (!is_integer(q)) return false;
  return true;
}

inline bool is_zero(const RationalVector& v) {
  for (const auto& q : v)
    if (sgn(q) != 0) return false;
  return true;
}

// Parses "p/q", "p" or "-p/q". Throws ValidationError on malformed input.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto trim = [](std::string& t) {
    while (!t.empty() && (t.front() == ' ' || t.front() == '\t')) t.erase(0, 1);
    while (!t.empty() && (t.back() == ' ' || t.back() == '\t')) t.pop_back();
  };
  trim(s);
  auto valid_int = [](const std::string& t) {
    if (t.empty()) return false;
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  auto strip_plus = [](std::string t) {
    if (!t.empty() && t[0] == '+') t.erase(0, 1);
    return t;
  };
  const auto slash = s.find('/');
  std::string num = slash == std::string::npos ? s : s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  trim(num);
  trim(den);
  if (!valid_int(num) || !valid_int(den) || den.find_first_of("+-") == 0)
    throw ValidationError("malformed rational '" + std::string(text) +
                          "' (expected p or p/q)");
  BigInt n(strip_plus(num)), d(den);
  if (d == 0)
    throw ValidationError("malformed rational '" + std::string(text) +
                          "': zero denominator");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline RationalVector operator+(RationalVector a, const RationalVector& b) {
  ensure(a.size() == b.size(), "vector dimension mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

inline RationalVector operator-(RationalVector a, const RationalVector& b) {
  ensure(a.size() == b.size(), "vector dimension mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

inline RationalVector operator*(const Rational& k, RationalVector a) {
  for (auto& x : a) x *= k;
  return a;
}

inline RationalVector multiply(const RationalMatrix& m,
                               const RationalVector& v) {
  RationalVector out(m.size(), Rational(0));
  for (std::size_t i = 0; i < m.size(); ++i) {
    ensure(m[i].size() == v.size(), "matrix/vector dimension mismatch");
    for (std::size_t j = 0; j < v.size(); ++j)
      if (sgn(m[i][j]) != 0) out[i] += m[i][j] * v[j];
  }
  return out;
}

inline RationalMatrix transpose(const RationalMatrix& m) {
  if (m.empty()) return {};
  RationalMatrix t(m[0].size(), RationalVector(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
  return t;
}

inline RationalMatrix to_rational(const IntMatrix& m) {
  RationalMatrix out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (auto x : m[i]) out[i].push_back(make_rational(x));
  return out;
}

// Reduced row echelon form in place; returns the pivot columns.
inline std::vector<std::size_t> row_reduce(RationalMatrix& a) {
  std::vector<std::size_t> pivots;
  if (a.empty()) return pivots;
  const std::size_t rows = a.size(), cols = a[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && sgn(a[p][c]) == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    const Rational inv = 1 / a[r][c];
    for (auto& x : a[r]) x *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || sgn(a[i][c]) == 0) continue;
      const Rational f = a[i][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline std::size_t rank(RationalMatrix a) { return row_reduce(a).size(); }

inline Rational determinant(RationalMatrix a) {
  const std::size_t n = a.size();
  Rational det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(a[p][c]) == 0) ++p;
    if (p == n) return Rational(0);
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (sgn(a[i][c]) == 0) continue;
      const Rational f = a[i][c] / a[c][c];
      for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  return det;
}

// Solves a·x = b for square nonsingular a; nullopt when a is singular.
inline std::optional<RationalVector> solve(const RationalMatrix& a,
                                           const RationalVector& b) {
  const std::size_t n = a.size();
  RationalMatrix aug(n);
  for (std::size_t i = 0; i < n; ++i) {
    aug[i] = a[i];
    aug[i].push_back(b[i]);
  }
  const auto pivots = row_reduce(aug);
  if (pivots.size() != n || (n > 0 && pivots.back() != n - 1))
    return std::nullopt;
  RationalVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = aug[i][n];
  return x;
}

inline std::optional<RationalMatrix> inverse(const RationalMatrix& a) {
  const std::size_t n = a.size();
  RationalMatrix aug(n);
  for (std::size_t i = 0; i < n; ++i) {
    aug[i] = a[i];
    for (std::size_t j = 0; j < n; ++j) aug[i].push_back(Rational(i == j ? 1 : 0));
  }
  const auto pivots = row_reduce(aug);
  if (pivots.size() < n || (n > 0 && pivots[n - 1] != n - 1))
    return std::nullopt;
  RationalMatrix inv(n, RationalVector(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
  return inv;
}

}  // namespace orbitdh
