#pragma once

// Root-system data for compact semisimple types built from the classical
// families A_r, B_r, C_r, D_r and G_2.
//
// Coordinates:
//   * Weight      - fundamental-weight basis; coordinate i is <w, H_{alpha_i}>.
//   * RootVector  - simple-root basis.
// The Cartan matrix is stored with row i equal to alpha_i in weight
// coordinates, i.e. cartan[i][j] = <alpha_i, H_{alpha_j}>. All weights are
// the real ("primed") functionals; no factor of sqrt(-1) is ever carried.
// The choice of positive roots plays the role of the polarizing vector: any
// strictly dominant vector polarizes them.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "orbitdh/errors.hpp"
#include "orbitdh/rational.hpp"

namespace orbitdh {

struct SimpleFactor {
  char family = 'A';  // one of A, B, C, D, G
  int rank = 1;

  std::string label() const { return std::string(1, family) + std::to_string(rank); }
  friend bool operator==(const SimpleFactor&, const SimpleFactor&) = default;
};

class LieType {
 public:
  explicit LieType(std::vector<SimpleFactor> factors) : factors_(std::move(factors)) {
    require(!factors_.empty(), "a Lie type needs at least one simple factor");
    for (const auto& f : factors_) validate(f);
  }

  // Accepts labels such as "A2", "G2", "A1xA2", "B3 x A1".
  static LieType parse(std::string_view text) {
    std::vector<SimpleFactor> factors;
    std::string token;
    auto flush = [&] {
      if (token.empty()) throw ValidationError("empty factor in Lie type '" + std::string(text) + "'");
      const char fam = static_cast<char>(std::toupper(static_cast<unsigned char>(token[0])));
      const std::string digits = token.substr(1);
      if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit) || digits.size() > 3)
        throw ValidationError("unsupported factor label '" + token + "'");
      factors.push_back({fam, std::stoi(digits)});
      token.clear();
    };
    for (char c : text) {
      if (c == ' ' || c == '\t') continue;
      if (c == 'x' || c == 'X' || c == '*') {
        flush();
      } else {
        token.push_back(c);
      }
    }
    flush();
    return LieType(std::move(factors));
  }

  const std::vector<SimpleFactor>& factors() const { return factors_; }

  int rank() const {
    int r = 0;
    for (const auto& f : factors_) r += f.rank;
    return r;
  }

  bool has_su2_factor() const {
    return std::any_of(factors_.begin(), factors_.end(),
                       [](const SimpleFactor& f) { return f.family == 'A' && f.rank == 1; });
  }

  std::string label() const {
    std::string out;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (i) out += "x";
      out += factors_[i].label();
    }
    return out;
  }

 private:
  static void validate(const SimpleFactor& f) {
    const int r = f.rank;
    bool ok = false;
    switch (f.family) {
      case 'A': ok = r >= 1; break;
      case 'B': ok = r >= 2; break;
      case 'C': ok = r >= 3; break;
      case 'D': ok = r >= 4; break;
      case 'G': ok = r == 2; break;
      default: break;
    }
    require(ok, "unsupported factor label '" + f.label() +
                    "' (supported: A_r r>=1, B_r r>=2, C_r r>=3, D_r r>=4, G_2)");
  }

  std::vector<SimpleFactor> factors_;
};

// Strong coordinate types. Arithmetic is exact and dimension-checked.
template <typename Tag>
struct CoordVector {
  RationalVector coords;

  CoordVector() = default;
  explicit CoordVector(RationalVector c) : coords(std::move(c)) {
    for (auto& q : coords) q.canonicalize();
  }
  explicit CoordVector(std::initializer_list<std::int64_t> c) {
    for (auto x : c) coords.push_back(make_rational(x));
  }
  static CoordVector zero(std::size_t r) { return CoordVector(RationalVector(r, Rational(0))); }

  std::size_t size() const { return coords.size(); }
  const Rational& operator[](std::size_t i) const { return coords[i]; }
  Rational& operator[](std::size_t i) { return coords[i]; }

  bool is_integral() const { return all_integers(coords); }
  bool is_zero() const { return orbitdh::is_zero(coords); }

  friend CoordVector operator+(const CoordVector& a, const CoordVector& b) {
    require(a.size() == b.size(), "dimension mismatch");
    return CoordVector(a.coords + b.coords);
  }
  friend CoordVector operator-(const CoordVector& a, const CoordVector& b) {
    require(a.size() == b.size(), "dimension mismatch");
    return CoordVector(a.coords - b.coords);
  }
  friend CoordVector operator*(const Rational& k, const CoordVector& a) { return CoordVector(k * a.coords); }
  friend CoordVector operator-(const CoordVector& a) { return CoordVector(Rational(-1) * a.coords); }
  friend bool operator==(const CoordVector& a, const CoordVector& b) { return a.coords == b.coords; }
  friend bool operator<(const CoordVector& a, const CoordVector& b) { return a.coords < b.coords; }

  std::string str() const {
    std::string out = "(";
    for (std::size_t i = 0; i < coords.size(); ++i) {
      if (i) out += ",";
      out += coords[i].get_str();
    }
    return out + ")";
  }
};

struct WeightTag {};
struct RootTag {};
using Weight = CoordVector<WeightTag>;        // fundamental-weight coordinates
using RootVector = CoordVector<RootTag>;      // simple-root coordinates

inline bool is_strongly_dominant(const Weight& w) {
  return std::all_of(w.coords.begin(), w.coords.end(), [](const Rational& q) { return sgn(q) > 0; });
}

inline bool is_dominant(const Weight& w) {
  return std::all_of(w.coords.begin(), w.coords.end(), [](const Rational& q) { return sgn(q) >= 0; });
}

class RootSystem {
 public:
  explicit RootSystem(LieType type) : type_(std::move(type)) { build(); }

  const LieType& type() const { return type_; }
  std::size_t rank() const { return rank_; }
  std::size_t num_positive_roots() const { return roots_.size(); }
  // Exponent s = n - r: dimension of the fiber polytopes and degree of the density.
  std::size_t s() const { return roots_.size() - rank_; }
  bool has_su2_factor() const { return type_.has_su2_factor(); }

  // Simple-root coordinates of the positive roots, sorted by height then lexicographically.
  const std::vector<std::vector<std::int64_t>>& positive_roots() const { return roots_; }
  // Simple-coroot coordinates of H_alpha, aligned with positive_roots().
  const std::vector<std::vector<std::int64_t>>& positive_coroots() const { return coroots_; }
  const IntMatrix& cartan_matrix() const { return cartan_; }
  // Gram matrix of a W-invariant inner product in simple-root coordinates
  // (entry (i,j) is a_ij d_j with d_j = (alpha_j, alpha_j)/2, short roots d = 1).
  const RationalMatrix& symmetrized_form() const { return form_; }

  RootVector root(std::size_t i) const {
    RootVector v = RootVector::zero(rank_);
    for (std::size_t j = 0; j < rank_; ++j) v[j] = make_rational(roots_.at(i)[j]);
    return v;
  }

  Weight root_as_weight(std::size_t i) const { return to_weight_coords(root(i)); }

  std::size_t simple_root_index(std::size_t i) const { return simple_index_.at(i); }

  // Index of the positive root with the given simple-root coordinates, or -1.
  long find_positive_root(const std::vector<std::int64_t>& coords) const {
    auto it = root_index_.find(coords);
    return it == root_index_.end() ? -1 : static_cast<long>(it->second);
  }

  // Index of the positive coroot with the given coordinates, or -1.
  long find_positive_coroot(const std::vector<std::int64_t>& coords) const {
    auto it = coroot_index_.find(coords);
    return it == coroot_index_.end() ? -1 : static_cast<long>(it->second);
  }

  Rational pair(const Weight& w, std::size_t coroot_index) const {
    require(coroot_index < coroots_.size(), "coroot index " + std::to_string(coroot_index) +
                                                " out of range (n = " + std::to_string(coroots_.size()) + ")");
    check_dim(w.size());
    Rational out(0);
    const auto& h = coroots_[coroot_index];
    for (std::size_t j = 0; j < rank_; ++j)
      if (h[j] != 0) out += make_rational(h[j]) * w[j];
    return out;
  }

  RootVector to_root_coords(const Weight& w) const {
    check_dim(w.size());
    return RootVector(multiply(weight_to_root_, w.coords));
  }

  Weight to_weight_coords(const RootVector& v) const {
    check_dim(v.size());
    return Weight(multiply(root_to_weight_, v.coords));
  }

  Rational inner(const Weight& a, const Weight& b) const {
    const auto x = to_root_coords(a), y = to_root_coords(b);
    Rational out(0);
    for (std::size_t i = 0; i < rank_; ++i)
      for (std::size_t j = 0; j < rank_; ++j)
        if (sgn(form_[i][j]) != 0) out += x[i] * form_[i][j] * y[j];
    return out;
  }

  // Half the sum of the positive roots; equals the sum of fundamental weights.
  Weight delta() const {
    RootVector half_sum = RootVector::zero(rank_);
    for (std::size_t i = 0; i < roots_.size(); ++i) half_sum = half_sum + root(i);
    half_sum = Rational(1, 2) * half_sum;
    Weight d = to_weight_coords(half_sum);
    ensure(d == Weight(RationalVector(rank_, Rational(1))), "half-sum of positive roots is not (1,...,1)");
    return d;
  }

  void check_dim(std::size_t d) const {
    require(d == rank_, "expected a vector of length " + std::to_string(rank_) + " for type " + type_.label() +
                            ", got " + std::to_string(d));
  }

 private:
  static IntMatrix factor_gram(const SimpleFactor& f) {
    const int r = f.rank;
    IntMatrix g(r, std::vector<std::int64_t>(r, 0));
    auto chain = [&](int len2, int off) {
      for (int i = 0; i < r; ++i) g[i][i] = len2;
      for (int i = 0; i + 1 < r; ++i) g[i][i + 1] = g[i + 1][i] = off;
    };
    switch (f.family) {
      case 'A':
        chain(2, -1);
        break;
      case 'B':  // alpha_i = e_i - e_{i+1}, alpha_r = e_r; lengths doubled
        chain(4, -2);
        g[r - 1][r - 1] = 2;
        break;
      case 'C':  // alpha_i = e_i - e_{i+1}, alpha_r = 2 e_r
        chain(2, -1);
        g[r - 1][r - 1] = 4;
        g[r - 2][r - 1] = g[r - 1][r - 2] = -2;
        break;
      case 'D':  // alpha_r = e_{r-1} + e_r
        chain(2, -1);
        g[r - 2][r - 1] = g[r - 1][r - 2] = 0;
        g[r - 3][r - 1] = g[r - 1][r - 3] = -1;
        break;
      case 'G':  // alpha_1 short, alpha_2 long
        g = {{2, -3}, {-3, 6}};
        break;
      default:
        throw ValidationError("unsupported factor label '" + f.label() + "'");
    }
    return g;
  }

  void build() {
    rank_ = static_cast<std::size_t>(type_.rank());
    IntMatrix gram(rank_, std::vector<std::int64_t>(rank_, 0));
    std::size_t offset = 0;
    for (const auto& f : type_.factors()) {
      const auto g = factor_gram(f);
      for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j) gram[offset + i][offset + j] = g[i][j];
      offset += g.size();
    }

    cartan_.assign(rank_, std::vector<std::int64_t>(rank_, 0));
    for (std::size_t i = 0; i < rank_; ++i)
      for (std::size_t j = 0; j < rank_; ++j) {
        ensure((2 * gram[i][j]) % gram[j][j] == 0, "non-integral Cartan entry");
        cartan_[i][j] = 2 * gram[i][j] / gram[j][j];
      }
    form_ = to_rational(gram);

    // weight = C^T root ; root = (C^T)^{-1} weight
    root_to_weight_ = transpose(to_rational(cartan_));
    auto inv = inverse(root_to_weight_);
    ensure(inv.has_value(), "singular Cartan matrix");
    weight_to_root_ = *inv;

    generate_positive_roots(gram);
  }

  std::int64_t cartan_pairing(const std::vector<std::int64_t>& beta, std::size_t i) const {
    std::int64_t s = 0;
    for (std::size_t j = 0; j < rank_; ++j) s += beta[j] * cartan_[j][i];
    return s;
  }

  void generate_positive_roots(const IntMatrix& gram) {
    std::set<std::vector<std::int64_t>> all;
    std::vector<std::vector<std::int64_t>> layer;
    for (std::size_t i = 0; i < rank_; ++i) {
      std::vector<std::int64_t> e(rank_, 0);
      e[i] = 1;
      layer.push_back(e);
      all.insert(e);
    }
    while (!layer.empty()) {
      std::set<std::vector<std::int64_t>> next;
      for (const auto& beta : layer) {
        for (std::size_t i = 0; i < rank_; ++i) {
          // alpha_i-string through beta: beta - p alpha_i, ..., beta + q alpha_i
          std::int64_t p = 0;
          for (;;) {
            auto down = beta;
            down[i] -= p + 1;
            if (!all.count(down)) break;
            ++p;
          }
          const std::int64_t q = p - cartan_pairing(beta, i);
          if (q > 0) {
            auto up = beta;
            up[i] += 1;
            if (!all.count(up)) next.insert(up);
          }
        }
      }
      layer.assign(next.begin(), next.end());
      all.insert(next.begin(), next.end());
    }

    roots_.assign(all.begin(), all.end());
    std::sort(roots_.begin(), roots_.end(), [](const auto& a, const auto& b) {
      std::int64_t ha = 0, hb = 0;
      for (auto x : a) ha += x;
      for (auto x : b) hb += x;
      return ha != hb ? ha < hb : a > b;
    });

    coroots_.clear();
    for (std::size_t k = 0; k < roots_.size(); ++k) {
      const auto& beta = roots_[k];
      std::int64_t norm2 = 0;
      for (std::size_t i = 0; i < rank_; ++i)
        for (std::size_t j = 0; j < rank_; ++j) norm2 += beta[i] * gram[i][j] * beta[j];
      std::vector<std::int64_t> h(rank_);
      for (std::size_t j = 0; j < rank_; ++j) {
        const std::int64_t num = beta[j] * gram[j][j];
        ensure(num % norm2 == 0, "non-integral coroot coordinate");
        h[j] = num / norm2;
      }
      coroots_.push_back(h);
      root_index_[beta] = k;
      coroot_index_[h] = k;
    }
    simple_index_.assign(rank_, 0);
    for (std::size_t i = 0; i < rank_; ++i) {
      std::vector<std::int64_t> e(rank_, 0);
      e[i] = 1;
      simple_index_[i] = root_index_.at(e);
    }
  }

  LieType type_;
  std::size_t rank_ = 0;
  IntMatrix cartan_;
  RationalMatrix form_;
  RationalMatrix root_to_weight_, weight_to_root_;
  std::vector<std::vector<std::int64_t>> roots_, coroots_;
  std::map<std::vector<std::int64_t>, std::size_t> root_index_, coroot_index_;
  std::vector<std::size_t> simple_index_;
};

inline RootSystem build_root_system(const LieType& t) { return RootSystem(t); }
inline RootSystem build_root_system(std::string_view label) { return RootSystem(LieType::parse(label)); }

}  // namespace orbitdh
