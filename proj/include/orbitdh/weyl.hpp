#pragma once

// Weyl group of a root system, generated by breadth-first closure over the
// simple reflections. Elements are dense integer matrices acting on
// fundamental-weight coordinates (column convention, x -> M x); word lengths
// are BFS depths in the Cayley graph.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <vector>

#include "orbitdh/errors.hpp"
#include "orbitdh/rational.hpp"
#include "orbitdh/rootsys.hpp"

namespace orbitdh {

struct WeylElement {
  IntMatrix action;
  int length = 0;
  int sign = 1;
  std::size_t index = 0;
  std::size_t inverse_index = 0;
};

namespace detail {

inline IntMatrix int_identity(std::size_t r) {
  IntMatrix m(r, std::vector<std::int64_t>(r, 0));
  for (std::size_t i = 0; i < r; ++i) m[i][i] = 1;
  return m;
}

inline IntMatrix int_multiply(const IntMatrix& a, const IntMatrix& b) {
  const std::size_t r = a.size();
  IntMatrix c(r, std::vector<std::int64_t>(r, 0));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t k = 0; k < r; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < r; ++j) c[i][j] += a[i][k] * b[k][j];
    }
  return c;
}

inline IntMatrix simple_reflection_matrix(const RootSystem& rs, std::size_t i) {
  const auto& cartan = rs.cartan_matrix();
  IntMatrix m = int_identity(rs.rank());
  // (s_i x)_k = x_k - x_i * <alpha_i, H_{alpha_k}>
  for (std::size_t k = 0; k < rs.rank(); ++k) m[k][i] -= cartan[i][k];
  return m;
}

}  // namespace detail

inline Weight act(const WeylElement& w, const Weight& x) {
  require(x.size() == w.action.size(), "dimension mismatch: Weyl element of rank " +
                                           std::to_string(w.action.size()) + " applied to vector of length " +
                                           std::to_string(x.size()));
  Weight out = Weight::zero(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j)
      if (w.action[i][j] != 0) out[i] += make_rational(w.action[i][j]) * x[j];
  return out;
}

class WeylGroup {
 public:
  explicit WeylGroup(const RootSystem& rs) : rank_(rs.rank()) {
    std::vector<IntMatrix> gens;
    for (std::size_t i = 0; i < rank_; ++i) gens.push_back(detail::simple_reflection_matrix(rs, i));

    std::map<IntMatrix, std::size_t> seen;
    std::deque<std::size_t> queue;
    auto add = [&](IntMatrix m, int len) {
      WeylElement e;
      e.action = std::move(m);
      e.length = len;
      e.sign = (len % 2 == 0) ? 1 : -1;
      e.index = elements_.size();
      seen.emplace(e.action, e.index);
      queue.push_back(e.index);
      elements_.push_back(std::move(e));
    };
    add(detail::int_identity(rank_), 0);
    while (!queue.empty()) {
      const std::size_t cur = queue.front();
      queue.pop_front();
      for (std::size_t i = 0; i < rank_; ++i) {
        IntMatrix next = detail::int_multiply(gens[i], elements_[cur].action);
        if (!seen.count(next)) add(std::move(next), elements_[cur].length + 1);
      }
    }
    for (std::size_t i = 0; i < rank_; ++i) simple_.push_back(seen.at(gens[i]));

    const IntMatrix id = detail::int_identity(rank_);
    for (auto& e : elements_) {
      auto inv = inverse(to_rational(e.action));
      ensure(inv.has_value(), "singular Weyl element");
      IntMatrix m(rank_, std::vector<std::int64_t>(rank_));
      for (std::size_t i = 0; i < rank_; ++i)
        for (std::size_t j = 0; j < rank_; ++j) m[i][j] = (*inv)[i][j].get_num().get_si();
      e.inverse_index = seen.at(m);
      ensure(detail::int_multiply(m, e.action) == id, "Weyl inverse lookup failed");
    }
    index_ = std::move(seen);
  }

  std::size_t order() const { return elements_.size(); }
  std::size_t rank() const { return rank_; }
  const std::vector<WeylElement>& elements() const { return elements_; }
  const WeylElement& operator[](std::size_t i) const { return elements_.at(i); }
  const WeylElement& identity() const { return elements_.front(); }
  const WeylElement& simple_reflection(std::size_t i) const { return elements_.at(simple_.at(i)); }
  const WeylElement& inverse_of(const WeylElement& w) const { return elements_.at(w.inverse_index); }

  // Element of maximal length (unique).
  const WeylElement& longest_element() const {
    const WeylElement* best = &elements_.front();
    for (const auto& e : elements_)
      if (e.length > best->length) best = &e;
    return *best;
  }

  const WeylElement& compose(const WeylElement& a, const WeylElement& b) const {
    return elements_.at(index_.at(detail::int_multiply(a.action, b.action)));
  }

  const WeylElement* find(const IntMatrix& action) const {
    auto it = index_.find(action);
    return it == index_.end() ? nullptr : &elements_[it->second];
  }

 private:
  std::size_t rank_;
  std::vector<WeylElement> elements_;
  std::vector<std::size_t> simple_;
  std::map<IntMatrix, std::size_t> index_;
};

inline WeylGroup generate(const RootSystem& rs) { return WeylGroup(rs); }

// Image of the positive coroot H_alpha under w, expressed as (index, sign)
// with w.H_alpha = sign * H_beta for the positive coroot beta = index.
struct SignedCoroot {
  std::size_t index;
  int sign;
};

inline SignedCoroot act_on_coroot(const RootSystem& rs, const WeylGroup& wg, const WeylElement& w,
                                  std::size_t coroot_index) {
  // On coroot coordinates w acts by the inverse transpose of its weight action,
  // which is the transpose of the action of w^{-1}.
  const auto& winv = wg.inverse_of(w).action;
  const auto& h = rs.positive_coroots().at(coroot_index);
  std::vector<std::int64_t> image(rs.rank(), 0);
  for (std::size_t i = 0; i < rs.rank(); ++i)
    for (std::size_t j = 0; j < rs.rank(); ++j) image[i] += winv[j][i] * h[j];
  long idx = rs.find_positive_coroot(image);
  if (idx >= 0) return {static_cast<std::size_t>(idx), 1};
  for (auto& x : image) x = -x;
  idx = rs.find_positive_coroot(image);
  ensure(idx >= 0, "Weyl element does not permute the coroots");
  return {static_cast<std::size_t>(idx), -1};
}

// (-1)^w computed as the parity of the number of positive coroots sent to
// negative coroots.
inline int inversion_sign(const RootSystem& rs, const WeylGroup& wg, const WeylElement& w) {
  std::size_t inverted = 0;
  for (std::size_t a = 0; a < rs.num_positive_roots(); ++a)
    if (act_on_coroot(rs, wg, w, a).sign < 0) ++inverted;
  return inverted % 2 == 0 ? 1 : -1;
}

// Number of positive roots sent to negative roots, computed on root vectors.
inline std::size_t inversion_count(const RootSystem& rs, const WeylElement& w) {
  std::size_t inverted = 0;
  for (std::size_t a = 0; a < rs.num_positive_roots(); ++a) {
    const RootVector image = rs.to_root_coords(act(w, rs.root_as_weight(a)));
    if (std::any_of(image.coords.begin(), image.coords.end(), [](const Rational& q) { return sgn(q) < 0; }))
      ++inverted;
  }
  return inverted;
}

// Dominant Weyl conjugate of x, by repeatedly reflecting negative coordinates.
inline Weight dominant_conjugate(const RootSystem& rs, Weight x) {
  rs.check_dim(x.size());
  const auto& cartan = rs.cartan_matrix();
  for (;;) {
    std::size_t i = 0;
    while (i < x.size() && sgn(x[i]) >= 0) ++i;
    if (i == x.size()) return x;
    const Rational c = x[i];
    for (std::size_t k = 0; k < x.size(); ++k) x[k] -= c * make_rational(cartan[i][k]);
  }
}

}  // namespace orbitdh
