#pragma once

// Duistermaat-Heckman density of a regular coadjoint orbit and Kostant weight
// multiplicities as alternating sums over the Weyl group:
//
//   density(lambda, mu)      = sum_w (-1)^w P_A( w.lambda - mu )
//   multiplicity(lambda, mu) = sum_w (-1)^w p_A( w.(lambda + delta) - (mu + delta) )
//
// with A the positive roots, P_A the fiber-polytope volume and p_A the
// partition function. Freudenthal's recursion is provided as an independent
// route to the multiplicities.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "orbitdh/errors.hpp"
#include "orbitdh/kostant_partition.hpp"
#include "orbitdh/polytope_volume.hpp"
#include "orbitdh/rational.hpp"
#include "orbitdh/rootsys.hpp"
#include "orbitdh/weyl.hpp"

namespace orbitdh {

enum class HullPosition { interior, boundary, exterior };

inline const char* to_string(HullPosition p) {
  switch (p) {
    case HullPosition::interior: return "interior";
    case HullPosition::boundary: return "boundary";
    case HullPosition::exterior: return "exterior";
  }
  return "?";
}

struct ConvergenceRow {
  std::int64_t k = 0;
  BigInt multiplicity;
  Rational scaled;     // multiplicity / k^s
  Rational density;    // density(lambda, mu), constant across rows
  Rational abs_error;  // |scaled - density|
};

struct ConvergenceTable {
  Weight lambda, mu;
  std::size_t s = 0;
  std::vector<ConvergenceRow> rows;
  double fitted_slope = std::numeric_limits<double>::quiet_NaN();
  bool mu_on_wall = false;
};

// Least-squares slope of log(abs_error) against log(k) over rows with a
// nonzero error; NaN when fewer than two such rows exist.
inline double fit_loglog_slope(const std::vector<ConvergenceRow>& rows) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
  for (const auto& row : rows) {
    if (sgn(row.abs_error) == 0) continue;
    const double lx = std::log(static_cast<double>(row.k)), ly = std::log(row.abs_error.get_d());
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    n += 1;
  }
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  const double den = n * sxx - sx * sx;
  if (den == 0) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / den;
}

// Shared state for one root system: Weyl group, fiber geometry and a growing
// partition-function table. Queries are const and safe to run concurrently.
class DHContext {
 public:
  explicit DHContext(RootSystem rs)
      : rs_(std::make_shared<const RootSystem>(std::move(rs))),
        weyl_(*rs_),
        fibers_(*rs_),
        partitions_(*rs_) {}

  const RootSystem& root_system() const { return *rs_; }
  const WeylGroup& weyl_group() const { return weyl_; }
  const FiberGeometry& fibers() const { return fibers_; }
  const PartitionTable& partitions() const { return partitions_; }

  // Duistermaat-Heckman density at mu for the orbit through lambda.
  Rational density(const Weight& lambda, const Weight& mu) const {
    check_strongly_dominant(lambda);
    rs_->check_dim(mu.size());
    Rational total(0);
    for (const auto& w : weyl_.elements()) {
      const Rational v = fibers_.volume(rs_->to_root_coords(act(w, lambda) - mu));
      if (w.sign > 0)
        total += v;
      else
        total -= v;
    }
    ensure(sgn(total) >= 0, "negative density " + total.get_str() + " at lambda=" + lambda.str() + " mu=" + mu.str());
    return total;
  }

  // Kostant multiplicity of the weight mu in the irreducible representation
  // with highest weight lambda. lambda must be dominant and integral; every
  // integral mu is accepted (zero off the weight support).
  BigInt multiplicity(const Weight& lambda, const Weight& mu) const {
    check_integral_dominant(lambda);
    rs_->check_dim(mu.size());
    require(mu.is_integral(), "multiplicity requires an integral weight mu, got " + mu.str());
    if (!rs_->to_root_coords(lambda - mu).is_integral()) return BigInt(0);
    const Weight delta = rs_->delta();
    const Weight shifted_mu = mu + delta;
    BigInt total = 0;
    for (const auto& w : weyl_.elements()) {
      const BigInt p = partitions_.count(rs_->to_root_coords(act(w, lambda + delta) - shifted_mu));
      if (w.sign > 0)
        total += p;
      else
        total -= p;
    }
    ensure(total >= 0, "negative multiplicity at lambda=" + lambda.str() + " mu=" + mu.str());
    return total;
  }

  // All weights with nonzero multiplicity, computed by Freudenthal's
  // recursion downward from lambda.
  std::map<Weight, BigInt> freudenthal_table(const Weight& lambda) const {
    check_integral_dominant(lambda);
    const Weight delta = rs_->delta();
    const Rational top = rs_->inner(lambda + delta, lambda + delta);
    const std::size_t r = rs_->rank();

    std::map<Weight, BigInt> mult;
    mult.emplace(lambda, 1);
    std::set<Weight> current{lambda};
    std::vector<Weight> roots;
    std::vector<std::int64_t> heights;
    for (std::size_t a = 0; a < rs_->num_positive_roots(); ++a) {
      roots.push_back(rs_->root_as_weight(a));
      std::int64_t h = 0;
      for (auto c : rs_->positive_roots()[a]) h += c;
      heights.push_back(h);
    }
    std::int64_t depth = 0;
    while (!current.empty()) {
      ++depth;
      std::set<Weight> candidates;
      for (const auto& nu : current)
        for (std::size_t i = 0; i < r; ++i) candidates.insert(nu - roots[rs_->simple_root_index(i)]);
      std::set<Weight> next;
      for (const auto& nu : candidates) {
        if (position_dominant(lambda, dominant_conjugate(*rs_, nu)) == HullPosition::exterior) continue;
        Rational numerator(0);
        for (std::size_t a = 0; a < roots.size(); ++a) {
          Weight up = nu;
          for (std::int64_t k = 1; depth - k * heights[a] >= 0; ++k) {
            up = up + roots[a];
            auto it = mult.find(up);
            if (it == mult.end()) continue;
            numerator += rs_->inner(up, roots[a]) * Rational(it->second);
          }
        }
        numerator *= 2;
        const Rational denom = top - rs_->inner(nu + delta, nu + delta);
        ensure(sgn(denom) > 0, "Freudenthal denominator is not positive at " + nu.str());
        const Rational m = numerator / denom;
        ensure(is_integer(m) && sgn(m) >= 0, "Freudenthal recursion produced a non-integral multiplicity");
        if (sgn(m) == 0) continue;
        mult.emplace(nu, m.get_num());
        next.insert(nu);
      }
      current = std::move(next);
    }
    return mult;
  }

  BigInt freudenthal_multiplicity(const Weight& lambda, const Weight& mu) const {
    rs_->check_dim(mu.size());
    const auto table = freudenthal_table(lambda);
    auto it = table.find(mu);
    return it == table.end() ? BigInt(0) : it->second;
  }

  std::vector<Weight> weight_support(const Weight& lambda) const {
    std::vector<Weight> out;
    for (const auto& [w, m] : freudenthal_table(lambda)) out.push_back(w);
    return out;
  }

  // prod_{alpha > 0} <lambda + delta, H_alpha> / <delta, H_alpha>
  BigInt weyl_dimension(const Weight& lambda) const {
    check_integral_dominant(lambda);
    const Weight delta = rs_->delta();
    Rational dim(1);
    for (std::size_t a = 0; a < rs_->num_positive_roots(); ++a)
      dim *= rs_->pair(lambda + delta, a) / rs_->pair(delta, a);
    ensure(is_integer(dim), "Weyl dimension is not an integer");
    return dim.get_num();
  }

  // Product over positive roots of 2 <lambda, w^{-1} H_alpha>: the Pfaffian of
  // the symplectic form at the fixed point w.lambda in the polarized basis.
  Rational pfaffian(const WeylElement& w, const Weight& lambda) const {
    rs_->check_dim(lambda.size());
    const auto& winv = weyl_.inverse_of(w);
    Rational product(1);
    for (std::size_t a = 0; a < rs_->num_positive_roots(); ++a) {
      const auto image = act_on_coroot(*rs_, weyl_, winv, a);
      const Rational factor = 2 * image.sign * rs_->pair(lambda, image.index);
      require(sgn(factor) != 0, "lambda' = " + lambda.str() +
                                    " lies on a wall (pairs to zero with a coroot): the orbit is not regular");
      product *= factor;
    }
    return product;
  }

  // Position of mu relative to the convex hull of the Weyl orbit of lambda.
  HullPosition hull_position(const Weight& lambda, const Weight& mu) const {
    check_strongly_dominant(lambda);
    rs_->check_dim(mu.size());
    return position_dominant(lambda, dominant_conjugate(*rs_, mu));
  }

  // True if some fiber in the alternating sum sits on a wall of the chamber
  // complex, where the density need not be smooth.
  bool on_wall(const Weight& lambda, const Weight& mu) const {
    for (const auto& w : weyl_.elements())
      if (fibers_.on_wall(rs_->to_root_coords(act(w, lambda) - mu))) return true;
    return false;
  }

  ConvergenceTable convergence_series(const Weight& lambda, const Weight& mu,
                                      const std::vector<std::int64_t>& k_values) const {
    require(!rs_->has_su2_factor(),
            "convergence of scaled multiplicities requires a root system without A1 (su2) factors: the "
            "lattice-point estimate needs rank(A - {alpha}) = rank(A) for every positive root alpha");
    check_strongly_dominant(lambda);
    require(lambda.is_integral() && mu.is_integral(), "convergence requires integral lambda' and mu'");
    rs_->check_dim(mu.size());
    require(!k_values.empty(), "convergence needs at least one k");
    for (std::size_t i = 0; i < k_values.size(); ++i) {
      require(k_values[i] >= 1, "k values must be positive");
      require(i == 0 || k_values[i] > k_values[i - 1], "k values must be strictly increasing");
    }
    const auto pos = hull_position(lambda, mu);
    require(pos != HullPosition::exterior, "mu' = " + mu.str() + " is outside the weight polytope of lambda' = " +
                                               lambda.str() + " (not in the weight support)");
    require(pos == HullPosition::interior,
            "mu' = " + mu.str() + " lies on the boundary of the weight polytope of lambda' = " + lambda.str() +
                ": the density is discontinuous there and pointwise convergence is not asserted");
    for (auto k : k_values)
      require(rs_->to_root_coords(make_rational(k) * (lambda - mu)).is_integral(),
              "k*mu' is not a weight of the representation with highest weight k*lambda' for k = " +
                  std::to_string(k) + " (k*(lambda' - mu') must lie in the root lattice)");

    ConvergenceTable table;
    table.lambda = lambda;
    table.mu = mu;
    table.s = rs_->s();
    table.mu_on_wall = on_wall(lambda, mu);
    const Rational rho = density(lambda, mu);

    // size the partition table once for the largest argument
    {
      const Weight delta = rs_->delta();
      const auto kmax = make_rational(k_values.back());
      const RootVector far = rs_->to_root_coords(kmax * (lambda - mu));
      std::vector<std::int64_t> bound;
      for (std::size_t i = 0; i < far.size(); ++i) bound.push_back(far[i].get_num().get_si() + 1);
      partitions_.reserve(bound);
    }

    for (auto k : k_values) {
      ConvergenceRow row;
      row.k = k;
      row.multiplicity = multiplicity(make_rational(k) * lambda, make_rational(k) * mu);
      Rational scaled(row.multiplicity);
      for (std::size_t i = 0; i < table.s; ++i) scaled /= k;
      row.scaled = scaled;
      row.density = rho;
      row.abs_error = abs(scaled - rho);
      table.rows.push_back(std::move(row));
    }
    table.fitted_slope = fit_loglog_slope(table.rows);
    return table;
  }

 private:
  void check_strongly_dominant(const Weight& lambda) const {
    rs_->check_dim(lambda.size());
    require(is_strongly_dominant(lambda), "lambda' = " + lambda.str() +
                                              " is not strongly dominant (every fundamental coordinate must be "
                                              "> 0); the density formula assumes a regular orbit");
  }

  void check_integral_dominant(const Weight& lambda) const {
    rs_->check_dim(lambda.size());
    require(lambda.is_integral() && is_dominant(lambda),
            "lambda' = " + lambda.str() + " must be an integral dominant weight");
  }

  HullPosition position_dominant(const Weight& lambda, const Weight& dominant_mu) const {
    const RootVector gap = rs_->to_root_coords(lambda - dominant_mu);
    bool boundary = false;
    for (const auto& c : gap.coords) {
      if (sgn(c) < 0) return HullPosition::exterior;
      if (sgn(c) == 0) boundary = true;
    }
    return boundary ? HullPosition::boundary : HullPosition::interior;
  }

  std::shared_ptr<const RootSystem> rs_;
  WeylGroup weyl_;
  FiberGeometry fibers_;
  PartitionTable partitions_;
};

// Query bundle: a root system with lambda' strongly dominant and any mu'.
class DHQuery {
 public:
  DHQuery(const RootSystem& rs, Weight lambda, Weight mu) : rs_(&rs), lambda_(std::move(lambda)), mu_(std::move(mu)) {
    rs.check_dim(lambda_.size());
    rs.check_dim(mu_.size());
    require(is_strongly_dominant(lambda_), "lambda' = " + lambda_.str() +
                                               " is not strongly dominant (every fundamental coordinate must be > 0)");
  }

  const RootSystem& root_system() const { return *rs_; }
  const Weight& lambda() const { return lambda_; }
  const Weight& mu() const { return mu_; }

 private:
  const RootSystem* rs_;
  Weight lambda_, mu_;
};

inline Rational dh_density(const DHQuery& q) { return DHContext(q.root_system()).density(q.lambda(), q.mu()); }

inline BigInt multiplicity(const DHQuery& q) { return DHContext(q.root_system()).multiplicity(q.lambda(), q.mu()); }

inline BigInt freudenthal_multiplicity(const RootSystem& rs, const Weight& lambda, const Weight& mu) {
  return DHContext(rs).freudenthal_multiplicity(lambda, mu);
}

inline std::vector<Weight> weight_support(const RootSystem& rs, const Weight& lambda) {
  return DHContext(rs).weight_support(lambda);
}

inline int pfaffian_sign(const RootSystem& rs, const WeylGroup& wg, const WeylElement& w, const Weight& lambda) {
  rs.check_dim(lambda.size());
  const auto& winv = wg.inverse_of(w);
  int sign = 1;
  for (std::size_t a = 0; a < rs.num_positive_roots(); ++a) {
    const auto image = act_on_coroot(rs, wg, winv, a);
    const int factor = image.sign * sgn(rs.pair(lambda, image.index));
    require(factor != 0, "lambda' = " + lambda.str() + " lies on a wall: the orbit is not regular");
    sign *= factor;
  }
  require(is_strongly_dominant(lambda), "lambda' = " + lambda.str() + " is not strongly dominant");
  return sign;
}

inline ConvergenceTable convergence_series(const DHQuery& q, const std::vector<std::int64_t>& k_values) {
  return DHContext(q.root_system()).convergence_series(q.lambda(), q.mu(), k_values);
}

}  // namespace orbitdh
