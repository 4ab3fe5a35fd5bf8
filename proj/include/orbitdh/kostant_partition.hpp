#pragma once

// Exact vector partition function p_A(x): the number of ways to write x as a
// nonnegative integer combination of a fixed list A of vectors with
// nonnegative coordinates (for the Kostant partition function, A = positive
// roots in simple-root coordinates).
//
// Values are tabulated by dynamic programming over a bounding box: the
// vectors are added one at a time, each pass an unbounded-knapsack sweep in
// increasing mixed-radix order. The table grows when a query leaves the box.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

#include "orbitdh/errors.hpp"
#include "orbitdh/rational.hpp"
#include "orbitdh/rootsys.hpp"

namespace orbitdh {

class PartitionTable {
 public:
  PartitionTable(std::vector<std::vector<std::int64_t>> vectors, std::size_t dim)
      : vectors_(std::move(vectors)), dim_(dim), box_(dim, -1) {
    for (const auto& v : vectors_) {
      require(v.size() == dim_, "partition vectors must have length " + std::to_string(dim_));
      require(std::all_of(v.begin(), v.end(), [](auto c) { return c >= 0; }) &&
                  std::any_of(v.begin(), v.end(), [](auto c) { return c > 0; }),
              "partition vectors must be nonzero with nonnegative coordinates");
    }
  }

  explicit PartitionTable(const RootSystem& rs) : PartitionTable(rs.positive_roots(), rs.rank()) {}

  PartitionTable(const PartitionTable&) = delete;
  PartitionTable& operator=(const PartitionTable&) = delete;

  std::size_t dim() const { return dim_; }
  const std::vector<std::vector<std::int64_t>>& vectors() const { return vectors_; }

  // Count at raw simple-root coordinates.
  BigInt at(const std::vector<std::int64_t>& x) const {
    require(x.size() == dim_, "expected a vector of length " + std::to_string(dim_));
    if (std::any_of(x.begin(), x.end(), [](auto c) { return c < 0; })) return BigInt(0);
    {
      std::shared_lock lock(mutex_);
      if (covers(x)) return table_[offset(x)];
    }
    std::unique_lock lock(mutex_);
    if (!covers(x)) rebuild(x);
    return table_[offset(x)];
  }

  BigInt count(const RootVector& x) const {
    require(x.is_integral(), "partition_count requires integer simple-root coordinates, got " + x.str());
    std::vector<std::int64_t> v(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      require(x[i].get_num().fits_slong_p(), "coordinate out of range");
      v[i] = x[i].get_num().get_si();
    }
    return at(v);
  }

  // Pre-size the table so that every x with 0 <= x <= bound is covered.
  void reserve(const std::vector<std::int64_t>& bound) const {
    std::unique_lock lock(mutex_);
    if (!covers(bound)) rebuild(bound);
  }

 private:
  bool covers(const std::vector<std::int64_t>& x) const {
    for (std::size_t i = 0; i < dim_; ++i)
      if (x[i] > box_[i]) return false;
    return true;
  }

  std::size_t offset(const std::vector<std::int64_t>& x) const {
    std::size_t off = 0;
    for (std::size_t i = 0; i < dim_; ++i) off = off * static_cast<std::size_t>(box_[i] + 1) + static_cast<std::size_t>(x[i]);
    return off;
  }

  void rebuild(const std::vector<std::int64_t>& x) const {
    std::vector<std::int64_t> box(dim_);
    for (std::size_t i = 0; i < dim_; ++i) box[i] = std::max({box_[i], x[i], std::int64_t{0}});
    std::size_t total = 1;
    std::vector<std::size_t> stride(dim_, 1);
    for (std::size_t i = dim_; i-- > 0;) {
      stride[i] = total;
      total *= static_cast<std::size_t>(box[i] + 1);
    }
    std::vector<BigInt> table(total, BigInt(0));
    table[0] = 1;
    std::vector<std::int64_t> y(dim_);
    for (const auto& v : vectors_) {
      bool fits = true;
      std::size_t shift = 0;
      for (std::size_t i = 0; i < dim_; ++i) {
        if (v[i] > box[i]) fits = false;
        shift += static_cast<std::size_t>(v[i]) * stride[i];
      }
      if (!fits) continue;
      std::fill(y.begin(), y.end(), 0);
      for (std::size_t idx = 0; idx < total; ++idx) {
        bool ge = true;
        for (std::size_t i = 0; i < dim_ && ge; ++i) ge = y[i] >= v[i];
        if (ge) table[idx] += table[idx - shift];
        for (std::size_t i = dim_; i-- > 0;) {
          if (++y[i] <= box[i]) break;
          y[i] = 0;
        }
      }
    }
    box_ = std::move(box);
    table_ = std::move(table);
  }

  std::vector<std::vector<std::int64_t>> vectors_;
  std::size_t dim_;
  mutable std::shared_mutex mutex_;
  mutable std::vector<std::int64_t> box_;
  mutable std::vector<BigInt> table_;
};

inline BigInt partition_count(const RootSystem& rs, const RootVector& x) {
  rs.check_dim(x.size());
  return PartitionTable(rs).count(x);
}

}  // namespace orbitdh
