#pragma once

#include <compare>
#include <cstdint>
#include <vector>

#include "skytrav/instance.hpp"

namespace skytrav {

struct BinIndex {
  std::vector<std::uint32_t> bins;
  friend auto operator<=>(const BinIndex&, const BinIndex&) = default;
};

// Maps on-grid cost vectors to resolution-bin vectors. Only the rank
// quantization is constructed today (bin = ordinal position of the level),
// but the per-dimension maps stay explicit so coarser quantizations can be
// slotted in without changing the interface.
class Quantization {
 public:
  static Quantization rank(const Instance& instance);

  std::size_t dim_count() const { return bin_of_index_.size(); }
  std::uint32_t max_bin(std::size_t dim) const { return m_[dim]; }

  BinIndex bin_index(const CostVector& cost) const;

  // Total number of bin index vectors, prod_i (m_i + 1).
  std::uint64_t bin_count() const;

  // Extension to off-grid values: bin of the largest grid level <= value.
  std::uint32_t bin_of_value(const Instance& instance, std::size_t dim,
                             const Rational& value) const;

 private:
  std::vector<std::vector<std::uint32_t>> bin_of_index_;  // per dim, per grid index
  std::vector<std::uint32_t> m_;
};

// Structural skyline width bound: active signatures times bin count.
std::uint64_t skyline_width_bound(const Quantization& q, std::size_t active_signature_count);

}  // namespace skytrav
