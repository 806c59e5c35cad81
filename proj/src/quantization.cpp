#include "skytrav/quantization.hpp"

#include <stdexcept>

namespace skytrav {

Quantization Quantization::rank(const Instance& instance) {
  Quantization q;
  q.bin_of_index_.reserve(instance.dim_count());
  q.m_.reserve(instance.dim_count());
  for (const Dimension& d : instance.dims) {
    std::vector<std::uint32_t> bins(d.grid.size());
    for (std::uint32_t j = 0; j < bins.size(); ++j) bins[j] = j;
    q.bin_of_index_.push_back(std::move(bins));
    q.m_.push_back(static_cast<std::uint32_t>(d.grid.size() - 1));
  }
  return q;
}

BinIndex Quantization::bin_index(const CostVector& cost) const {
  BinIndex b;
  b.bins.resize(cost.idx.size());
  for (std::size_t i = 0; i < cost.idx.size(); ++i) b.bins[i] = bin_of_index_[i][cost.idx[i]];
  return b;
}

std::uint64_t Quantization::bin_count() const {
  std::uint64_t total = 1;
  for (std::uint32_t m : m_) total *= static_cast<std::uint64_t>(m) + 1;
  return total;
}

std::uint32_t Quantization::bin_of_value(const Instance& instance, std::size_t dim,
                                         const Rational& value) const {
  const CostGrid& grid = instance.dims[dim].grid;
  if (value < grid.levels.front()) throw std::invalid_argument("value below the grid");
  std::uint32_t best = 0;
  for (std::uint32_t j = 0; j < grid.size(); ++j) {
    if (grid.level(j) <= value) best = j;
  }
  return bin_of_index_[dim][best];
}

std::uint64_t skyline_width_bound(const Quantization& q, std::size_t active_signature_count) {
  return static_cast<std::uint64_t>(active_signature_count) * q.bin_count();
}

}  // namespace skytrav
