#pragma once

#include <cstdint>
#include <set>

#include "skytrav/frontier.hpp"
#include "skytrav/quantization.hpp"

namespace skytrav {

// Resolution bins whose representative has already been extracted.
// Grows monotonically over a run and is never reset between solutions.
struct CoverageSet {
  std::set<BinIndex> covered;

  bool contains(const BinIndex& b) const { return covered.count(b) > 0; }
  void add(const BinIndex& b) { covered.insert(b); }
  std::size_t size() const { return covered.size(); }
};

struct CoverageReport {
  std::uint64_t covered = 0;
  std::uint64_t total = 0;
  double ratio = 0.0;
};

// Skyline-first extraction: pick a skyline entry whose bin is uncovered when
// one exists, otherwise any skyline entry; residual ties go to the smallest
// (signature, cost) pair. Removes the entry and records its bin.
FrontierEntry extract(Frontier& frontier, CoverageSet& coverage, const Quantization& q);

CoverageReport coverage_stats(const CoverageSet& coverage, const Quantization& q);

}  // namespace skytrav
