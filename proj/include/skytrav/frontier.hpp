#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "skytrav/instance.hpp"
#include "skytrav/quantization.hpp"

namespace skytrav {

enum class DominanceRelation { StrictlyDominates, WeaklyDominatesEqual, DominatedBy, Incomparable };

// Componentwise comparison on grid-index tuples; only meaningful between
// vectors of the same dimensionality and, for layering, the same signature.
DominanceRelation dominance(const CostVector& a, const CostVector& b);

inline bool strictly_dominates(const CostVector& a, const CostVector& b) {
  return dominance(a, b) == DominanceRelation::StrictlyDominates;
}

struct PathRecord {
  std::vector<EdgeId> edges;
  friend auto operator<=>(const PathRecord&, const PathRecord&) = default;
};

struct FrontierEntry {
  Signature sig;
  CostVector cost;
  PathRecord rep;  // unique representative, replayable from the source
};

enum class InsertResult { Inserted, Duplicate };

// Deduplicated frontier keyed by (signature, cost) with incrementally
// maintained per-signature skylines. Entries evicted from a skyline stay in
// the frontier; they sink into deeper layers and may resurface after
// extractions. Iteration order is always (signature, cost) lexicographic.
class Frontier {
 public:
  using Key = std::pair<Signature, CostVector>;

  Frontier(std::vector<std::uint32_t> grid_sizes, std::uint32_t node_count,
           std::uint32_t context_count);

  InsertResult insert(FrontierEntry entry);
  void erase(const Signature& sig, const CostVector& cost);

  bool contains(const Signature& sig, const CostVector& cost) const;
  const FrontierEntry* find(const Signature& sig, const CostVector& cost) const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::size_t active_signature_count() const { return per_sig_costs_.size(); }

  // Union of the per-signature skylines, in deterministic order.
  std::vector<const FrontierEntry*> skyline() const;
  bool in_skyline(const Signature& sig, const CostVector& cost) const;
  const std::set<CostVector>& signature_skyline(const Signature& sig) const;

  // Full Pareto layer decomposition; layer k is the per-signature residual
  // peel, unioned over signatures. Never contains an empty layer.
  std::vector<std::vector<const FrontierEntry*>> pareto_layers() const;

  const std::map<Key, FrontierEntry>& entries() const { return entries_; }

  // Pairwise dominance() evaluations performed by insert/erase so far.
  std::uint64_t dominance_comparisons() const { return comparisons_; }

 private:
  void check_entry(const FrontierEntry& entry) const;
  void rebuild_signature_skyline(const Signature& sig);

  std::vector<std::uint32_t> grid_sizes_;
  std::uint32_t node_count_;
  std::uint32_t context_count_;
  std::map<Key, FrontierEntry> entries_;
  std::map<Signature, std::set<CostVector>> per_sig_costs_;
  std::map<Signature, std::set<CostVector>> per_sig_skyline_;
  std::uint64_t comparisons_ = 0;
};

struct WidthReport {
  std::uint64_t bin_count = 0;
  std::size_t layer_count = 0;
  std::size_t max_signature_layer_width = 0;
  std::size_t max_global_layer_width = 0;
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

// Checks the structural layer geometry of a frontier snapshot: per-signature
// layer widths bounded by the bin count, no bin shared within a layer and
// signature, and no empty layer ahead of a non-empty one.
WidthReport layer_width_check(const Frontier& frontier, const Quantization& q);

}  // namespace skytrav
