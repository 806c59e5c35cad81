#include "skytrav/frontier.hpp"

#include <algorithm>
#include <stdexcept>

namespace skytrav {

DominanceRelation dominance(const CostVector& a, const CostVector& b) {
  if (a.idx.size() != b.idx.size())
    throw std::invalid_argument("dominance: dimension mismatch");
  bool a_le = true, b_le = true, equal = true;
  for (std::size_t i = 0; i < a.idx.size(); ++i) {
    if (a.idx[i] > b.idx[i]) a_le = false;
    if (b.idx[i] > a.idx[i]) b_le = false;
    if (a.idx[i] != b.idx[i]) equal = false;
  }
  if (equal) return DominanceRelation::WeaklyDominatesEqual;
  if (a_le) return DominanceRelation::StrictlyDominates;
  if (b_le) return DominanceRelation::DominatedBy;
  return DominanceRelation::Incomparable;
}

Frontier::Frontier(std::vector<std::uint32_t> grid_sizes, std::uint32_t node_count,
                   std::uint32_t context_count)
    : grid_sizes_(std::move(grid_sizes)), node_count_(node_count), context_count_(context_count) {}

void Frontier::check_entry(const FrontierEntry& entry) const {
  if (entry.sig.node >= node_count_ || entry.sig.context >= context_count_)
    throw std::invalid_argument("frontier entry with out-of-range signature");
  if (entry.cost.idx.size() != grid_sizes_.size())
    throw std::invalid_argument("frontier entry with wrong cost dimensionality");
  for (std::size_t i = 0; i < grid_sizes_.size(); ++i)
    if (entry.cost.idx[i] >= grid_sizes_[i])
      throw std::invalid_argument("frontier entry off the grid (index out of range)");
}

InsertResult Frontier::insert(FrontierEntry entry) {
  check_entry(entry);
  const Key key{entry.sig, entry.cost};
  if (entries_.count(key)) return InsertResult::Duplicate;  // incumbent kept

  auto& sky = per_sig_skyline_[entry.sig];
  bool dominated = false;
  for (const CostVector& member : sky) {
    ++comparisons_;
    if (strictly_dominates(member, entry.cost)) {
      dominated = true;
      break;
    }
  }
  if (!dominated) {
    // The new cost joins the skyline and evicts members it dominates.
    for (auto it = sky.begin(); it != sky.end();) {
      ++comparisons_;
      if (strictly_dominates(entry.cost, *it))
        it = sky.erase(it);
      else
        ++it;
    }
    sky.insert(entry.cost);
  }

  per_sig_costs_[entry.sig].insert(entry.cost);
  entries_.emplace(key, std::move(entry));
  return InsertResult::Inserted;
}

void Frontier::rebuild_signature_skyline(const Signature& sig) {
  const auto costs_it = per_sig_costs_.find(sig);
  auto& sky = per_sig_skyline_[sig];
  sky.clear();
  if (costs_it == per_sig_costs_.end()) return;
  for (const CostVector& candidate : costs_it->second) {
    bool dominated = false;
    for (const CostVector& other : costs_it->second) {
      if (other == candidate) continue;
      ++comparisons_;
      if (strictly_dominates(other, candidate)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) sky.insert(candidate);
  }
}

void Frontier::erase(const Signature& sig, const CostVector& cost) {
  const auto it = entries_.find({sig, cost});
  if (it == entries_.end()) throw std::invalid_argument("erase: entry not in frontier");
  entries_.erase(it);

  auto costs_it = per_sig_costs_.find(sig);
  costs_it->second.erase(cost);
  const bool was_in_skyline = per_sig_skyline_[sig].count(cost) > 0;
  if (costs_it->second.empty()) {
    per_sig_costs_.erase(costs_it);
    per_sig_skyline_.erase(sig);
    return;
  }
  if (was_in_skyline) rebuild_signature_skyline(sig);
}

bool Frontier::contains(const Signature& sig, const CostVector& cost) const {
  return entries_.count({sig, cost}) > 0;
}

const FrontierEntry* Frontier::find(const Signature& sig, const CostVector& cost) const {
  const auto it = entries_.find({sig, cost});
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<const FrontierEntry*> Frontier::skyline() const {
  std::vector<const FrontierEntry*> out;
  for (const auto& [sig, costs] : per_sig_skyline_) {
    for (const CostVector& cost : costs) out.push_back(&entries_.at({sig, cost}));
  }
  return out;
}

bool Frontier::in_skyline(const Signature& sig, const CostVector& cost) const {
  const auto it = per_sig_skyline_.find(sig);
  return it != per_sig_skyline_.end() && it->second.count(cost) > 0;
}

const std::set<CostVector>& Frontier::signature_skyline(const Signature& sig) const {
  static const std::set<CostVector> kEmpty;
  const auto it = per_sig_skyline_.find(sig);
  return it == per_sig_skyline_.end() ? kEmpty : it->second;
}

std::vector<std::vector<const FrontierEntry*>> Frontier::pareto_layers() const {
  // Peel each signature independently, then union layer by layer.
  std::map<Signature, std::vector<std::vector<CostVector>>> per_sig_layers;
  for (const auto& [sig, costs] : per_sig_costs_) {
    std::set<CostVector> residual = costs;
    auto& layers = per_sig_layers[sig];
    while (!residual.empty()) {
      std::vector<CostVector> layer;
      for (const CostVector& candidate : residual) {
        bool dominated = false;
        for (const CostVector& other : residual) {
          if (other == candidate) continue;
          if (strictly_dominates(other, candidate)) {
            dominated = true;
            break;
          }
        }
        if (!dominated) layer.push_back(candidate);
      }
      for (const CostVector& c : layer) residual.erase(c);
      layers.push_back(std::move(layer));
    }
  }

  std::size_t depth = 0;
  for (const auto& [sig, layers] : per_sig_layers) depth = std::max(depth, layers.size());

  std::vector<std::vector<const FrontierEntry*>> global(depth);
  for (std::size_t k = 0; k < depth; ++k) {
    for (const auto& [sig, layers] : per_sig_layers) {
      if (k >= layers.size()) continue;
      for (const CostVector& cost : layers[k]) global[k].push_back(&entries_.at({sig, cost}));
    }
  }
  return global;
}

WidthReport layer_width_check(const Frontier& frontier, const Quantization& q) {
  WidthReport report;
  report.bin_count = q.bin_count();
  const auto layers = frontier.pareto_layers();
  report.layer_count = layers.size();

  for (std::size_t k = 0; k < layers.size(); ++k) {
    if (layers[k].empty()) {
      report.violations.push_back("empty layer " + std::to_string(k + 1) +
                                  " ahead of a non-empty one");
      continue;
    }
    report.max_global_layer_width = std::max(report.max_global_layer_width, layers[k].size());

    std::map<Signature, std::set<BinIndex>> bins_by_sig;
    std::map<Signature, std::size_t> width_by_sig;
    for (const FrontierEntry* entry : layers[k]) {
      ++width_by_sig[entry->sig];
      if (!bins_by_sig[entry->sig].insert(q.bin_index(entry->cost)).second)
        report.violations.push_back("bin collision in layer " + std::to_string(k + 1));
    }
    for (const auto& [sig, width] : width_by_sig) {
      report.max_signature_layer_width = std::max(report.max_signature_layer_width, width);
      if (width > report.bin_count)
        report.violations.push_back("per-signature layer width " + std::to_string(width) +
                                    " exceeds the bin count in layer " + std::to_string(k + 1));
    }
  }
  return report;
}

}  // namespace skytrav
