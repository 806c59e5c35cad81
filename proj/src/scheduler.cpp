#include "skytrav/scheduler.hpp"

#include <stdexcept>

namespace skytrav {

FrontierEntry extract(Frontier& frontier, CoverageSet& coverage, const Quantization& q) {
  const auto sky = frontier.skyline();
  if (sky.empty()) throw std::logic_error("extract on an empty frontier");

  // skyline() iterates in (signature, cost) order, so the first hit is the
  // lexicographic minimum among uncovered-bin candidates.
  const FrontierEntry* chosen = nullptr;
  for (const FrontierEntry* entry : sky) {
    if (!coverage.contains(q.bin_index(entry->cost))) {
      chosen = entry;
      break;
    }
  }
  if (!chosen) chosen = sky.front();

  FrontierEntry extracted = *chosen;
  frontier.erase(extracted.sig, extracted.cost);
  coverage.add(q.bin_index(extracted.cost));
  return extracted;
}

CoverageReport coverage_stats(const CoverageSet& coverage, const Quantization& q) {
  CoverageReport report;
  report.covered = coverage.size();
  report.total = q.bin_count();
  report.ratio = report.total == 0 ? 0.0
                                   : static_cast<double>(report.covered) /
                                         static_cast<double>(report.total);
  return report;
}

}  // namespace skytrav
