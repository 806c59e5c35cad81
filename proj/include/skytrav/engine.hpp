#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "skytrav/frontier.hpp"
#include "skytrav/instance.hpp"
#include "skytrav/quantization.hpp"
#include "skytrav/scheduler.hpp"

namespace skytrav {

struct SolutionRecord {
  PathRecord path;
  Signature sig;
  CostVector cost;
  std::uint64_t discovered_at_step = 0;
};

struct OpCounters {
  std::uint64_t cost_updates = 0;
  std::uint64_t dominance_comparisons = 0;
};

struct TraceEvent {
  std::uint64_t step = 0;
  Signature extracted_sig;
  CostVector extracted_cost;
  BinIndex extracted_bin;
  std::size_t skyline_size_before = 0;
  std::size_t frontier_size_after = 0;
  std::size_t covered_bins = 0;
  std::size_t solutions_count = 0;
  bool certificate_held = false;
  OpCounters counters;  // cumulative totals up to and including this step
  std::size_t active_signatures = 0;
  std::optional<std::int64_t> h_star;  // set only by oracle annotation
};

enum class Termination { CertificateHeld, FrontierExhausted, StepLimit };

const char* termination_str(Termination t);

struct SearchResult {
  std::vector<SolutionRecord> solutions;
  std::vector<TraceEvent> trace;
  Termination termination = Termination::FrontierExhausted;
  Frontier final_frontier;
};

// Per-step view handed to an observer; references are valid only during the
// callback. complete_successors lists every budget-respecting successor that
// ended on a target this step, including ones deduplicated out of the
// solution list.
struct StepObservation {
  std::uint64_t step;
  const FrontierEntry& extracted;
  const std::vector<FrontierEntry>& skyline_before;
  const std::vector<SolutionRecord>& complete_successors;
  const Frontier& frontier_after;
};

struct RunConfig {
  std::uint64_t certificate_period = 1;  // evaluate every N extractions
  std::optional<std::uint64_t> step_limit;
  std::function<void(const StepObservation&)> observer;
};

// Full search loop: extract from the skyline, expand one transition, record
// target hits, insert surviving successors, stop on the certificate or when
// the frontier empties. Rejects invalid instances up front.
SearchResult run(const Instance& instance, const RunConfig& config = {});

// Vector lower-bound stopping certificate: every skyline element p must be
// covered by a recorded solution s with C(s) <= C(p) + delta_min, compared on
// raw level values. Vacuously true on an empty skyline. Counts one comparison
// per (skyline element, solution) pair when a counter is supplied.
bool certificate_holds(const std::vector<const FrontierEntry*>& skyline,
                       const std::vector<SolutionRecord>& solutions,
                       const std::vector<Rational>& delta_min, const Instance& instance,
                       std::uint64_t* comparison_counter = nullptr);

struct BoundReport {
  std::uint64_t steps = 0;            // t*
  std::size_t max_out_degree = 0;     // Delta
  std::size_t peak_active_signatures = 0;
  std::uint64_t bin_count = 0;
  std::uint64_t peak_width = 0;       // W
  std::size_t dims = 0;
  std::uint64_t measured_ops = 0;
  std::uint64_t constant = 0;         // fixed calibration constant
  std::uint64_t bound = 0;            // constant * t* * Delta * W * d
  bool within = false;
};

// Checks the measured operation counters of a completed run against the
// structural bound c * t* * Delta * W * d.
BoundReport runtime_bound_check(const SearchResult& result, const Instance& instance,
                                const Quantization& q);

}  // namespace skytrav
