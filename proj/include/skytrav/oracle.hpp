#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "skytrav/engine.hpp"
#include "skytrav/frontier.hpp"
#include "skytrav/instance.hpp"

namespace skytrav {

class OracleLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleLimits {
  std::uint64_t max_lambda = 20;
  std::uint64_t max_paths = 1'000'000;
  std::uint64_t max_states = 5'000'000;
};

struct FeasiblePath {
  PathRecord path;
  Signature sig;
  CostVector cost;
};

struct OracleEnumeration {
  std::vector<FeasiblePath> feasible_paths;  // depth-first order, exhaustive
  std::map<Signature, std::vector<CostVector>> by_signature_pareto;
  std::vector<CostVector> global_coverage_front;  // minimal costs across signatures
};

// Exhaustive depth-first enumeration of every path from the source with
// 1..Lambda edges that survives budget pruning and ends on a target.
// Deliberately desk-scale; refuses when Lambda exceeds the cap.
OracleEnumeration enumerate_feasible(const Instance& instance, const OracleLimits& limits = {});

// Minimum number of edges of a feasible extension from every (signature,
// cost) state, computed by breadth-first search over the finite state space.
// A goal is any state on a target node reached by at least one edge.
class PotentialTable {
 public:
  static PotentialTable compute(const Instance& instance, const OracleLimits& limits = {});

  // nullopt when no feasible extension exists.
  std::optional<std::uint64_t> potential(const Signature& sig, const CostVector& cost) const;

  std::size_t state_count() const { return dist_.size(); }

 private:
  std::size_t state_id(const Signature& sig, const CostVector& cost) const;

  std::size_t context_count_ = 0;
  std::vector<std::uint32_t> grid_sizes_;
  std::vector<std::uint32_t> dist_;
};

std::optional<std::uint64_t> completion_potential(const Instance& instance, const Signature& sig,
                                                  const CostVector& cost,
                                                  const OracleLimits& limits = {});

struct CoverageCounterexample {
  FeasiblePath missed;
  std::string detail;
};

struct CoverageVerifyReport {
  bool applicable = false;  // only certificate-held runs are checked
  std::vector<CoverageCounterexample> counterexamples;
  std::size_t paths_checked = 0;

  bool ok() const { return counterexamples.empty(); }
};

// Terminal dominance coverage: every feasible path absent from the solution
// list must be weakly dominated (on raw cost values, signatures ignored) by
// some recorded solution.
CoverageVerifyReport verify_dominance_coverage(const SearchResult& result,
                                               const OracleEnumeration& oracle,
                                               const Instance& instance);

struct DescentPhase {
  std::uint64_t boundary_step = 0;  // step whose expansion produced a complete path
  std::uint64_t descents = 0;       // strict floor drops attributed to the phase
};

struct DescentReport {
  bool ok = false;
  std::vector<std::string> violations;

  // Frontier potential floor by time (index t = after t extractions), with
  // value 0 at steps that generated a complete feasible path; nullopt when no
  // frontier entry is completable.
  std::vector<std::optional<std::uint64_t>> floor_by_time;

  std::vector<DescentPhase> phases;      // completed phases, in order
  std::uint64_t trailing_descents = 0;   // drops after the last complete phase
  std::uint64_t total_descents = 0;
  std::uint64_t discovered_paths = 0;
  std::uint64_t lambda = 0;
  std::uint64_t max_skyline_potential = 0;  // largest finite H seen on any skyline
  bool persistence_ok = false;
};

// Replays the run and checks the potential-descent behaviour of the
// skyline-only policy: the skyline always contains a minimum-potential
// element, the floor never rises inside a phase, strict drops happen exactly
// at minimum-potential extractions, per-phase drop counts stay within the
// step bound, and cumulative drops through the k-th discovery stay within
// k times the bound. Also checks that every undiscovered feasible path keeps
// a completable prefix in the frontier. config must be the configuration the
// result was produced with (its observer is ignored); the replay is checked
// against the result.
DescentReport verify_descent(const Instance& instance, const SearchResult& result,
                             const RunConfig& config = {}, const OracleLimits& limits = {});

// Copies the replayed floor values into the trace for CSV emission.
void annotate_trace_with_floor(SearchResult& result, const DescentReport& report);

struct ResidualBudgetReport {
  bool ok = false;
  std::uint64_t pairs_checked = 0;
  std::vector<std::string> violations;
};

// Exhaustive check that the completion potential is monotone under
// same-signature componentwise cost dominance.
ResidualBudgetReport verify_residual_budget(const Instance& instance,
                                            const OracleLimits& limits = {});

struct GeometryReport {
  bool ok = false;
  std::size_t snapshots = 0;
  std::size_t max_signature_layer_width = 0;
  std::uint64_t bin_count = 0;
  std::vector<std::string> violations;
};

// Replays a run and applies the layer-geometry checks to every frontier
// snapshot along the trace.
GeometryReport verify_layer_geometry(const Instance& instance, const RunConfig& config = {});

struct GenParams {
  std::uint32_t nodes = 7;        // <= 12
  std::uint32_t dims = 3;         // <= 4
  std::uint32_t grid_levels = 5;  // <= 8 levels per dimension
  std::uint32_t attributes = 2;   // <= 3
  std::uint32_t edges_per_node = 2;
  bool allow_switch_dim = true;
  std::uint32_t max_attempts = 200;
};

// Deterministic-by-seed random instance with at least one feasible path;
// rejection-samples candidates until validation and the oracle agree.
Instance generate_random_instance(std::uint64_t seed, const GenParams& params = {});

}  // namespace skytrav
