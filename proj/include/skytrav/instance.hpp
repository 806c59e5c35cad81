#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "skytrav/rational.hpp"

namespace skytrav {

// The traversal model: a finite digraph whose paths accumulate a d-dimensional
// cost vector over per-dimension finite grids, driven by per-dimension
// transition rules that are non-decreasing and monotone in the current level.
// A path's relevant history is condensed into a signature (node, context);
// the context is a finite state updated per edge attribute.

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;
using ContextId = std::uint32_t;
using AttributeId = std::uint32_t;

inline constexpr ContextId kInitialContext = 0;

struct Signature {
  NodeId node = 0;
  ContextId context = kInitialContext;
  friend auto operator<=>(const Signature&, const Signature&) = default;
};

// Cost vectors are stored as per-dimension grid indices. Comparing indices is
// equivalent to comparing level values because grids are strictly increasing.
struct CostVector {
  std::vector<std::uint32_t> idx;
  friend auto operator<=>(const CostVector&, const CostVector&) = default;
};

struct Edge {
  EdgeId id = 0;
  NodeId src = 0;
  NodeId dst = 0;
  AttributeId attribute = 0;
  std::vector<Rational> weights;  // one per dimension; read only by additive rules
};

struct CostGrid {
  std::vector<Rational> levels;  // strictly increasing, levels[0]=0, back()=budget
  Rational budget;

  std::size_t size() const { return levels.size(); }
  const Rational& level(std::size_t i) const { return levels[i]; }
  std::optional<std::uint32_t> index_of(const Rational& value) const;
};

struct AdditiveRule {};

struct AttributeSwitchRule {
  Rational penalty;
};

// Fully general per-dimension transition, sparse over (context, edge, level
// index); entries not present behave as the identity on the level.
struct TableRule {
  std::map<std::tuple<ContextId, EdgeId, std::uint32_t>, std::uint32_t> entries;

  std::uint32_t apply(ContextId ctx, EdgeId edge, std::uint32_t level_index) const {
    auto it = entries.find({ctx, edge, level_index});
    return it == entries.end() ? level_index : it->second;
  }
};

using CostRule = std::variant<AdditiveRule, AttributeSwitchRule, TableRule>;

struct Dimension {
  std::string name;
  CostGrid grid;
  CostRule rule;
  bool progressive = false;
  Rational declared_delta_min;  // meaningful only when progressive
};

// Contexts are dense ids; id 0 is the initial context (no edge traversed).
// The builtin last-attribute rule maps context ids 1..A to attributes 0..A-1.
struct ContextModel {
  std::vector<std::string> names;                        // names[0] = "initial"
  std::vector<std::optional<AttributeId>> attribute_of;  // per context
  bool last_attribute = true;
  std::map<std::pair<ContextId, AttributeId>, ContextId> table;

  static ContextModel make_last_attribute(const std::vector<std::string>& attribute_names);

  std::size_t count() const { return names.size(); }
  ContextId next(ContextId ctx, AttributeId attr) const;
};

struct Instance {
  std::string name;
  std::vector<std::string> node_names;
  std::vector<std::string> attribute_names;
  std::vector<Edge> edges;
  std::vector<Dimension> dims;
  ContextModel contexts;
  NodeId source = 0;
  std::vector<NodeId> targets;  // sorted, unique

  // Derived adjacency; call finalize() after mutating the fields above.
  std::vector<std::vector<EdgeId>> out_edges;
  std::vector<bool> target_mask;

  void finalize();

  std::size_t node_count() const { return node_names.size(); }
  std::size_t dim_count() const { return dims.size(); }
  bool is_target(NodeId n) const { return target_mask[n]; }
  std::size_t max_out_degree() const;

  Signature initial_signature() const { return Signature{source, kInitialContext}; }
  CostVector zero_cost() const { return CostVector{std::vector<std::uint32_t>(dims.size(), 0)}; }

  std::vector<Rational> cost_values(const CostVector& c) const;
  std::string signature_str(const Signature& sig) const;
  std::string cost_str(const CostVector& c) const;
};

enum class PruneReason { BudgetExceeded, OffGrid };

struct Advanced {
  Signature sig;
  CostVector cost;
};
struct PrunedStep {
  PruneReason reason;
  std::size_t dim;
};
using StepOutcome = std::variant<Advanced, PrunedStep>;

inline bool advanced(const StepOutcome& o) { return std::holds_alternative<Advanced>(o); }

struct ValidationIssue {
  enum class Severity { Error, Warning };
  Severity severity;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool valid() const;
  std::size_t error_count() const;
  std::string summary() const;
};

class ValidationError : public std::runtime_error {
 public:
  ValidationError(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

// Structural validation of the model assumptions: grids anchored at 0 and the
// budget, rules non-decreasing and monotone in the level, additive increments
// never landing strictly between grid levels on reachable states, and declared
// minimum increments consistent with the recomputed ones.
ValidationReport validate_instance(const Instance& instance);

// One-edge extension of a path state. Throws if edge.src != sig.node.
StepOutcome step(const Instance& instance, const Signature& sig, const CostVector& cost,
                 const Edge& edge);

// Recomputed per-dimension minimum increments over all non-pruning transitions
// (zero on non-progressive dimensions). Throws ValidationError when a declared
// progressive dimension admits a non-increasing transition.
std::vector<Rational> delta_min_vector(const Instance& instance);

// Hard bound on path length: min over progressive dims of floor(B_i / dmin_i).
std::uint64_t max_step_count(const Instance& instance);

}  // namespace skytrav
