#include "skytrav/instance.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <stdexcept>

namespace skytrav {

namespace {

// Per-dimension transition result. Table rules always stay on the grid;
// additive and switch rules evaluate a raw value first and classify it.
struct DimStep {
  enum class Kind { OnGrid, Budget, OffGrid } kind;
  std::uint32_t next_index = 0;
  Rational raw;
};

DimStep eval_dim(const Instance& inst, std::size_t dim, ContextId ctx, const Edge& edge,
                 std::uint32_t level_index) {
  const Dimension& d = inst.dims[dim];
  if (const auto* table = std::get_if<TableRule>(&d.rule)) {
    const std::uint32_t next = table->apply(ctx, edge.id, level_index);
    return {DimStep::Kind::OnGrid, next, d.grid.level(next)};
  }

  Rational increment;
  if (std::holds_alternative<AdditiveRule>(d.rule)) {
    increment = edge.weights[dim];
  } else {
    const auto& rule = std::get<AttributeSwitchRule>(d.rule);
    if (ctx != kInitialContext) {
      const auto& attr = inst.contexts.attribute_of[ctx];
      if (!attr)
        throw std::logic_error("attribute-switch rule on a context without an attribute");
      if (*attr != edge.attribute) increment = rule.penalty;
    }
  }

  const Rational raw = d.grid.level(level_index) + increment;
  if (raw > d.grid.budget) return {DimStep::Kind::Budget, 0, raw};
  if (auto idx = d.grid.index_of(raw)) return {DimStep::Kind::OnGrid, *idx, raw};
  return {DimStep::Kind::OffGrid, 0, raw};
}

}  // namespace

std::optional<std::uint32_t> CostGrid::index_of(const Rational& value) const {
  const auto it = std::lower_bound(levels.begin(), levels.end(), value);
  if (it == levels.end() || !(*it == value)) return std::nullopt;
  return static_cast<std::uint32_t>(it - levels.begin());
}

ContextModel ContextModel::make_last_attribute(const std::vector<std::string>& attribute_names) {
  ContextModel m;
  m.last_attribute = true;
  m.names.push_back("initial");
  m.attribute_of.push_back(std::nullopt);
  for (std::size_t a = 0; a < attribute_names.size(); ++a) {
    m.names.push_back(attribute_names[a]);
    m.attribute_of.push_back(static_cast<AttributeId>(a));
  }
  return m;
}

ContextId ContextModel::next(ContextId ctx, AttributeId attr) const {
  if (last_attribute) return static_cast<ContextId>(attr + 1);
  const auto it = table.find({ctx, attr});
  if (it == table.end())
    throw std::logic_error("context transition table is not total");
  return it->second;
}

void Instance::finalize() {
  out_edges.assign(node_names.size(), {});
  for (const Edge& e : edges) out_edges[e.src].push_back(e.id);
  for (auto& v : out_edges) std::sort(v.begin(), v.end());
  target_mask.assign(node_names.size(), false);
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  for (NodeId t : targets) target_mask[t] = true;
}

std::size_t Instance::max_out_degree() const {
  std::size_t m = 0;
  for (const auto& v : out_edges) m = std::max(m, v.size());
  return m;
}

std::vector<Rational> Instance::cost_values(const CostVector& c) const {
  std::vector<Rational> values;
  values.reserve(dims.size());
  for (std::size_t i = 0; i < dims.size(); ++i) values.push_back(dims[i].grid.level(c.idx[i]));
  return values;
}

std::string Instance::signature_str(const Signature& sig) const {
  return "(" + node_names[sig.node] + "," + contexts.names[sig.context] + ")";
}

std::string Instance::cost_str(const CostVector& c) const {
  std::string out = "(";
  for (std::size_t i = 0; i < c.idx.size(); ++i) {
    if (i) out += ",";
    out += dims[i].grid.level(c.idx[i]).str();
  }
  return out + ")";
}

bool ValidationReport::valid() const { return error_count() == 0; }

std::size_t ValidationReport::error_count() const {
  std::size_t n = 0;
  for (const auto& i : issues)
    if (i.severity == ValidationIssue::Severity::Error) ++n;
  return n;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const auto& i : issues)
    os << (i.severity == ValidationIssue::Severity::Error ? "error: " : "warning: ") << i.message
       << "\n";
  return os.str();
}

ValidationError::ValidationError(ValidationReport report)
    : std::runtime_error("invalid instance:\n" + report.summary()), report_(std::move(report)) {}

StepOutcome step(const Instance& instance, const Signature& sig, const CostVector& cost,
                 const Edge& edge) {
  if (edge.src != sig.node)
    throw std::invalid_argument("step: edge source " + instance.node_names[edge.src] +
                                " does not match signature node " +
                                instance.node_names[sig.node]);
  CostVector next;
  next.idx.resize(instance.dim_count());
  for (std::size_t i = 0; i < instance.dim_count(); ++i) {
    const DimStep ds = eval_dim(instance, i, sig.context, edge, cost.idx[i]);
    switch (ds.kind) {
      case DimStep::Kind::Budget:
        return PrunedStep{PruneReason::BudgetExceeded, i};
      case DimStep::Kind::OffGrid:
        return PrunedStep{PruneReason::OffGrid, i};
      case DimStep::Kind::OnGrid:
        next.idx[i] = ds.next_index;
        break;
    }
  }
  return Advanced{Signature{edge.dst, instance.contexts.next(sig.context, edge.attribute)},
                  std::move(next)};
}

namespace {

// Minimum of delta_i(ctx, e, g) - g over the full (context, edge, level)
// domain of dimension i, restricted to transitions that stay within budget.
// nullopt when every transition of the dimension prunes.
std::optional<Rational> computed_min_increment(const Instance& inst, std::size_t dim) {
  std::optional<Rational> best;
  for (ContextId ctx = 0; ctx < inst.contexts.count(); ++ctx) {
    for (const Edge& e : inst.edges) {
      for (std::uint32_t g = 0; g < inst.dims[dim].grid.size(); ++g) {
        const DimStep ds = eval_dim(inst, dim, ctx, e, g);
        if (ds.kind == DimStep::Kind::Budget) continue;
        const Rational inc = ds.raw - inst.dims[dim].grid.level(g);
        if (!best || inc < *best) best = inc;
      }
    }
  }
  return best;
}

void check_grid(const Instance& inst, std::size_t dim, ValidationReport& report) {
  const CostGrid& grid = inst.dims[dim].grid;
  const std::string tag = "dimension '" + inst.dims[dim].name + "'";
  if (grid.levels.empty()) {
    report.issues.push_back({ValidationIssue::Severity::Error, tag + ": empty grid"});
    return;
  }
  for (std::size_t i = 1; i < grid.levels.size(); ++i) {
    if (!(grid.levels[i - 1] < grid.levels[i])) {
      report.issues.push_back(
          {ValidationIssue::Severity::Error, tag + ": grid levels not strictly increasing"});
      break;
    }
  }
  if (!(grid.levels.front() == Rational(0)))
    report.issues.push_back({ValidationIssue::Severity::Error, tag + ": grid does not contain 0"});
  if (!(grid.levels.back() == grid.budget))
    report.issues.push_back({ValidationIssue::Severity::Error,
                             tag + ": grid does not end at the budget " + grid.budget.str()});
}

void check_rule_pointwise(const Instance& inst, std::size_t dim, ValidationReport& report) {
  const std::string tag = "dimension '" + inst.dims[dim].name + "'";
  const CostGrid& grid = inst.dims[dim].grid;

  if (const auto* sw = std::get_if<AttributeSwitchRule>(&inst.dims[dim].rule)) {
    if (sw->penalty < Rational(0))
      report.issues.push_back(
          {ValidationIssue::Severity::Error, tag + ": negative switch penalty"});
    for (ContextId ctx = 1; ctx < inst.contexts.count(); ++ctx) {
      if (!inst.contexts.attribute_of[ctx]) {
        report.issues.push_back({ValidationIssue::Severity::Error,
                                 tag + ": attribute-switch rule requires an attribute for context '" +
                                     inst.contexts.names[ctx] + "'"});
      }
    }
    return;
  }

  const auto* table = std::get_if<TableRule>(&inst.dims[dim].rule);
  if (!table) return;

  // Exhaustive delta >= g and monotonicity sweep over the table's full domain.
  for (ContextId ctx = 0; ctx < inst.contexts.count(); ++ctx) {
    for (const Edge& e : inst.edges) {
      std::uint32_t prev = 0;
      for (std::uint32_t g = 0; g < grid.size(); ++g) {
        const std::uint32_t next = table->apply(ctx, e.id, g);
        if (next >= grid.size()) {
          report.issues.push_back({ValidationIssue::Severity::Error,
                                   tag + ": table entry maps outside the grid (context '" +
                                       inst.contexts.names[ctx] + "', edge " + std::to_string(e.id) +
                                       ", level " + grid.level(g).str() + ")"});
          continue;
        }
        if (next < g)
          report.issues.push_back(
              {ValidationIssue::Severity::Error,
               tag + ": delta >= g violated (context '" + inst.contexts.names[ctx] + "', edge " +
                   std::to_string(e.id) + ", level " + grid.level(g).str() + " -> " +
                   grid.level(next).str() + ")"});
        if (g > 0 && next < prev)
          report.issues.push_back(
              {ValidationIssue::Severity::Error,
               tag + ": not monotone in the level (context '" + inst.contexts.names[ctx] +
                   "', edge " + std::to_string(e.id) + ", levels " + grid.level(g - 1).str() +
                   " vs " + grid.level(g).str() + ")"});
        prev = next;
      }
    }
  }
}

// Walk the reachable (signature, cost) states; additive or switch increments
// that land strictly between grid levels below the budget are model errors.
void check_reachable_on_grid(const Instance& inst, ValidationReport& report) {
  constexpr std::size_t kStateCap = 1u << 21;
  std::set<std::pair<Signature, CostVector>> seen;
  std::deque<std::pair<Signature, CostVector>> queue;
  std::set<std::string> reported;
  queue.emplace_back(inst.initial_signature(), inst.zero_cost());
  seen.insert(queue.front());
  while (!queue.empty()) {
    if (seen.size() > kStateCap) {
      report.issues.push_back({ValidationIssue::Severity::Error,
                               "state space exceeds the validation cap; reduce grids or nodes"});
      return;
    }
    auto [sig, cost] = queue.front();
    queue.pop_front();
    for (EdgeId eid : inst.out_edges[sig.node]) {
      const Edge& e = inst.edges[eid];
      bool ok = true;
      CostVector next;
      next.idx.resize(inst.dim_count());
      for (std::size_t i = 0; i < inst.dim_count() && ok; ++i) {
        const DimStep ds = eval_dim(inst, i, sig.context, e, cost.idx[i]);
        switch (ds.kind) {
          case DimStep::Kind::Budget:
            ok = false;
            break;
          case DimStep::Kind::OffGrid: {
            ok = false;
            std::string msg = "dimension '" + inst.dims[i].name + "': increment leaves the grid below the budget (edge " +
                              std::to_string(e.id) + ", level " +
                              inst.dims[i].grid.level(cost.idx[i]).str() + " -> " + ds.raw.str() + ")";
            if (reported.insert(msg).second)
              report.issues.push_back({ValidationIssue::Severity::Error, std::move(msg)});
            break;
          }
          case DimStep::Kind::OnGrid:
            next.idx[i] = ds.next_index;
            break;
        }
      }
      if (!ok) continue;
      Signature nsig{e.dst, inst.contexts.next(sig.context, e.attribute)};
      auto key = std::make_pair(nsig, std::move(next));
      if (seen.insert(key).second) queue.push_back(std::move(key));
    }
  }
}

}  // namespace

ValidationReport validate_instance(const Instance& instance) {
  ValidationReport report;
  using Severity = ValidationIssue::Severity;

  if (instance.targets.empty())
    report.issues.push_back({Severity::Error, "target set is empty"});
  if (instance.is_target(instance.source))
    report.issues.push_back(
        {Severity::Warning, "source is a target; solutions still require at least one edge"});

  for (const Edge& e : instance.edges) {
    if (e.weights.size() != instance.dim_count())
      report.issues.push_back({Severity::Error,
                               "edge " + std::to_string(e.id) + ": weight count does not match dimensions"});
    for (std::size_t i = 0; i < e.weights.size(); ++i) {
      if (e.weights[i] < Rational(0))
        report.issues.push_back({Severity::Error, "edge " + std::to_string(e.id) +
                                                      ": negative weight in dimension " +
                                                      std::to_string(i + 1)});
    }
  }

  if (!instance.contexts.last_attribute) {
    for (ContextId ctx = 0; ctx < instance.contexts.count(); ++ctx) {
      for (AttributeId a = 0; a < instance.attribute_names.size(); ++a) {
        if (!instance.contexts.table.count({ctx, a}))
          report.issues.push_back({Severity::Error,
                                   "context transition missing for (" + instance.contexts.names[ctx] +
                                       ", " + instance.attribute_names[a] + ")"});
      }
    }
  }
  if (report.error_count() > 0) return report;  // later sweeps assume a sound structure

  for (std::size_t i = 0; i < instance.dim_count(); ++i) {
    check_grid(instance, i, report);
    check_rule_pointwise(instance, i, report);
  }
  if (report.error_count() > 0) return report;

  check_reachable_on_grid(instance, report);

  std::vector<std::size_t> progressive;
  for (std::size_t i = 0; i < instance.dim_count(); ++i)
    if (instance.dims[i].progressive) progressive.push_back(i);
  if (progressive.empty())
    report.issues.push_back({Severity::Error, "no progressive dimension declared"});

  for (std::size_t i : progressive) {
    const std::string tag = "dimension '" + instance.dims[i].name + "'";
    const Rational declared = instance.dims[i].declared_delta_min;
    if (!(declared > Rational(0))) {
      report.issues.push_back(
          {Severity::Error, tag + ": declared minimum increment must be positive"});
      continue;
    }
    const auto computed = computed_min_increment(instance, i);
    if (!computed) {
      report.issues.push_back(
          {Severity::Error, tag + ": every transition prunes; the dimension admits no step"});
      continue;
    }
    if (!(*computed > Rational(0)))
      report.issues.push_back({Severity::Error,
                               tag + ": progress violation, a transition increments by " +
                                   computed->str()});
    else if (*computed < declared)
      report.issues.push_back({Severity::Error,
                               tag + ": declared minimum increment " + declared.str() +
                                   " exceeds the computed minimum " + computed->str()});
    else if (declared < *computed)
      report.issues.push_back({Severity::Warning,
                               tag + ": declared minimum increment " + declared.str() +
                                   " is below the computed minimum " + computed->str()});
  }

  return report;
}

std::vector<Rational> delta_min_vector(const Instance& instance) {
  std::vector<Rational> result(instance.dim_count(), Rational(0));
  ValidationReport contradiction;
  for (std::size_t i = 0; i < instance.dim_count(); ++i) {
    if (!instance.dims[i].progressive) continue;
    const auto computed = computed_min_increment(instance, i);
    if (!computed || !(*computed > Rational(0))) {
      contradiction.issues.push_back(
          {ValidationIssue::Severity::Error,
           "dimension '" + instance.dims[i].name +
               "': declared progressive but the computed minimum increment is " +
               (computed ? computed->str() : std::string("undefined"))});
      continue;
    }
    result[i] = *computed;
  }
  if (!contradiction.issues.empty()) throw ValidationError(std::move(contradiction));
  return result;
}

std::uint64_t max_step_count(const Instance& instance) {
  const std::vector<Rational> dmin = delta_min_vector(instance);
  std::optional<std::uint64_t> best;
  for (std::size_t i = 0; i < instance.dim_count(); ++i) {
    if (!instance.dims[i].progressive) continue;
    const std::int64_t steps = Rational::floor_div(instance.dims[i].grid.budget, dmin[i]);
    const auto bound = static_cast<std::uint64_t>(steps < 0 ? 0 : steps);
    if (!best || bound < *best) best = bound;
  }
  if (!best) {
    ValidationReport r;
    r.issues.push_back(
        {ValidationIssue::Severity::Error, "no progressive dimension declared"});
    throw ValidationError(std::move(r));
  }
  return *best;
}

}  // namespace skytrav
