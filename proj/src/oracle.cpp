#include "skytrav/oracle.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <set>

#include "skytrav/quantization.hpp"

namespace skytrav {

OracleEnumeration enumerate_feasible(const Instance& instance, const OracleLimits& limits) {
  const std::uint64_t lambda = max_step_count(instance);
  if (lambda > limits.max_lambda)
    throw OracleLimitError("step bound " + std::to_string(lambda) +
                           " exceeds the oracle cap " + std::to_string(limits.max_lambda));

  OracleEnumeration out;
  PathRecord path;
  auto dfs = [&](auto&& self, const Signature& sig, const CostVector& cost) -> void {
    if (path.edges.size() >= lambda) return;
    for (EdgeId eid : instance.out_edges[sig.node]) {
      const Edge& edge = instance.edges[eid];
      const StepOutcome outcome = step(instance, sig, cost, edge);
      if (!advanced(outcome)) continue;
      const auto& adv = std::get<Advanced>(outcome);
      path.edges.push_back(eid);
      if (instance.is_target(adv.sig.node)) {
        if (out.feasible_paths.size() >= limits.max_paths)
          throw OracleLimitError("feasible path count exceeds the oracle cap");
        out.feasible_paths.push_back({path, adv.sig, adv.cost});
      }
      self(self, adv.sig, adv.cost);
      path.edges.pop_back();
    }
  };
  dfs(dfs, instance.initial_signature(), instance.zero_cost());

  std::map<Signature, std::set<CostVector>> costs_by_sig;
  std::set<CostVector> all_costs;
  for (const FeasiblePath& fp : out.feasible_paths) {
    costs_by_sig[fp.sig].insert(fp.cost);
    all_costs.insert(fp.cost);
  }
  auto minimal = [](const std::set<CostVector>& costs) {
    std::vector<CostVector> front;
    for (const CostVector& c : costs) {
      bool dominated = false;
      for (const CostVector& other : costs) {
        if (other == c) continue;
        if (strictly_dominates(other, c)) {
          dominated = true;
          break;
        }
      }
      if (!dominated) front.push_back(c);
    }
    return front;
  };
  for (const auto& [sig, costs] : costs_by_sig) out.by_signature_pareto[sig] = minimal(costs);
  out.global_coverage_front = minimal(all_costs);
  return out;
}

std::size_t PotentialTable::state_id(const Signature& sig, const CostVector& cost) const {
  std::size_t id = sig.node * context_count_ + sig.context;
  for (std::size_t i = 0; i < grid_sizes_.size(); ++i) id = id * grid_sizes_[i] + cost.idx[i];
  return id;
}

PotentialTable PotentialTable::compute(const Instance& instance, const OracleLimits& limits) {
  PotentialTable table;
  table.context_count_ = instance.contexts.count();
  std::uint64_t cost_states = 1;
  for (const Dimension& d : instance.dims) {
    table.grid_sizes_.push_back(static_cast<std::uint32_t>(d.grid.size()));
    cost_states *= d.grid.size();
  }
  const std::uint64_t total = instance.node_count() * table.context_count_ * cost_states;
  if (total > limits.max_states)
    throw OracleLimitError("state space of " + std::to_string(total) +
                           " states exceeds the oracle cap");

  const auto decode = [&](std::size_t id, Signature& sig, CostVector& cost) {
    cost.idx.resize(table.grid_sizes_.size());
    for (std::size_t i = table.grid_sizes_.size(); i-- > 0;) {
      cost.idx[i] = static_cast<std::uint32_t>(id % table.grid_sizes_[i]);
      id /= table.grid_sizes_[i];
    }
    sig.context = static_cast<ContextId>(id % table.context_count_);
    sig.node = static_cast<NodeId>(id / table.context_count_);
  };

  std::vector<std::vector<std::uint32_t>> reverse_adj(total);
  {
    Signature sig;
    CostVector cost;
    for (std::size_t id = 0; id < total; ++id) {
      decode(id, sig, cost);
      for (EdgeId eid : instance.out_edges[sig.node]) {
        const StepOutcome outcome = step(instance, sig, cost, instance.edges[eid]);
        if (!advanced(outcome)) continue;
        const auto& adv = std::get<Advanced>(outcome);
        reverse_adj[table.state_id(adv.sig, adv.cost)].push_back(static_cast<std::uint32_t>(id));
      }
    }
  }

  constexpr std::uint32_t kInf = UINT32_MAX;
  table.dist_.assign(total, kInf);
  std::deque<std::pair<std::uint32_t, std::uint32_t>> queue;  // (state, effective distance)
  {
    Signature sig;
    CostVector cost;
    for (std::size_t id = 0; id < total; ++id) {
      decode(id, sig, cost);
      if (instance.is_target(sig.node)) queue.emplace_back(static_cast<std::uint32_t>(id), 0);
    }
  }
  // Target states seed the search at distance zero but keep their own
  // potential defined by re-entering a target, so they never propagate a
  // previously assigned distance.
  Signature sig_tmp;
  CostVector cost_tmp;
  while (!queue.empty()) {
    const auto [y, dy] = queue.front();
    queue.pop_front();
    for (std::uint32_t x : reverse_adj[y]) {
      if (table.dist_[x] != kInf) continue;
      table.dist_[x] = dy + 1;
      decode(x, sig_tmp, cost_tmp);
      if (!instance.is_target(sig_tmp.node)) queue.emplace_back(x, table.dist_[x]);
    }
  }
  return table;
}

std::optional<std::uint64_t> PotentialTable::potential(const Signature& sig,
                                                       const CostVector& cost) const {
  const std::uint32_t d = dist_[state_id(sig, cost)];
  if (d == UINT32_MAX) return std::nullopt;
  return d;
}

std::optional<std::uint64_t> completion_potential(const Instance& instance, const Signature& sig,
                                                  const CostVector& cost,
                                                  const OracleLimits& limits) {
  return PotentialTable::compute(instance, limits).potential(sig, cost);
}

CoverageVerifyReport verify_dominance_coverage(const SearchResult& result,
                                               const OracleEnumeration& oracle,
                                               const Instance& instance) {
  CoverageVerifyReport report;
  report.applicable = result.termination == Termination::CertificateHeld;
  if (!report.applicable) return report;

  std::set<std::pair<Signature, CostVector>> discovered;
  std::vector<std::vector<Rational>> solution_values;
  for (const SolutionRecord& s : result.solutions) {
    discovered.insert({s.sig, s.cost});
    solution_values.push_back(instance.cost_values(s.cost));
  }

  for (const FeasiblePath& fp : oracle.feasible_paths) {
    ++report.paths_checked;
    if (discovered.count({fp.sig, fp.cost})) continue;
    const std::vector<Rational> values = instance.cost_values(fp.cost);
    bool covered = false;
    for (const auto& sv : solution_values) {
      bool le = true;
      for (std::size_t i = 0; i < values.size() && le; ++i) le = sv[i] <= values[i];
      if (le) {
        covered = true;
        break;
      }
    }
    if (!covered)
      report.counterexamples.push_back(
          {fp, "no recorded solution dominates cost " + instance.cost_str(fp.cost) +
                   " at signature " + instance.signature_str(fp.sig)});
  }
  return report;
}

namespace {

std::string fmt_floor(const std::optional<std::uint64_t>& v) {
  return v ? std::to_string(*v) : std::string("inf");
}

}  // namespace

DescentReport verify_descent(const Instance& instance, const SearchResult& result,
                             const RunConfig& config, const OracleLimits& limits) {
  DescentReport report;
  report.lambda = max_step_count(instance);
  const PotentialTable table = PotentialTable::compute(instance, limits);
  const OracleEnumeration oracle = enumerate_feasible(instance, limits);

  // Prefix states of every feasible path, for the persistence invariant. A
  // path counts as discovered once a complete path with its final
  // (signature, cost) is recorded; the frontier keeps one representative per
  // state, so the same final state is never generated twice by edge identity.
  struct TrackedPath {
    std::vector<std::pair<Signature, CostVector>> prefixes;  // strict prefixes
    std::pair<Signature, CostVector> final_state;
  };
  std::vector<TrackedPath> tracked(oracle.feasible_paths.size());
  std::set<PathRecord> known_paths;
  std::set<PathRecord> generated_paths;
  std::set<std::pair<Signature, CostVector>> discovered_states;
  for (std::size_t i = 0; i < oracle.feasible_paths.size(); ++i) {
    const FeasiblePath& fp = oracle.feasible_paths[i];
    known_paths.insert(fp.path);
    tracked[i].final_state = {fp.sig, fp.cost};
    Signature sig = instance.initial_signature();
    CostVector cost = instance.zero_cost();
    tracked[i].prefixes.emplace_back(sig, cost);
    for (std::size_t k = 0; k + 1 < fp.path.edges.size(); ++k) {
      const StepOutcome outcome = step(instance, sig, cost, instance.edges[fp.path.edges[k]]);
      const auto& adv = std::get<Advanced>(outcome);
      sig = adv.sig;
      cost = adv.cost;
      tracked[i].prefixes.emplace_back(sig, cost);
    }
  }

  const auto entry_potential = [&](const Signature& sig, const CostVector& cost) {
    return table.potential(sig, cost);
  };

  std::vector<std::optional<std::uint64_t>> floor;       // unaugmented, by time
  std::vector<bool> event{false};                        // event[t], t >= 1
  std::vector<std::optional<std::uint64_t>> extracted_h{std::nullopt};
  bool persistence_failed = false;

  floor.push_back(entry_potential(instance.initial_signature(), instance.zero_cost()));
  if (floor[0] && *floor[0] > report.lambda)
    report.violations.push_back("initial floor " + fmt_floor(floor[0]) +
                                " exceeds the step bound");

  RunConfig replay_config = config;
  replay_config.observer = [&](const StepObservation& obs) {
    extracted_h.push_back(entry_potential(obs.extracted.sig, obs.extracted.cost));

    bool any_complete = false;
    for (const SolutionRecord& s : obs.complete_successors) {
      any_complete = true;
      if (!known_paths.count(s.path)) {
        report.violations.push_back("step " + std::to_string(obs.step) +
                                    ": engine produced a path the oracle does not know");
        continue;
      }
      if (!generated_paths.insert(s.path).second)
        report.violations.push_back("step " + std::to_string(obs.step) +
                                    ": the same path was generated twice");
      discovered_states.insert({s.sig, s.cost});
      ++report.discovered_paths;
    }
    event.push_back(any_complete);

    std::optional<std::uint64_t> frontier_floor;
    for (const auto& [key, entry] : obs.frontier_after.entries()) {
      const auto h = entry_potential(entry.sig, entry.cost);
      if (h && (!frontier_floor || *h < *frontier_floor)) frontier_floor = h;
    }
    floor.push_back(frontier_floor);

    std::optional<std::uint64_t> skyline_min;
    for (const FrontierEntry* entry : obs.frontier_after.skyline()) {
      const auto h = entry_potential(entry->sig, entry->cost);
      if (!h) continue;
      if (!skyline_min || *h < *skyline_min) skyline_min = h;
      report.max_skyline_potential = std::max(report.max_skyline_potential, *h);
    }
    if (frontier_floor) {
      if (!skyline_min || *skyline_min != *frontier_floor)
        report.violations.push_back("step " + std::to_string(obs.step) +
                                    ": skyline does not attain the frontier floor " +
                                    fmt_floor(frontier_floor));
      if (*frontier_floor > report.lambda)
        report.violations.push_back("step " + std::to_string(obs.step) + ": floor " +
                                    fmt_floor(frontier_floor) + " exceeds the step bound");
    }

    for (const TrackedPath& tp : tracked) {
      if (discovered_states.count(tp.final_state)) continue;
      bool present = false;
      for (const auto& [psig, pcost] : tp.prefixes) {
        if (obs.frontier_after.contains(psig, pcost)) {
          present = true;
          break;
        }
      }
      if (!present) {
        persistence_failed = true;
        report.violations.push_back("step " + std::to_string(obs.step) +
                                    ": an undiscovered feasible path lost every frontier prefix");
      }
    }
  };

  const SearchResult replay = run(instance, replay_config);
  report.persistence_ok = !persistence_failed;

  if (replay.trace.size() != result.trace.size() ||
      replay.termination != result.termination ||
      replay.solutions.size() != result.solutions.size()) {
    report.violations.push_back("replay diverged from the provided result");
  } else {
    for (std::size_t i = 0; i < replay.trace.size(); ++i) {
      if (replay.trace[i].extracted_sig != result.trace[i].extracted_sig ||
          replay.trace[i].extracted_cost != result.trace[i].extracted_cost) {
        report.violations.push_back("replay diverged from the provided result at step " +
                                    std::to_string(i + 1));
        break;
      }
    }
  }

  const std::size_t steps = replay.trace.size();
  // Augmented floor: a step that generated a complete feasible path is a
  // floor-zero arrival; between those, the unaugmented floor applies.
  report.floor_by_time.resize(steps + 1);
  for (std::size_t t = 0; t <= steps; ++t)
    report.floor_by_time[t] = (t > 0 && event[t]) ? std::optional<std::uint64_t>(0) : floor[t];

  for (std::size_t t = 1; t <= steps; ++t) {
    const auto& before = floor[t - 1];
    const auto& after = floor[t];
    if (!event[t]) {
      if (before && (!after || *after > *before))
        report.violations.push_back("step " + std::to_string(t) + ": floor rose from " +
                                    fmt_floor(before) + " to " + fmt_floor(after) +
                                    " without a discovery");
      if (!before && after)
        report.violations.push_back("step " + std::to_string(t) +
                                    ": floor became finite after being infinite");
      if (before && extracted_h[t] && *extracted_h[t] == *before) {
        // Strict progress when a minimum-potential element is extracted.
        if (!after || *after > *before - 1)
          report.violations.push_back("step " + std::to_string(t) +
                                      ": minimum-potential extraction did not descend");
      }
      if (before && after && *after < *before &&
          (!extracted_h[t] || *extracted_h[t] != *before))
        report.violations.push_back("step " + std::to_string(t) +
                                    ": floor dropped without extracting a minimum-potential "
                                    "element");
    } else {
      if (!extracted_h[t] || *extracted_h[t] != 1)
        report.violations.push_back("step " + std::to_string(t) +
                                    ": a discovery step extracted an element with potential " +
                                    fmt_floor(extracted_h[t]));
      if (!before || *before != 1)
        report.violations.push_back("step " + std::to_string(t) +
                                    ": a discovery happened while the floor was " +
                                    fmt_floor(before));
    }
  }

  // Phase decomposition: phases end at discovery steps; drops are counted on
  // the augmented floor, with each phase starting from the residual frontier
  // floor left by the previous discovery.
  std::uint64_t cumulative = 0;
  std::optional<std::uint64_t> current = floor[0];
  std::uint64_t drops = 0;
  for (std::size_t t = 1; t <= steps; ++t) {
    const std::optional<std::uint64_t> value =
        event[t] ? std::optional<std::uint64_t>(0) : floor[t];
    if (current && value && *value < *current) ++drops;
    current = value;
    if (event[t]) {
      report.phases.push_back({t, drops});
      cumulative += drops;
      if (drops > report.lambda)
        report.violations.push_back("phase ending at step " + std::to_string(t) + " used " +
                                    std::to_string(drops) + " descents, above the step bound");
      if (cumulative > report.phases.size() * report.lambda)
        report.violations.push_back("cumulative descents " + std::to_string(cumulative) +
                                    " exceed k times the step bound after " +
                                    std::to_string(report.phases.size()) + " discoveries");
      drops = 0;
      current = floor[t];  // residual frontier floor
    }
  }
  report.trailing_descents = drops;
  if (drops > report.lambda)
    report.violations.push_back("trailing phase used " + std::to_string(drops) +
                                " descents, above the step bound");
  report.total_descents = cumulative + drops;

  report.ok = report.violations.empty();
  return report;
}

void annotate_trace_with_floor(SearchResult& result, const DescentReport& report) {
  for (std::size_t i = 0; i < result.trace.size(); ++i) {
    if (i < report.floor_by_time.size() && report.floor_by_time[i])
      result.trace[i].h_star = static_cast<std::int64_t>(*report.floor_by_time[i]);
    else
      result.trace[i].h_star = std::nullopt;
  }
}

ResidualBudgetReport verify_residual_budget(const Instance& instance, const OracleLimits& limits) {
  ResidualBudgetReport report;
  const PotentialTable table = PotentialTable::compute(instance, limits);

  std::vector<std::uint32_t> sizes;
  std::uint64_t cost_states = 1;
  for (const Dimension& d : instance.dims) {
    sizes.push_back(static_cast<std::uint32_t>(d.grid.size()));
    cost_states *= d.grid.size();
  }
  const std::uint64_t pair_budget =
      cost_states * cost_states * instance.node_count() * instance.contexts.count();
  if (pair_budget > 200'000'000ull)
    throw OracleLimitError("state-pair sweep is over the oracle cap");

  std::vector<CostVector> costs;
  costs.reserve(cost_states);
  CostVector cursor;
  cursor.idx.assign(sizes.size(), 0);
  for (std::uint64_t n = 0; n < cost_states; ++n) {
    costs.push_back(cursor);
    for (std::size_t i = sizes.size(); i-- > 0;) {
      if (++cursor.idx[i] < sizes[i]) break;
      cursor.idx[i] = 0;
    }
  }

  const auto le = [](const CostVector& a, const CostVector& b) {
    for (std::size_t i = 0; i < a.idx.size(); ++i)
      if (a.idx[i] > b.idx[i]) return false;
    return true;
  };

  for (NodeId node = 0; node < instance.node_count(); ++node) {
    for (ContextId ctx = 0; ctx < instance.contexts.count(); ++ctx) {
      const Signature sig{node, ctx};
      for (const CostVector& a : costs) {
        const auto ha = table.potential(sig, a);
        for (const CostVector& b : costs) {
          if (!le(a, b)) continue;
          ++report.pairs_checked;
          const auto hb = table.potential(sig, b);
          const std::uint64_t va = ha ? *ha : UINT64_MAX;
          const std::uint64_t vb = hb ? *hb : UINT64_MAX;
          if (va > vb)
            report.violations.push_back(
                "potential not monotone at " + instance.signature_str(sig) + ": H" +
                instance.cost_str(a) + " = " + fmt_floor(ha) + " > H" + instance.cost_str(b) +
                " = " + fmt_floor(hb));
        }
      }
    }
  }
  report.ok = report.violations.empty();
  return report;
}

GeometryReport verify_layer_geometry(const Instance& instance, const RunConfig& config) {
  GeometryReport report;
  const Quantization q = Quantization::rank(instance);
  report.bin_count = q.bin_count();

  RunConfig replay_config = config;
  replay_config.observer = [&](const StepObservation& obs) {
    ++report.snapshots;
    const WidthReport width = layer_width_check(obs.frontier_after, q);
    report.max_signature_layer_width =
        std::max(report.max_signature_layer_width, width.max_signature_layer_width);
    for (const std::string& v : width.violations)
      report.violations.push_back("step " + std::to_string(obs.step) + ": " + v);
  };
  run(instance, replay_config);
  report.ok = report.violations.empty();
  return report;
}

namespace {

std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) { return n == 0 ? 0 : rng() % n; }

}  // namespace

Instance generate_random_instance(std::uint64_t seed, const GenParams& params) {
  if (params.nodes < 2 || params.nodes > 12) throw std::invalid_argument("nodes must be in 2..12");
  if (params.dims < 1 || params.dims > 4) throw std::invalid_argument("dims must be in 1..4");
  if (params.grid_levels < 2 || params.grid_levels > 8)
    throw std::invalid_argument("grid_levels must be in 2..8");
  if (params.attributes < 1 || params.attributes > 3)
    throw std::invalid_argument("attributes must be in 1..3");

  std::mt19937_64 rng(seed + 0x9E3779B97F4A7C15ull);
  const char* kAttributeNames[] = {"A", "B", "C"};

  for (std::uint32_t attempt = 0; attempt < params.max_attempts; ++attempt) {
    Instance inst;
    inst.name = "gen-seed-" + std::to_string(seed);
    for (std::uint32_t n = 0; n < params.nodes; ++n) inst.node_names.push_back("n" + std::to_string(n));
    for (std::uint32_t a = 0; a < params.attributes; ++a)
      inst.attribute_names.push_back(kAttributeNames[a]);
    inst.contexts = ContextModel::make_last_attribute(inst.attribute_names);

    // Dimension 0 drives progress: integer grid, strictly positive weights.
    bool switch_used = false;
    std::vector<Rational> scales;
    for (std::uint32_t d = 0; d < params.dims; ++d) {
      Dimension dim;
      dim.name = "c" + std::to_string(d + 1);
      const std::uint32_t levels =
          d == 0 ? params.grid_levels
                 : static_cast<std::uint32_t>(2 + bounded(rng, params.grid_levels - 1));
      Rational scale(1);
      if (d > 0 && bounded(rng, 2) == 1) scale = Rational(1, 2);
      scales.push_back(scale);
      for (std::uint32_t j = 0; j < levels; ++j)
        dim.grid.levels.push_back(Rational(static_cast<std::int64_t>(j)) * scale);
      dim.grid.budget = dim.grid.levels.back();

      if (d > 0 && params.allow_switch_dim && !switch_used && params.attributes >= 2 &&
          bounded(rng, 3) == 0) {
        switch_used = true;
        const std::uint64_t max_penalty = std::min<std::uint64_t>(2, levels - 1);
        dim.rule = AttributeSwitchRule{
            Rational(static_cast<std::int64_t>(1 + bounded(rng, max_penalty))) * scale};
      } else {
        dim.rule = AdditiveRule{};
      }
      dim.progressive = d == 0;
      if (d == 0) dim.declared_delta_min = Rational(1);
      inst.dims.push_back(std::move(dim));
    }

    const std::uint32_t edge_count = params.nodes * params.edges_per_node;
    for (std::uint32_t i = 0; i < edge_count; ++i) {
      Edge e;
      e.id = i;
      e.src = static_cast<NodeId>(bounded(rng, params.nodes));
      e.dst = static_cast<NodeId>(bounded(rng, params.nodes));
      if (e.dst == e.src) e.dst = static_cast<NodeId>((e.dst + 1) % params.nodes);
      e.attribute = static_cast<AttributeId>(bounded(rng, params.attributes));
      for (std::uint32_t d = 0; d < params.dims; ++d) {
        if (std::holds_alternative<AdditiveRule>(inst.dims[d].rule)) {
          const std::uint64_t lo = d == 0 ? 1 : 0;
          const std::uint64_t hi = d == 0 ? 2 : 2;
          e.weights.push_back(
              Rational(static_cast<std::int64_t>(lo + bounded(rng, hi - lo + 1))) * scales[d]);
        } else {
          e.weights.push_back(Rational(0));
        }
      }
      inst.edges.push_back(std::move(e));
    }

    inst.source = static_cast<NodeId>(bounded(rng, params.nodes));
    const std::uint32_t target_count = 1 + static_cast<std::uint32_t>(bounded(rng, 2));
    for (std::uint32_t i = 0; i < target_count; ++i) {
      const NodeId t = static_cast<NodeId>(bounded(rng, params.nodes));
      if (t != inst.source) inst.targets.push_back(t);
    }
    if (inst.targets.empty())
      inst.targets.push_back(static_cast<NodeId>((inst.source + 1) % params.nodes));
    inst.finalize();

    try {
      const std::vector<Rational> computed = delta_min_vector(inst);
      inst.dims[0].declared_delta_min = computed[0];
    } catch (const ValidationError&) {
      continue;
    }
    if (!validate_instance(inst).valid()) continue;
    if (max_step_count(inst) > 20) continue;

    try {
      const OracleEnumeration oracle = enumerate_feasible(inst);
      if (oracle.feasible_paths.empty()) continue;
      // Skip candidates solvable in a single edge, unless the attempt budget
      // is nearly spent.
      std::size_t shortest = SIZE_MAX;
      for (const FeasiblePath& fp : oracle.feasible_paths)
        shortest = std::min(shortest, fp.path.edges.size());
      if (shortest < 2 && attempt + 20 < params.max_attempts) continue;
    } catch (const OracleLimitError&) {
      continue;
    }
    return inst;
  }
  throw std::runtime_error("random instance generation exhausted its attempt budget (seed " +
                           std::to_string(seed) + ")");
}

}  // namespace skytrav
