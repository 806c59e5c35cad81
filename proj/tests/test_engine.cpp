#include <doctest.h>

#include "skytrav/engine.hpp"
#include "skytrav/io.hpp"
#include "skytrav/oracle.hpp"
#include "test_helpers.hpp"

using namespace skytrav;
using namespace skytrav::test;

namespace {

Instance one_edge_instance() {
  Instance inst;
  inst.node_names = {"s", "t"};
  inst.attribute_names = {"A"};
  inst.contexts = ContextModel::make_last_attribute(inst.attribute_names);
  CostGrid g;
  g.levels = {Rational(0), Rational(1), Rational(2)};
  g.budget = Rational(2);
  inst.dims.push_back({"c1", g, AdditiveRule{}, true, Rational(1)});
  Edge e{0, 0, 1, 0, {Rational(1)}};
  inst.edges.push_back(e);
  inst.source = 0;
  inst.targets = {1};
  inst.finalize();
  return inst;
}

}  // namespace

TEST_CASE("running example reaches the certificate with two solutions") {
  const Instance inst = make_running_example();
  const SearchResult result = run(inst);

  CHECK(result.termination == Termination::CertificateHeld);
  REQUIRE(result.solutions.size() == 2);
  CHECK(result.solutions[0].sig == sig_t_z1());
  CHECK(result.solutions[0].cost == cv({2, 4, 0}));
  CHECK(result.solutions[0].discovered_at_step == 2);
  CHECK(result.solutions[0].path.edges == std::vector<EdgeId>{0, 1});
  CHECK(result.solutions[1].sig == sig_t_z2());
  CHECK(result.solutions[1].cost == cv({1, 2, 0}));
  CHECK(result.solutions[1].discovered_at_step == 3);
  CHECK(result.solutions[1].path.edges == std::vector<EdgeId>{3, 4});

  REQUIRE(result.trace.size() == 3);
  const auto& t1 = result.trace[0];
  CHECK(t1.extracted_sig == sig_s_init());
  CHECK(t1.extracted_cost == cv({0, 0, 0}));
  CHECK(t1.skyline_size_before == 1);
  CHECK(t1.frontier_size_after == 2);
  CHECK(t1.covered_bins == 1);
  CHECK(!t1.certificate_held);

  const auto& t2 = result.trace[1];
  CHECK(t2.extracted_sig == sig_a_z1());
  CHECK(t2.extracted_cost == cv({1, 2, 0}));
  CHECK(t2.skyline_size_before == 2);
  CHECK(t2.frontier_size_after == 2);
  CHECK(t2.solutions_count == 1);
  CHECK(!t2.certificate_held);

  const auto& t3 = result.trace[2];
  CHECK(t3.extracted_sig == sig_b_z2());
  CHECK(t3.extracted_cost == cv({1, 1, 0}));
  CHECK(t3.skyline_size_before == 1);
  CHECK(t3.frontier_size_after == 1);
  CHECK(t3.solutions_count == 2);
  CHECK(t3.certificate_held);

  // The dominated prefix stays behind in the final frontier.
  CHECK(result.final_frontier.size() == 1);
  CHECK(result.final_frontier.contains(sig_b_z2(), cv({1, 3, 1})));
}

TEST_CASE("certificate predicate on the worked values") {
  const Instance inst = make_running_example();
  const std::vector<Rational> dmin = delta_min_vector(inst);

  Frontier f = make_frontier(inst);
  f.insert({sig_t_z2(), cv({1, 2, 0}), {}});
  std::vector<SolutionRecord> sols{{PathRecord{{3, 4}}, sig_t_z2(), cv({1, 2, 0}), 1}};
  CHECK(certificate_holds(f.skyline(), sols, dmin, inst));

  // No witness without solutions.
  CHECK(!certificate_holds(f.skyline(), {}, dmin, inst));

  // Vacuously true on an empty skyline.
  Frontier empty = make_frontier(inst);
  CHECK(certificate_holds(empty.skyline(), {}, dmin, inst));

  // The lower bound matters: (2,4,0) does not cover (1,1,0) + (0,1,0).
  Frontier uncovered = make_frontier(inst);
  uncovered.insert({sig_b_z2(), cv({1, 1, 0}), {}});
  std::vector<SolutionRecord> p1{{PathRecord{{0, 1}}, sig_t_z1(), cv({2, 4, 0}), 1}};
  CHECK(!certificate_holds(uncovered.skyline(), p1, dmin, inst));
}

TEST_CASE("no feasible path degrades to frontier exhaustion") {
  Instance inst = make_running_example();
  inst.targets = {};
  inst.node_names.push_back("island");
  inst.targets = {4};  // unreachable node
  inst.finalize();
  REQUIRE(validate_instance(inst).valid());
  const SearchResult result = run(inst);
  CHECK(result.termination == Termination::FrontierExhausted);
  CHECK(result.solutions.empty());
}

TEST_CASE("single-edge instance solves in one step") {
  const SearchResult result = run(one_edge_instance());
  CHECK(result.solutions.size() == 1);
  CHECK(result.trace.size() == 1);
  CHECK(result.termination == Termination::FrontierExhausted);
}

TEST_CASE("step limit terminates the loop") {
  const Instance inst = make_running_example();
  RunConfig config;
  config.step_limit = 1;
  const SearchResult result = run(inst, config);
  CHECK(result.termination == Termination::StepLimit);
  CHECK(result.trace.size() == 1);
}

TEST_CASE("a sparser certificate cadence uncovers the third path") {
  const Instance inst = make_running_example();
  RunConfig config;
  config.certificate_period = 2;
  const SearchResult result = run(inst, config);
  // With checks only at even steps the search keeps going and finds p3.
  CHECK(result.termination == Termination::FrontierExhausted);
  REQUIRE(result.solutions.size() == 3);
  CHECK(result.solutions[2].cost == cv({1, 4, 1}));
  CHECK(result.trace.size() == 4);
}

TEST_CASE("invalid instances are rejected before the loop") {
  Instance inst = make_running_example();
  inst.dims[1].declared_delta_min = Rational(2);  // above the computed minimum
  CHECK_THROWS_AS(run(inst), ValidationError);
}

TEST_CASE("identical runs produce identical traces") {
  const Instance inst = make_running_example();
  const SearchResult a = run(inst);
  const SearchResult b = run(inst);
  CHECK(trace_to_string(a, inst) == trace_to_string(b, inst));

  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Instance gen = generate_random_instance(seed);
    CHECK(trace_to_string(run(gen), gen) == trace_to_string(run(gen), gen));
  }
}

TEST_CASE("solutions replay to their recorded state") {
  auto replay_matches = [](const Instance& inst, const SolutionRecord& s) {
    Signature sig = inst.initial_signature();
    CostVector cost = inst.zero_cost();
    for (EdgeId eid : s.path.edges) {
      const StepOutcome out = step(inst, sig, cost, inst.edges[eid]);
      if (!advanced(out)) return false;
      sig = std::get<Advanced>(out).sig;
      cost = std::get<Advanced>(out).cost;
    }
    return sig == s.sig && cost == s.cost && inst.is_target(sig.node);
  };

  const Instance inst = make_running_example();
  for (const SolutionRecord& s : run(inst).solutions) CHECK(replay_matches(inst, s));
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Instance gen = generate_random_instance(seed);
    for (const SolutionRecord& s : run(gen).solutions) CHECK(replay_matches(gen, s));
  }
}

TEST_CASE("solution and coverage counts grow monotonically along the trace") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Instance inst = generate_random_instance(seed);
    const SearchResult result = run(inst);
    for (std::size_t i = 1; i < result.trace.size(); ++i) {
      CHECK(result.trace[i].solutions_count >= result.trace[i - 1].solutions_count);
      CHECK(result.trace[i].covered_bins >= result.trace[i - 1].covered_bins);
      CHECK(result.trace[i].counters.cost_updates >= result.trace[i - 1].counters.cost_updates);
      CHECK(result.trace[i].counters.dominance_comparisons >=
            result.trace[i - 1].counters.dominance_comparisons);
    }
  }
}

TEST_CASE("runtime bound report on the running example") {
  const Instance inst = make_running_example();
  const Quantization q = Quantization::rank(inst);
  const SearchResult result = run(inst);
  const BoundReport report = runtime_bound_check(result, inst, q);
  CHECK(report.steps == 3);
  CHECK(report.max_out_degree == 2);
  CHECK(report.peak_active_signatures == 2);
  CHECK(report.peak_width == 60);
  CHECK(report.dims == 3);
  CHECK(report.measured_ops == 19);
  CHECK(report.within);

  // Byte-stable across repeated runs of the same instance.
  const BoundReport again = runtime_bound_check(run(inst), inst, q);
  CHECK(again.measured_ops == report.measured_ops);
  CHECK(again.constant == report.constant);
  CHECK(again.bound == report.bound);
}
