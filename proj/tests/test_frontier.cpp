#include <doctest.h>

#include <random>
#include <set>

#include "skytrav/frontier.hpp"
#include "test_helpers.hpp"

using namespace skytrav;
using namespace skytrav::test;

namespace {

// Independent quadratic non-dominated filter used as the skyline oracle.
std::set<CostVector> naive_skyline(const std::set<CostVector>& costs) {
  std::set<CostVector> out;
  for (const CostVector& c : costs) {
    bool dominated = false;
    for (const CostVector& other : costs)
      if (!(other == c) && strictly_dominates(other, c)) dominated = true;
    if (!dominated) out.insert(c);
  }
  return out;
}

std::map<Signature, std::set<CostVector>> costs_by_signature(const Frontier& f) {
  std::map<Signature, std::set<CostVector>> out;
  for (const auto& [key, entry] : f.entries()) out[entry.sig].insert(entry.cost);
  return out;
}

}  // namespace

TEST_CASE("dominance relations") {
  CHECK(dominance(cv({1, 2, 0}), cv({1, 4, 1})) == DominanceRelation::StrictlyDominates);
  CHECK(dominance(cv({1, 2, 0}), cv({1, 2, 0})) == DominanceRelation::WeaklyDominatesEqual);
  CHECK(dominance(cv({2, 4, 0}), cv({1, 2, 0})) == DominanceRelation::DominatedBy);
  CHECK(dominance(cv({0, 5}), cv({1, 4})) == DominanceRelation::Incomparable);
  CHECK_THROWS(dominance(cv({1}), cv({1, 2})));
}

TEST_CASE("dominance is a partial order on random vectors") {
  std::mt19937_64 rng(11);
  auto rand_cv = [&]() { return cv({static_cast<std::uint32_t>(rng() % 4),
                                    static_cast<std::uint32_t>(rng() % 4),
                                    static_cast<std::uint32_t>(rng() % 4)}); };
  for (int i = 0; i < 300; ++i) {
    const CostVector a = rand_cv(), b = rand_cv(), c = rand_cv();
    // Antisymmetry of the strict relation.
    CHECK((dominance(a, b) == DominanceRelation::StrictlyDominates) ==
          (dominance(b, a) == DominanceRelation::DominatedBy));
    // Reflexivity of the weak relation.
    CHECK(dominance(a, a) == DominanceRelation::WeaklyDominatesEqual);
    // Transitivity of "weakly dominates".
    auto weak = [](const CostVector& x, const CostVector& y) {
      const auto r = dominance(x, y);
      return r == DominanceRelation::StrictlyDominates ||
             r == DominanceRelation::WeaklyDominatesEqual;
    };
    if (weak(a, b) && weak(b, c)) CHECK(weak(a, c));
  }
}

TEST_CASE("insert keeps the dominating member in the skyline") {
  const Instance inst = make_running_example();
  Frontier f = make_frontier(inst);
  REQUIRE(f.insert({sig_b_z2(), cv({1, 1, 0}), {}}) == InsertResult::Inserted);
  REQUIRE(f.insert({sig_b_z2(), cv({1, 3, 1}), {}}) == InsertResult::Inserted);
  CHECK(f.size() == 2);
  CHECK(f.signature_skyline(sig_b_z2()) == std::set<CostVector>{cv({1, 1, 0})});
}

TEST_CASE("duplicate insert keeps the incumbent") {
  const Instance inst = make_running_example();
  Frontier f = make_frontier(inst);
  f.insert({sig_b_z2(), cv({1, 1, 0}), PathRecord{{3}}});
  CHECK(f.insert({sig_b_z2(), cv({1, 1, 0}), PathRecord{{0, 2}}}) == InsertResult::Duplicate);
  CHECK(f.size() == 1);
  CHECK(f.find(sig_b_z2(), cv({1, 1, 0}))->rep.edges == std::vector<EdgeId>{3});
}

TEST_CASE("incomparable entries share the skyline") {
  Frontier f({6, 6}, 1, 1);
  f.insert({{0, 0}, cv({1, 4}), {}});
  f.insert({{0, 0}, cv({0, 5}), {}});
  CHECK(f.signature_skyline({0, 0}) == std::set<CostVector>{cv({0, 5}), cv({1, 4})});
}

TEST_CASE("out-of-range entries are rejected") {
  const Instance inst = make_running_example();
  Frontier f = make_frontier(inst);
  CHECK_THROWS_AS(f.insert({sig_b_z2(), cv({0, 9, 0}), {}}), std::invalid_argument);
  CHECK_THROWS_AS(f.insert({{9, 0}, cv({0, 0, 0}), {}}), std::invalid_argument);
}

TEST_CASE("skyline of the terminal running-example paths") {
  const Instance inst = make_running_example();
  Frontier f = make_frontier(inst);
  f.insert({sig_t_z1(), cv({2, 4, 0}), {}});  // p1
  f.insert({sig_t_z2(), cv({1, 2, 0}), {}});  // p2
  f.insert({sig_t_z2(), cv({1, 4, 1}), {}});  // p3, dominated by p2
  const auto sky = f.skyline();
  REQUIRE(sky.size() == 2);
  CHECK(sky[0]->sig == sig_t_z1());
  CHECK(sky[0]->cost == cv({2, 4, 0}));
  CHECK(sky[1]->sig == sig_t_z2());
  CHECK(sky[1]->cost == cv({1, 2, 0}));

  // p3 sinks to the second layer but stays in the frontier.
  const auto layers = f.pareto_layers();
  REQUIRE(layers.size() == 2);
  CHECK(layers[0].size() == 2);
  REQUIRE(layers[1].size() == 1);
  CHECK(layers[1][0]->cost == cv({1, 4, 1}));
}

TEST_CASE("skyline is empty only on an empty frontier") {
  const Instance inst = make_running_example();
  Frontier f = make_frontier(inst);
  CHECK(f.skyline().empty());
  f.insert({sig_a_z1(), cv({1, 2, 0}), {}});
  CHECK(f.skyline().size() == 1);
}

TEST_CASE("evicted entries resurface after an extraction") {
  const Instance inst = make_running_example();
  Frontier f = make_frontier(inst);
  f.insert({sig_b_z2(), cv({1, 1, 0}), {}});
  f.insert({sig_b_z2(), cv({1, 3, 1}), {}});
  f.erase(sig_b_z2(), cv({1, 1, 0}));
  CHECK(f.signature_skyline(sig_b_z2()) == std::set<CostVector>{cv({1, 3, 1})});
}

TEST_CASE("pareto layer shapes") {
  const Instance inst = make_running_example();

  // A dominated pair peels into two singleton layers.
  Frontier chain = make_frontier(inst);
  chain.insert({sig_t_z2(), cv({1, 2, 0}), {}});
  chain.insert({sig_t_z2(), cv({1, 4, 1}), {}});
  auto layers = chain.pareto_layers();
  REQUIRE(layers.size() == 2);
  CHECK(layers[0][0]->cost == cv({1, 2, 0}));
  CHECK(layers[1][0]->cost == cv({1, 4, 1}));

  // Mutually incomparable entries form a single layer.
  Frontier flat({9, 9}, 1, 1);
  for (std::uint32_t i = 0; i < 5; ++i) flat.insert({{0, 0}, cv({i, 8 - i}), {}});
  CHECK(flat.pareto_layers().size() == 1);

  // A totally ordered chain peels one layer per element.
  Frontier total({9, 9}, 1, 1);
  for (std::uint32_t i = 0; i < 3; ++i) total.insert({{0, 0}, cv({i, i}), {}});
  CHECK(total.pareto_layers().size() == 3);
}

TEST_CASE("incremental skylines match the from-scratch oracle under random churn") {
  std::mt19937_64 rng(23);
  const Instance inst = make_running_example();
  const Quantization q = Quantization::rank(inst);

  for (int round = 0; round < 30; ++round) {
    Frontier f = make_frontier(inst);
    std::vector<std::pair<Signature, CostVector>> alive;
    for (int op = 0; op < 120; ++op) {
      const bool do_erase = !alive.empty() && rng() % 3 == 0;
      if (do_erase) {
        const std::size_t pick = rng() % alive.size();
        f.erase(alive[pick].first, alive[pick].second);
        alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(pick));
      } else {
        const Signature sig{static_cast<NodeId>(rng() % 4),
                            static_cast<ContextId>(rng() % 3)};
        const CostVector cost = cv({static_cast<std::uint32_t>(rng() % 3),
                                    static_cast<std::uint32_t>(rng() % 5),
                                    static_cast<std::uint32_t>(rng() % 2)});
        if (f.insert({sig, cost, {}}) == InsertResult::Inserted) alive.push_back({sig, cost});
      }

      // Incremental per-signature skylines match the naive filter.
      const auto by_sig = costs_by_signature(f);
      for (const auto& [sig, costs] : by_sig)
        CHECK(f.signature_skyline(sig) == naive_skyline(costs));

      // Layers are a disjoint decomposition with no empty layer, and the
      // geometry report is clean.
      const auto layers = f.pareto_layers();
      std::size_t total = 0;
      for (const auto& layer : layers) {
        CHECK(!layer.empty());
        total += layer.size();
      }
      CHECK(total == f.size());
      CHECK(layer_width_check(f, q).ok());
    }
  }
}

TEST_CASE("layer width report on the terminal frontier") {
  const Instance inst = make_running_example();
  const Quantization q = Quantization::rank(inst);
  Frontier f = make_frontier(inst);
  f.insert({sig_t_z1(), cv({2, 4, 0}), {}});
  f.insert({sig_t_z2(), cv({1, 2, 0}), {}});
  f.insert({sig_t_z2(), cv({1, 4, 1}), {}});
  const WidthReport report = layer_width_check(f, q);
  CHECK(report.ok());
  CHECK(report.bin_count == 30);
  CHECK(report.max_signature_layer_width <= 30);

  // Vacuous on an empty frontier.
  Frontier empty = make_frontier(inst);
  CHECK(layer_width_check(empty, q).ok());
}
