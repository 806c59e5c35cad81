#pragma once

#include <initializer_list>
#include <vector>

#include "skytrav/frontier.hpp"
#include "skytrav/instance.hpp"

namespace skytrav::test {

// The four-node example network used throughout: nodes s,a,b,t, zones Z1/Z2,
// three criteria (additive complexity, additive progressive length, zone
// switch penalty), grids {0..2} x {0..4} x {0,1}, budget (2,4,1).
inline Instance make_running_example() {
  Instance inst;
  inst.name = "running_example";
  inst.node_names = {"s", "a", "b", "t"};
  inst.attribute_names = {"Z1", "Z2"};
  inst.contexts = ContextModel::make_last_attribute(inst.attribute_names);

  auto int_grid = [](std::int64_t top) {
    CostGrid g;
    for (std::int64_t v = 0; v <= top; ++v) g.levels.push_back(Rational(v));
    g.budget = Rational(top);
    return g;
  };
  inst.dims.push_back({"complexity", int_grid(2), AdditiveRule{}, false, Rational(0)});
  inst.dims.push_back({"length", int_grid(4), AdditiveRule{}, true, Rational(1)});
  inst.dims.push_back({"zone_switch", int_grid(1), AttributeSwitchRule{Rational(1)}, false,
                       Rational(0)});

  auto add_edge = [&](NodeId src, NodeId dst, AttributeId attr, std::int64_t w1, std::int64_t w2) {
    Edge e;
    e.id = static_cast<EdgeId>(inst.edges.size());
    e.src = src;
    e.dst = dst;
    e.attribute = attr;
    e.weights = {Rational(w1), Rational(w2), Rational(0)};
    inst.edges.push_back(std::move(e));
  };
  // s=0 a=1 b=2 t=3; Z1=0 Z2=1
  add_edge(0, 1, 0, 1, 2);  // s->a
  add_edge(1, 3, 0, 1, 2);  // a->t
  add_edge(1, 2, 1, 0, 1);  // a->b
  add_edge(0, 2, 1, 1, 1);  // s->b
  add_edge(2, 3, 1, 0, 1);  // b->t

  inst.source = 0;
  inst.targets = {3};
  inst.finalize();
  return inst;
}

inline CostVector cv(std::initializer_list<std::uint32_t> idx) {
  return CostVector{std::vector<std::uint32_t>(idx)};
}

inline Frontier make_frontier(const Instance& inst) {
  std::vector<std::uint32_t> sizes;
  for (const Dimension& d : inst.dims) sizes.push_back(static_cast<std::uint32_t>(d.grid.size()));
  return Frontier(sizes, static_cast<std::uint32_t>(inst.node_count()),
                  static_cast<std::uint32_t>(inst.contexts.count()));
}

// Signatures of the running example, by name.
inline Signature sig_s_init() { return {0, 0}; }
inline Signature sig_a_z1() { return {1, 1}; }
inline Signature sig_b_z2() { return {2, 2}; }
inline Signature sig_t_z1() { return {3, 1}; }
inline Signature sig_t_z2() { return {3, 2}; }

}  // namespace skytrav::test
