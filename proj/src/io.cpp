#include "skytrav/io.hpp"

#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace skytrav {

namespace {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

void reject_unknown_keys(const Json& obj, const std::string& where,
                         std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed)
      if (item.key() == key) known = true;
    if (!known) fail(where, "unknown key '" + item.key() + "'");
  }
}

const Json& require(const Json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing key '") + key + "'");
  return *it;
}

std::string as_string(const Json& v, const std::string& where) {
  if (!v.is_string()) fail(where, "expected a string");
  return v.get<std::string>();
}

Rational as_rational(const Json& v, const std::string& where) {
  if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
  if (v.is_number_unsigned()) {
    const auto u = v.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(INT64_MAX)) fail(where, "integer out of range");
    return Rational(static_cast<std::int64_t>(u));
  }
  if (v.is_number_float())
    fail(where, "non-integer numbers must be decimal strings for exactness");
  if (v.is_string()) {
    const auto r = Rational::try_parse(v.get<std::string>());
    if (!r) fail(where, "not a decimal or fraction literal: '" + v.get<std::string>() + "'");
    return *r;
  }
  fail(where, "expected a number (integer or decimal string)");
}

struct NameTable {
  std::map<std::string, std::uint32_t> index;
  std::uint32_t resolve(const std::string& name, const std::string& kind,
                        const std::string& where) const {
    const auto it = index.find(name);
    if (it == index.end()) fail(where, "unknown " + kind + " '" + name + "'");
    return it->second;
  }
};

}  // namespace

Instance parse_instance_document(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(e.what());
  }
  if (!doc.is_object()) fail("document", "expected a JSON object");
  reject_unknown_keys(doc, "document",
                      {"name", "nodes", "attributes", "context", "dimensions", "edges", "source",
                       "targets"});

  Instance inst;
  if (doc.contains("name")) inst.name = as_string(doc["name"], "name");

  NameTable nodes, attributes, contexts;
  for (const Json& v : require(doc, "nodes", "document")) {
    const std::string name = as_string(v, "nodes");
    if (!nodes.index.emplace(name, inst.node_names.size()).second)
      fail("nodes", "duplicate node '" + name + "'");
    inst.node_names.push_back(name);
  }
  if (inst.node_names.empty()) fail("nodes", "at least one node is required");

  for (const Json& v : require(doc, "attributes", "document")) {
    const std::string name = as_string(v, "attributes");
    if (!attributes.index.emplace(name, inst.attribute_names.size()).second)
      fail("attributes", "duplicate attribute '" + name + "'");
    inst.attribute_names.push_back(name);
  }
  if (inst.attribute_names.empty()) fail("attributes", "at least one attribute is required");

  const Json& ctx = require(doc, "context", "document");
  const std::string rule_name = as_string(require(ctx, "rule", "context"), "context.rule");
  if (rule_name == "last_attribute") {
    reject_unknown_keys(ctx, "context", {"rule"});
    inst.contexts = ContextModel::make_last_attribute(inst.attribute_names);
  } else if (rule_name == "table") {
    reject_unknown_keys(ctx, "context", {"rule", "contexts", "transitions"});
    inst.contexts.last_attribute = false;
    inst.contexts.names.push_back("initial");
    inst.contexts.attribute_of.push_back(std::nullopt);
    for (const Json& c : require(ctx, "contexts", "context")) {
      const std::string where = "context.contexts";
      reject_unknown_keys(c, where, {"name", "attribute"});
      const std::string name = as_string(require(c, "name", where), where);
      if (name == "initial") fail(where, "'initial' is reserved for the start context");
      inst.contexts.names.push_back(name);
      if (c.contains("attribute"))
        inst.contexts.attribute_of.push_back(
            attributes.resolve(as_string(c["attribute"], where), "attribute", where));
      else
        inst.contexts.attribute_of.push_back(std::nullopt);
    }
    for (std::size_t i = 0; i < inst.contexts.names.size(); ++i)
      if (!contexts.index.emplace(inst.contexts.names[i], static_cast<std::uint32_t>(i)).second)
        fail("context.contexts", "duplicate context '" + inst.contexts.names[i] + "'");
    for (const Json& t : require(ctx, "transitions", "context")) {
      const std::string where = "context.transitions";
      reject_unknown_keys(t, where, {"context", "attribute", "next"});
      const ContextId from =
          contexts.resolve(as_string(require(t, "context", where), where), "context", where);
      const AttributeId attr =
          attributes.resolve(as_string(require(t, "attribute", where), where), "attribute", where);
      const ContextId next =
          contexts.resolve(as_string(require(t, "next", where), where), "context", where);
      if (!inst.contexts.table.emplace(std::make_pair(from, attr), next).second)
        fail(where, "duplicate transition for (" + inst.contexts.names[from] + ", " +
                        inst.attribute_names[attr] + ")");
    }
  } else {
    fail("context.rule", "expected 'last_attribute' or 'table'");
  }
  if (contexts.index.empty())
    for (std::size_t i = 0; i < inst.contexts.names.size(); ++i)
      contexts.index.emplace(inst.contexts.names[i], static_cast<std::uint32_t>(i));

  // Table-rule entries reference edges by position, so resolve them after the
  // edge list is parsed.
  struct PendingTableEntry {
    std::size_t dim;
    ContextId context;
    std::uint64_t edge;
    std::uint32_t from;
    std::uint32_t to;
    std::string where;
  };
  std::vector<PendingTableEntry> pending_entries;

  for (const Json& d : require(doc, "dimensions", "document")) {
    const std::string where = "dimensions[" + std::to_string(inst.dims.size()) + "]";
    reject_unknown_keys(d, where, {"name", "grid", "budget", "rule", "progressive", "delta_min"});
    Dimension dim;
    dim.name = as_string(require(d, "name", where), where + ".name");
    for (const Json& level : require(d, "grid", where))
      dim.grid.levels.push_back(as_rational(level, where + ".grid"));
    dim.grid.budget = as_rational(require(d, "budget", where), where + ".budget");

    const Json& rule = require(d, "rule", where);
    const std::string kind = as_string(require(rule, "kind", where + ".rule"), where + ".rule");
    if (kind == "additive") {
      reject_unknown_keys(rule, where + ".rule", {"kind"});
      dim.rule = AdditiveRule{};
    } else if (kind == "attribute_switch") {
      reject_unknown_keys(rule, where + ".rule", {"kind", "penalty"});
      dim.rule = AttributeSwitchRule{
          as_rational(require(rule, "penalty", where + ".rule"), where + ".rule.penalty")};
    } else if (kind == "table") {
      reject_unknown_keys(rule, where + ".rule", {"kind", "entries"});
      dim.rule = TableRule{};
      for (const Json& e : require(rule, "entries", where + ".rule")) {
        const std::string ewhere = where + ".rule.entries";
        reject_unknown_keys(e, ewhere, {"context", "edge", "from", "to"});
        const ContextId c =
            contexts.resolve(as_string(require(e, "context", ewhere), ewhere), "context", ewhere);
        const Json& edge_ref = require(e, "edge", ewhere);
        if (!edge_ref.is_number_unsigned() && !edge_ref.is_number_integer())
          fail(ewhere, "edge must be an index into the edge list");
        const Rational from = as_rational(require(e, "from", ewhere), ewhere);
        const Rational to = as_rational(require(e, "to", ewhere), ewhere);
        const auto from_idx = dim.grid.index_of(from);
        const auto to_idx = dim.grid.index_of(to);
        if (!from_idx) fail(ewhere, "'from' level " + from.str() + " is not on the grid");
        if (!to_idx) fail(ewhere, "'to' level " + to.str() + " is not on the grid");
        pending_entries.push_back({inst.dims.size(), c, edge_ref.get<std::uint64_t>(), *from_idx,
                                   *to_idx, ewhere});
      }
    } else {
      fail(where + ".rule", "expected kind 'additive', 'attribute_switch' or 'table'");
    }

    if (d.contains("progressive")) {
      if (!d["progressive"].is_boolean()) fail(where + ".progressive", "expected a boolean");
      dim.progressive = d["progressive"].get<bool>();
    }
    if (dim.progressive) {
      dim.declared_delta_min =
          as_rational(require(d, "delta_min", where), where + ".delta_min");
    } else if (d.contains("delta_min")) {
      fail(where, "'delta_min' is only meaningful on a progressive dimension");
    }
    inst.dims.push_back(std::move(dim));
  }
  if (inst.dims.empty()) fail("dimensions", "at least one dimension is required");

  for (const Json& e : require(doc, "edges", "document")) {
    const std::string where = "edges[" + std::to_string(inst.edges.size()) + "]";
    reject_unknown_keys(e, where, {"src", "dst", "attribute", "weights"});
    Edge edge;
    edge.id = static_cast<EdgeId>(inst.edges.size());
    edge.src = nodes.resolve(as_string(require(e, "src", where), where), "node", where);
    edge.dst = nodes.resolve(as_string(require(e, "dst", where), where), "node", where);
    edge.attribute =
        attributes.resolve(as_string(require(e, "attribute", where), where), "attribute", where);
    for (const Json& w : require(e, "weights", where))
      edge.weights.push_back(as_rational(w, where + ".weights"));
    if (edge.weights.size() != inst.dims.size())
      fail(where, "expected " + std::to_string(inst.dims.size()) + " weights, got " +
                      std::to_string(edge.weights.size()));
    inst.edges.push_back(std::move(edge));
  }

  for (const PendingTableEntry& entry : pending_entries) {
    if (entry.edge >= inst.edges.size())
      fail(entry.where, "edge index " + std::to_string(entry.edge) + " out of range");
    std::get<TableRule>(inst.dims[entry.dim].rule)
        .entries[{entry.context, static_cast<EdgeId>(entry.edge), entry.from}] = entry.to;
  }

  inst.source = nodes.resolve(as_string(require(doc, "source", "document"), "source"), "node",
                              "source");
  for (const Json& t : require(doc, "targets", "document"))
    inst.targets.push_back(nodes.resolve(as_string(t, "targets"), "node", "targets"));

  inst.finalize();
  return inst;
}

Instance parse_instance(const std::string& text) {
  Instance inst = parse_instance_document(text);
  ValidationReport report = validate_instance(inst);
  if (!report.valid()) throw ValidationError(std::move(report));
  return inst;
}

Instance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_instance(buffer.str());
}

std::string emit_instance(const Instance& inst) {
  OrderedJson doc;
  if (!inst.name.empty()) doc["name"] = inst.name;
  doc["nodes"] = inst.node_names;
  doc["attributes"] = inst.attribute_names;

  OrderedJson ctx;
  if (inst.contexts.last_attribute) {
    ctx["rule"] = "last_attribute";
  } else {
    ctx["rule"] = "table";
    OrderedJson list = OrderedJson::array();
    for (std::size_t i = 1; i < inst.contexts.names.size(); ++i) {
      OrderedJson c;
      c["name"] = inst.contexts.names[i];
      if (inst.contexts.attribute_of[i])
        c["attribute"] = inst.attribute_names[*inst.contexts.attribute_of[i]];
      list.push_back(std::move(c));
    }
    ctx["contexts"] = std::move(list);
    OrderedJson transitions = OrderedJson::array();
    for (const auto& [key, next] : inst.contexts.table) {
      OrderedJson t;
      t["context"] = inst.contexts.names[key.first];
      t["attribute"] = inst.attribute_names[key.second];
      t["next"] = inst.contexts.names[next];
      transitions.push_back(std::move(t));
    }
    ctx["transitions"] = std::move(transitions);
  }
  doc["context"] = std::move(ctx);

  OrderedJson dims = OrderedJson::array();
  for (const Dimension& d : inst.dims) {
    OrderedJson dim;
    dim["name"] = d.name;
    OrderedJson grid = OrderedJson::array();
    for (const Rational& level : d.grid.levels) grid.push_back(level.str());
    dim["grid"] = std::move(grid);
    dim["budget"] = d.grid.budget.str();
    OrderedJson rule;
    if (std::holds_alternative<AdditiveRule>(d.rule)) {
      rule["kind"] = "additive";
    } else if (const auto* sw = std::get_if<AttributeSwitchRule>(&d.rule)) {
      rule["kind"] = "attribute_switch";
      rule["penalty"] = sw->penalty.str();
    } else {
      const auto& table = std::get<TableRule>(d.rule);
      rule["kind"] = "table";
      OrderedJson entries = OrderedJson::array();
      for (const auto& [key, to] : table.entries) {
        OrderedJson entry;
        entry["context"] = inst.contexts.names[std::get<0>(key)];
        entry["edge"] = std::get<1>(key);
        entry["from"] = d.grid.level(std::get<2>(key)).str();
        entry["to"] = d.grid.level(to).str();
        entries.push_back(std::move(entry));
      }
      rule["entries"] = std::move(entries);
    }
    dim["rule"] = std::move(rule);
    if (d.progressive) {
      dim["progressive"] = true;
      dim["delta_min"] = d.declared_delta_min.str();
    }
    dims.push_back(std::move(dim));
  }
  doc["dimensions"] = std::move(dims);

  OrderedJson edges = OrderedJson::array();
  for (const Edge& e : inst.edges) {
    OrderedJson edge;
    edge["src"] = inst.node_names[e.src];
    edge["dst"] = inst.node_names[e.dst];
    edge["attribute"] = inst.attribute_names[e.attribute];
    OrderedJson weights = OrderedJson::array();
    for (const Rational& w : e.weights) weights.push_back(w.str());
    edge["weights"] = std::move(weights);
    edges.push_back(std::move(edge));
  }
  doc["edges"] = std::move(edges);
  doc["source"] = inst.node_names[inst.source];
  OrderedJson targets = OrderedJson::array();
  for (NodeId t : inst.targets) targets.push_back(inst.node_names[t]);
  doc["targets"] = std::move(targets);

  return doc.dump(2) + "\n";
}

namespace {

bool trace_has_floor(const SearchResult& result) {
  for (const TraceEvent& e : result.trace)
    if (e.h_star) return true;
  return false;
}

std::string floor_str(const std::optional<std::int64_t>& h) {
  if (!h) return "inf";
  return *h < 0 ? "inf" : std::to_string(*h);
}

}  // namespace

void emit_trace(const SearchResult& result, const Instance& instance, std::ostream& out,
                TraceFormat format) {
  const std::size_t d = instance.dim_count();
  const bool with_floor = trace_has_floor(result);

  if (format == TraceFormat::Csv) {
    out << "step,sig_node,sig_context";
    for (std::size_t i = 1; i <= d; ++i) out << ",cost_" << i;
    for (std::size_t i = 1; i <= d; ++i) out << ",bin_" << i;
    out << ",skyline_size,frontier_size,covered_bins,solutions,certificate,cost_updates,"
           "dominance_comparisons";
    if (with_floor) out << ",h_star";
    out << "\n";
    for (const TraceEvent& e : result.trace) {
      out << e.step << "," << instance.node_names[e.extracted_sig.node] << ","
          << instance.contexts.names[e.extracted_sig.context];
      for (std::size_t i = 0; i < d; ++i)
        out << "," << instance.dims[i].grid.level(e.extracted_cost.idx[i]).str();
      for (std::size_t i = 0; i < d; ++i) out << "," << e.extracted_bin.bins[i];
      out << "," << e.skyline_size_before << "," << e.frontier_size_after << ","
          << e.covered_bins << "," << e.solutions_count << ","
          << (e.certificate_held ? "true" : "false") << "," << e.counters.cost_updates << ","
          << e.counters.dominance_comparisons;
      if (with_floor) out << "," << floor_str(e.h_star);
      out << "\n";
    }
    return;
  }

  OrderedJson doc;
  doc["termination"] = termination_str(result.termination);
  OrderedJson trace = OrderedJson::array();
  for (const TraceEvent& e : result.trace) {
    OrderedJson row;
    row["step"] = e.step;
    row["sig_node"] = instance.node_names[e.extracted_sig.node];
    row["sig_context"] = instance.contexts.names[e.extracted_sig.context];
    OrderedJson cost = OrderedJson::array();
    for (std::size_t i = 0; i < d; ++i)
      cost.push_back(instance.dims[i].grid.level(e.extracted_cost.idx[i]).str());
    row["cost"] = std::move(cost);
    row["bin"] = e.extracted_bin.bins;
    row["skyline_size"] = e.skyline_size_before;
    row["frontier_size"] = e.frontier_size_after;
    row["covered_bins"] = e.covered_bins;
    row["solutions"] = e.solutions_count;
    row["certificate"] = e.certificate_held;
    row["cost_updates"] = e.counters.cost_updates;
    row["dominance_comparisons"] = e.counters.dominance_comparisons;
    if (with_floor) row["h_star"] = floor_str(e.h_star);
    trace.push_back(std::move(row));
  }
  doc["trace"] = std::move(trace);
  out << doc.dump(2) << "\n";
}

std::string trace_to_string(const SearchResult& result, const Instance& instance,
                            TraceFormat format) {
  std::ostringstream os;
  emit_trace(result, instance, os, format);
  return os.str();
}

}  // namespace skytrav
