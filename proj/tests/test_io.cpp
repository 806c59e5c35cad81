#include <doctest.h>

#include <fstream>
#include <sstream>

#include "skytrav/io.hpp"
#include "skytrav/oracle.hpp"
#include "test_helpers.hpp"

using namespace skytrav;
using namespace skytrav::test;

namespace {

std::string fixture_path() {
  return std::string(SKYTRAV_SOURCE_DIR) + "/fixtures/running_example.json";
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST_CASE("the bundled fixture parses to the worked instance") {
  const Instance inst = load_instance_file(fixture_path());
  CHECK(inst.name == "running_example");
  REQUIRE(inst.node_count() == 4);
  REQUIRE(inst.edges.size() == 5);
  REQUIRE(inst.dim_count() == 3);
  CHECK(inst.dims[0].grid.size() == 3);
  CHECK(inst.dims[1].grid.size() == 5);
  CHECK(inst.dims[2].grid.size() == 2);
  CHECK(inst.dims[0].grid.budget == Rational(2));
  CHECK(inst.dims[1].grid.budget == Rational(4));
  CHECK(inst.dims[2].grid.budget == Rational(1));
  CHECK(inst.dims[1].progressive);
  CHECK(inst.dims[1].declared_delta_min == Rational(1));
  CHECK(std::holds_alternative<AttributeSwitchRule>(inst.dims[2].rule));
  CHECK(inst.node_names[inst.source] == "s");
  REQUIRE(inst.targets.size() == 1);
  CHECK(inst.node_names[inst.targets[0]] == "t");

  // Field-for-field equal to the programmatic fixture.
  CHECK(emit_instance(inst) == emit_instance(make_running_example()));
}

TEST_CASE("emit and parse round trip") {
  const Instance inst = make_running_example();
  const std::string once = emit_instance(inst);
  const Instance reparsed = parse_instance(once);
  CHECK(emit_instance(reparsed) == once);

  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Instance gen = generate_random_instance(seed);
    const std::string text = emit_instance(gen);
    CHECK(emit_instance(parse_instance(text)) == text);
  }
}

TEST_CASE("table rules survive the round trip") {
  Instance inst = make_running_example();
  TableRule table;
  table.entries[{1, 2, 0}] = 1;  // zone switch encoded explicitly
  table.entries[{2, 0, 0}] = 1;
  inst.dims[2].rule = table;
  const std::string text = emit_instance(inst);
  const Instance reparsed = parse_instance_document(text);
  const auto& rule = std::get<TableRule>(reparsed.dims[2].rule);
  CHECK(rule.entries == table.entries);
}

TEST_CASE("missing keys are named") {
  try {
    parse_instance_document(R"({"nodes":["s"],"attributes":["A"],
      "context":{"rule":"last_attribute"},
      "dimensions":[{"name":"c1","grid":["0","1"],"rule":{"kind":"additive"}}],
      "edges":[],"source":"s","targets":["s"]})");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("budget") != std::string::npos);
  }
}

TEST_CASE("a grid without zero fails validation at parse time") {
  const std::string text = R"({"nodes":["s","t"],"attributes":["A"],
    "context":{"rule":"last_attribute"},
    "dimensions":[{"name":"c1","grid":["1","2"],"budget":"2","rule":{"kind":"additive"},
                   "progressive":true,"delta_min":"1"}],
    "edges":[{"src":"s","dst":"t","attribute":"A","weights":["1"]}],
    "source":"s","targets":["t"]})";
  CHECK_THROWS_AS(parse_instance(text), ValidationError);
  // The structural parse alone accepts it.
  CHECK(parse_instance_document(text).dims[0].grid.levels.front() == Rational(1));
}

TEST_CASE("unknown keys and inexact numbers are rejected") {
  CHECK_THROWS_AS(parse_instance_document(R"({"nodes":["s"],"mystery":1})"), ParseError);
  try {
    parse_instance_document(R"({"nodes":["s"],"attributes":["A"],
      "context":{"rule":"last_attribute"},
      "dimensions":[{"name":"c1","grid":[0,0.5],"budget":0.5,"rule":{"kind":"additive"},
                     "progressive":true,"delta_min":"0.5"}],
      "edges":[],"source":"s","targets":["s"]})");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("decimal strings") != std::string::npos);
  }
}

TEST_CASE("trace CSV matches the frozen fixture run") {
  const Instance inst = load_instance_file(fixture_path());
  const SearchResult result = run(inst);
  const std::string expected =
      "step,sig_node,sig_context,cost_1,cost_2,cost_3,bin_1,bin_2,bin_3,"
      "skyline_size,frontier_size,covered_bins,solutions,certificate,cost_updates,"
      "dominance_comparisons\n"
      "1,s,initial,0,0,0,0,0,0,1,2,1,0,false,6,0\n"
      "2,a,Z1,1,2,0,1,2,0,2,2,2,1,false,12,2\n"
      "3,b,Z2,1,1,0,1,1,0,1,1,3,2,true,15,4\n";
  CHECK(trace_to_string(result, inst) == expected);
}

TEST_CASE("an empty trace emits only the header") {
  const Instance inst = make_running_example();
  SearchResult empty{{}, {}, Termination::FrontierExhausted, make_frontier(inst)};
  const std::string text = trace_to_string(empty, inst);
  CHECK(text ==
        "step,sig_node,sig_context,cost_1,cost_2,cost_3,bin_1,bin_2,bin_3,"
        "skyline_size,frontier_size,covered_bins,solutions,certificate,cost_updates,"
        "dominance_comparisons\n");
}

TEST_CASE("floor annotation adds the h_star column") {
  const Instance inst = make_running_example();
  SearchResult result = run(inst);
  const DescentReport descent = verify_descent(inst, result);
  annotate_trace_with_floor(result, descent);
  const std::string text = trace_to_string(result, inst);
  std::istringstream lines(text);
  std::string line;
  std::getline(lines, line);
  CHECK(line.find(",h_star") != std::string::npos);
  std::vector<std::string> tails;
  while (std::getline(lines, line)) tails.push_back(line.substr(line.rfind(',') + 1));
  CHECK(tails == std::vector<std::string>{"2", "1", "0"});
}

TEST_CASE("structured trace is valid JSON with the same fields") {
  const Instance inst = make_running_example();
  const SearchResult result = run(inst);
  const std::string text = trace_to_string(result, inst, TraceFormat::Structured);
  CHECK(text.find("\"termination\": \"certificate-held\"") != std::string::npos);
  CHECK(text.find("\"sig_node\": \"s\"") != std::string::npos);
  CHECK(text.find("\"dominance_comparisons\"") != std::string::npos);
}
