#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "skytrav/engine.hpp"
#include "skytrav/io.hpp"
#include "skytrav/oracle.hpp"

namespace {

using namespace skytrav;

std::string path_str(const Instance& inst, const PathRecord& path) {
  std::string out = inst.node_names[inst.source];
  NodeId node = inst.source;
  for (EdgeId eid : path.edges) {
    node = inst.edges[eid].dst;
    out += "->" + inst.node_names[node];
  }
  return out;
}

void print_solutions(const Instance& inst, const SearchResult& result) {
  std::cout << "termination: " << termination_str(result.termination) << "\n";
  std::cout << "solutions: " << result.solutions.size() << "\n";
  std::size_t i = 0;
  for (const SolutionRecord& s : result.solutions) {
    std::cout << "  " << ++i << ": sig=" << inst.signature_str(s.sig)
              << " cost=" << inst.cost_str(s.cost) << " step=" << s.discovered_at_step
              << " path=" << path_str(inst, s.path) << "\n";
  }
}

int cmd_run(const std::string& file, const std::string& trace_file, std::uint64_t cert_period,
            std::int64_t step_limit) {
  const Instance inst = load_instance_file(file);
  RunConfig config;
  config.certificate_period = cert_period;
  if (step_limit >= 0) config.step_limit = static_cast<std::uint64_t>(step_limit);
  const SearchResult result = run(inst, config);

  std::cout << "instance: " << (inst.name.empty() ? file : inst.name) << "\n";
  print_solutions(inst, result);

  if (!trace_file.empty()) {
    std::ofstream out(trace_file, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write '" << trace_file << "'\n";
      return 1;
    }
    emit_trace(result, inst, out, TraceFormat::Csv);
    out.flush();
    if (!out) {
      std::cerr << "error: failed while writing '" << trace_file << "'\n";
      return 1;
    }
  }
  return result.solutions.empty() ? 2 : 0;
}

int cmd_layers(const std::string& file) {
  const Instance inst = load_instance_file(file);
  const OracleEnumeration oracle = enumerate_feasible(inst);

  std::cout << "instance: " << (inst.name.empty() ? file : inst.name) << "\n";
  std::cout << "feasible paths: " << oracle.feasible_paths.size() << "\n";

  std::vector<const FeasiblePath*> ordered;
  for (const FeasiblePath& fp : oracle.feasible_paths) ordered.push_back(&fp);
  std::sort(ordered.begin(), ordered.end(), [](const FeasiblePath* x, const FeasiblePath* y) {
    return std::tie(x->sig, x->cost, x->path) < std::tie(y->sig, y->cost, y->path);
  });
  for (const FeasiblePath* fp : ordered)
    std::cout << "  sig=" << inst.signature_str(fp->sig) << " cost=" << inst.cost_str(fp->cost)
              << " path=" << path_str(inst, fp->path) << "\n";

  // Layer decomposition of the complete-path set, one representative per
  // (signature, cost).
  std::vector<std::uint32_t> grid_sizes;
  for (const Dimension& d : inst.dims)
    grid_sizes.push_back(static_cast<std::uint32_t>(d.grid.size()));
  Frontier complete(grid_sizes, static_cast<std::uint32_t>(inst.node_count()),
                    static_cast<std::uint32_t>(inst.contexts.count()));
  for (const FeasiblePath& fp : oracle.feasible_paths)
    complete.insert(FrontierEntry{fp.sig, fp.cost, fp.path});

  const auto layers = complete.pareto_layers();
  for (std::size_t k = 0; k < layers.size(); ++k) {
    std::cout << "layer " << k + 1 << ":";
    bool first = true;
    for (const FrontierEntry* entry : layers[k]) {
      std::cout << (first ? " " : "; ") << "sig=" << inst.signature_str(entry->sig)
                << " cost=" << inst.cost_str(entry->cost);
      first = false;
    }
    std::cout << "\n";
  }
  return 0;
}

struct CheckOutcome {
  bool ok = true;
  void note(const std::string& name, bool pass, const std::string& detail) {
    std::cout << name << ": " << (pass ? "ok" : "FAIL") << (detail.empty() ? "" : " (" + detail + ")")
              << "\n";
    ok = ok && pass;
  }
};

bool verify_one(const Instance& inst, const std::string& label) {
  CheckOutcome outcome;
  std::cout << "== " << label << "\n";

  const ValidationReport report = validate_instance(inst);
  outcome.note("validate", report.valid(),
               std::to_string(report.issues.size() - report.error_count()) + " warnings");
  if (!report.valid()) {
    std::cout << report.summary();
    return false;
  }

  const SearchResult result = run(inst, {});
  std::ostringstream run_detail;
  run_detail << termination_str(result.termination) << ", " << result.solutions.size()
             << " solutions, " << result.trace.size() << " steps";
  outcome.note("run", true, run_detail.str());

  const OracleEnumeration oracle = enumerate_feasible(inst);
  const CoverageVerifyReport coverage = verify_dominance_coverage(result, oracle, inst);
  outcome.note("dominance coverage", coverage.ok(),
               coverage.applicable
                   ? std::to_string(coverage.paths_checked) + " paths checked"
                   : std::string("not applicable: ") + termination_str(result.termination));

  const DescentReport descent = verify_descent(inst, result);
  outcome.note("descent", descent.ok,
               std::to_string(descent.phases.size()) + " phases, " +
                   std::to_string(descent.total_descents) + " descents, bound " +
                   std::to_string(descent.lambda));
  for (const std::string& v : descent.violations) std::cout << "  " << v << "\n";

  const GeometryReport geometry = verify_layer_geometry(inst);
  outcome.note("layer geometry", geometry.ok,
               std::to_string(geometry.snapshots) + " snapshots");
  for (const std::string& v : geometry.violations) std::cout << "  " << v << "\n";

  const ResidualBudgetReport residual = verify_residual_budget(inst);
  outcome.note("residual budget", residual.ok,
               std::to_string(residual.pairs_checked) + " pairs");

  const Quantization q = Quantization::rank(inst);
  const BoundReport bound = runtime_bound_check(result, inst, q);
  std::ostringstream bound_detail;
  bound_detail << bound.measured_ops << " ops <= " << bound.constant << "*" << bound.steps << "*"
               << bound.max_out_degree << "*" << bound.peak_width << "*" << bound.dims;
  outcome.note("runtime bound", bound.within, bound_detail.str());

  const SearchResult rerun = run(inst, {});
  const bool deterministic =
      trace_to_string(result, inst) == trace_to_string(rerun, inst);
  outcome.note("determinism", deterministic, "");

  return outcome.ok;
}

int cmd_verify(const std::string& file, const std::string& seeds) {
  bool all_ok = true;
  const Instance inst = load_instance_file(file);
  all_ok = verify_one(inst, inst.name.empty() ? file : inst.name) && all_ok;

  if (!seeds.empty()) {
    const auto sep = seeds.find("..");
    if (sep == std::string::npos) {
      std::cerr << "error: --seeds expects a range like 1..100\n";
      return 1;
    }
    const std::uint64_t first = std::stoull(seeds.substr(0, sep));
    const std::uint64_t last = std::stoull(seeds.substr(sep + 2));
    for (std::uint64_t seed = first; seed <= last; ++seed) {
      const Instance gen = generate_random_instance(seed);
      all_ok = verify_one(gen, "seed " + std::to_string(seed)) && all_ok;
    }
  }

  std::cout << (all_ok ? "verify: PASS" : "verify: FAIL") << "\n";
  return all_ok ? 0 : 1;
}

int cmd_gen(std::uint64_t seed, const GenParams& params, const std::string& out_file) {
  const Instance inst = generate_random_instance(seed, params);
  std::ofstream out(out_file, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write '" << out_file << "'\n";
    return 1;
  }
  out << emit_instance(inst);
  std::cout << "wrote " << out_file << " (" << inst.node_count() << " nodes, "
            << inst.edges.size() << " edges, " << inst.dim_count() << " dims)\n";
  return 0;
}

int cmd_validate(const std::string& file) {
  std::ifstream in(file);
  if (!in) {
    std::cerr << "error: cannot open '" << file << "'\n";
    return 1;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const Instance inst = parse_instance_document(buffer.str());
  const ValidationReport report = validate_instance(inst);
  std::cout << report.summary();
  if (report.valid())
    std::cout << "valid (" << report.issues.size() << " warnings)\n";
  else
    std::cout << "invalid (" << report.error_count() << " errors)\n";
  return report.valid() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"skytrav - multi-criteria graph traversal driven by Pareto skyline geometry"};
  app.require_subcommand(1);

  std::string instance_file, trace_file, out_file, seeds;
  std::uint64_t cert_period = 1, seed = 0;
  std::int64_t step_limit = -1;
  GenParams params;

  auto* run_cmd = app.add_subcommand("run", "Run the search and print the solution set");
  run_cmd->add_option("instance", instance_file, "Instance file")->required();
  run_cmd->add_option("--trace", trace_file, "Write the trace CSV to this file");
  run_cmd->add_option("--cert-period", cert_period, "Check the certificate every N extractions");
  run_cmd->add_option("--step-limit", step_limit, "Stop after N extractions");

  auto* layers_cmd =
      app.add_subcommand("layers", "Enumerate feasible paths and print their Pareto layers");
  layers_cmd->add_option("instance", instance_file, "Instance file")->required();

  auto* verify_cmd = app.add_subcommand("verify", "Run the engine plus every oracle check");
  verify_cmd->add_option("instance", instance_file, "Instance file")->required();
  verify_cmd->add_option("--seeds", seeds, "Also verify generated instances, e.g. 1..100");

  auto* gen_cmd = app.add_subcommand("gen", "Generate a random instance");
  gen_cmd->add_option("--seed", seed, "Generator seed")->required();
  gen_cmd->add_option("--nodes", params.nodes, "Node count (2..12)");
  gen_cmd->add_option("--dims", params.dims, "Cost dimensions (1..4)");
  gen_cmd->add_option("--grid-levels", params.grid_levels, "Grid levels per dimension (2..8)");
  gen_cmd->add_option("--attributes", params.attributes, "Attribute count (1..3)");
  gen_cmd->add_option("-o,--out", out_file, "Output file")->required();

  auto* validate_cmd = app.add_subcommand("validate", "Print the validation report");
  validate_cmd->add_option("instance", instance_file, "Instance file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return cmd_run(instance_file, trace_file, cert_period, step_limit);
    if (layers_cmd->parsed()) return cmd_layers(instance_file);
    if (verify_cmd->parsed()) return cmd_verify(instance_file, seeds);
    if (gen_cmd->parsed()) return cmd_gen(seed, params, out_file);
    if (validate_cmd->parsed()) return cmd_validate(instance_file);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
