// cpa-map: MAP inference for Markov logic networks.
//
// Exit codes: 0 success, 1 unsatisfiable hard clauses, 2 usage, input or
// parse errors, 3 solver failure (node limit without a feasible solution).

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "cpamap/engine.hpp"
#include "cpamap/report.hpp"

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw InputError("cannot write " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MAP inference for Markov logic networks with cutting plane aggregation"};
  app.set_version_flag("--version", "cpa-map 1.0");

  std::string mln_path, evidence_path, out_path, lp_path;
  bool no_cpa = false, export_only = false, stats = false, merge_groups = false;
  double gap = 0.0;
  std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
  std::size_t max_iterations = 0;
  std::uint64_t seed = 0;

  app.add_option("-i,--input", mln_path, "MLN file")->required();
  app.add_option("-e,--evidence", evidence_path, "Evidence file");
  app.add_option("-o,--output", out_path, "MAP state output (default: stdout)");
  app.add_flag("--no-cpa", no_cpa, "Translate every grounding on its own");
  app.add_option("--gap", gap, "Relative optimality gap in [0, 1)")->capture_default_str();
  app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--max-iterations", max_iterations, "Iteration limit (0: none)");
  app.add_option("--seed", seed, "Random seed")->capture_default_str();
  auto* lp = app.add_option("--export-lp", lp_path, "Write the final ILP in LP format");
  app.add_flag("--export-only", export_only, "Write the first ILP and stop before solving")
      ->needs(lp);
  app.add_flag("--merge-groups", merge_groups, "Extend groups across iterations");
  app.add_flag("--stats", stats, "Print run statistics to stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    const cpamap::MlnModel model = cpamap::parse_mln(read_file(mln_path));
    cpamap::EvidenceSet evidence(model);
    if (!evidence_path.empty()) {
      try {
        evidence = cpamap::parse_evidence(read_file(evidence_path), model);
      } catch (const cpamap::ParseError& e) {
        std::cerr << "cpa-map: " << evidence_path << ": " << e.what() << '\n';
        return 2;
      }
    }
    const double parse_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    cpamap::EngineConfig config;
    config.use_cpa = !no_cpa;
    config.gap = gap;
    config.max_iterations = max_iterations;
    config.workers = threads;
    config.random_seed = seed;
    config.merge_groups_across_iterations = merge_groups;

    if (export_only) {
      config.solver_backend = cpamap::EngineConfig::Backend::kExportOnly;
      cpamap::CpiEngine engine(model, evidence, config);
      engine.run_iteration();
      write_file(lp_path, cpamap::export_lp(engine.ilp()));
      return 0;
    }

    cpamap::MapResult result = cpamap::solve_map(model, evidence, config);
    if (!lp_path.empty()) write_file(lp_path, cpamap::export_lp(result.ilp));

    const std::string state = cpamap::format_map_state(model, result.interpretation);
    if (out_path.empty())
      std::cout << state;
    else
      write_file(out_path, state);

    if (!result.converged) std::cerr << "cpa-map: iteration limit reached before a fixpoint\n";
    if (stats) {
      cpamap::RunReport report = cpamap::make_report(result);
      report.time_parse = parse_seconds;
      report.time_total =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      std::cerr << cpamap::format_stats(report);
    }
    return 0;
  } catch (const cpamap::ParseError& e) {
    std::cerr << "cpa-map: " << mln_path << ": " << e.what() << '\n';
    return 2;
  } catch (const InputError& e) {
    std::cerr << "cpa-map: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "cpa-map: " << e.what() << '\n';
    return 2;
  } catch (const cpamap::UnsatisfiableError& e) {
    std::cerr << "cpa-map: unsatisfiable: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "cpa-map: " << e.what() << '\n';
    return 3;
  }
}
