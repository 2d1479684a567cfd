#include <doctest.h>

#include <random>
#include <sstream>

#include "cpamap/engine.hpp"
#include "cpamap/report.hpp"
#include "oracles.hpp"

using namespace cpamap;

namespace {

const char* kSmokers =
    "person={A,B}\n"
    "smokes(person)\n"
    "cancer(person)\n"
    "1.5 !smokes(x) v cancer(x)\n";

std::string symmetric_model(int constants) {
  std::ostringstream out;
  out << "person={";
  for (int i = 0; i < constants; ++i) out << (i ? "," : "") << "C" << i;
  out << "}\nsmokes(person)\ncancer(person)\n1.5 !smokes(x) v cancer(x)\n";
  return out.str();
}

std::string all_smoke(int constants) {
  std::ostringstream out;
  for (int i = 0; i < constants; ++i) out << "smokes(C" << i << ")\n";
  return out.str();
}

}  // namespace

TEST_CASE("smokers MAP state") {
  MlnModel m = parse_mln(kSmokers);
  EvidenceSet e = parse_evidence("smokes(A)\n", m);
  MapResult r = solve_map(m, e);
  CHECK(r.weight == 3.0);
  CHECK(r.converged);
  CHECK(r.optimal);
  CHECK(r.iterations == 2);
  CHECK(r.ilp_objective == doctest::Approx(r.weight));
  CHECK(format_map_state(m, r.interpretation) == "cancer(A)\nsmokes(A)\n");
}

TEST_CASE("iterations of the smokers example") {
  MlnModel m = parse_mln(kSmokers);
  EvidenceSet e = parse_evidence("smokes(A)\n", m);
  CpiEngine engine(m, e, EngineConfig{});
  CHECK(engine.run_iteration() == 1);
  CHECK(engine.stats().back().solved);
  CHECK(engine.interpretation().generation() == 1);
  CHECK(engine.run_iteration() == 0);
  CHECK_FALSE(engine.stats().back().solved);
  CHECK(engine.interpretation().generation() == 1);
}

TEST_CASE("unsatisfiable hard clauses") {
  MlnModel triangle = parse_mln(
      "node={A,B,C}\nred(node)\n"
      "!red(A) v !red(B) .\nred(A) v red(B) .\n"
      "!red(B) v !red(C) .\nred(B) v red(C) .\n"
      "!red(A) v !red(C) .\nred(A) v red(C) .\n");
  CHECK_THROWS_AS(solve_map(triangle, EvidenceSet(triangle)), UnsatisfiableError);

  MlnModel forced = parse_mln("d={A}\np(d)\np(x) .\n");
  CHECK_THROWS_AS(solve_map(forced, parse_evidence("!p(A)\n", forced)), UnsatisfiableError);
}

TEST_CASE("model without clauses") {
  MlnModel m = parse_mln("d={A,B}\np(d)\n");
  EvidenceSet e = parse_evidence("p(A)\n", m);
  MapResult r = solve_map(m, e);
  CHECK(r.iterations == 1);
  CHECK(r.weight == 0.0);
  CHECK(r.converged);
  CHECK(r.interpretation.same_world(initial_interpretation(m, e)));
}

TEST_CASE("every formula is processed once per iteration") {
  MlnModel m = parse_mln(
      "d={A,B,C}\np(d)\nq(d)\nr(d,d)\n"
      "1 p(x)\n-1 q(x) v p(x)\n0.5 !r(x,y) v q(y)\n!p(x) v r(x,x) .\n");
  EngineConfig config;
  config.workers = 2;
  CpiEngine engine(m, EvidenceSet(m), config);
  engine.run_iteration();
  CHECK(engine.formula_visits() == std::vector<std::uint32_t>{1, 1, 1, 1});
  engine.run_iteration();
  CHECK(engine.formula_visits() == std::vector<std::uint32_t>{2, 2, 2, 2});
}

TEST_CASE("aggregation shrinks the ILP without changing the optimum") {
  MlnModel m = parse_mln(symmetric_model(100));
  EvidenceSet e = parse_evidence(all_smoke(100), m);
  EngineConfig plain;
  plain.use_cpa = false;
  MapResult without = solve_map(m, e, plain);
  MapResult with = solve_map(m, e);
  CHECK(without.ilp.constraints.size() == 100);
  CHECK(with.ilp.constraints.size() == 1);
  CHECK(without.weight == 150.0);
  CHECK(with.weight == 150.0);
  RunReport report = make_report(with);
  CHECK(report.constraints_without_cpa == 100);
  CHECK(report.constraints_with_cpa == 1);
}

TEST_CASE("iteration limit returns a non-converged result") {
  MlnModel m = parse_mln("d={A,B}\np(d)\nq(d)\n1 p(x)\n1 !p(x) v q(x)\n");
  EngineConfig config;
  config.max_iterations = 1;
  MapResult r = solve_map(m, EvidenceSet(m), config);
  CHECK(r.iterations == 1);
  CHECK_FALSE(r.converged);
}

TEST_CASE("configuration is validated") {
  MlnModel m = parse_mln(kSmokers);
  EngineConfig config;
  config.gap = 1.0;
  CHECK_THROWS_AS(solve_map(m, EvidenceSet(m), config), std::invalid_argument);
  config.gap = 0.0;
  config.workers = 0;
  CHECK_THROWS_AS(solve_map(m, EvidenceSet(m), config), std::invalid_argument);
}

TEST_CASE("random models: oracle weight, fixpoint soundness, mode and thread invariance") {
  std::mt19937_64 rng(47);
  int solved = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const MlnModel m = parse_mln(support::random_mln_text(rng));
    const EvidenceSet e = parse_evidence(support::random_evidence_text(m, rng, 0.3), m);
    const support::NaiveMap expected = support::naive_map(m, e);

    std::vector<EngineConfig> configs(4);
    configs[1].use_cpa = false;
    configs[2].workers = 4;
    configs[3].merge_groups_across_iterations = true;
    std::optional<std::string> state;
    for (const auto& config : configs) {
      if (!expected.satisfiable) {
        CHECK_THROWS_AS(solve_map(m, e, config), UnsatisfiableError);
        continue;
      }
      CpiEngine engine(m, e, config);
      while (engine.run_iteration() != 0) {
      }
      const double weight = interpretation_weight(m, engine.interpretation());
      CHECK(weight == doctest::Approx(expected.weight).epsilon(1e-9));
      if (engine.last_solution())
        CHECK(engine.last_solution()->objective == doctest::Approx(weight).epsilon(1e-9));
      for (const auto& clause : m.clauses)
        for (const auto& g : find_active_groundings(m, clause, engine.interpretation(), e).groundings)
          CHECK(engine.is_translated(g));
      if (config.use_cpa && !config.merge_groups_across_iterations) {
        const std::string s = format_map_state(m, engine.interpretation());
        if (state)
          CHECK(*state == s);
        else
          state = s;
      }
    }
    if (expected.satisfiable) ++solved;
  }
  CHECK(solved > 60);
}

TEST_CASE("gap runs stay within the relative error") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 80; ++trial) {
    const MlnModel m = parse_mln(support::random_mln_text(rng));
    const EvidenceSet e = parse_evidence(support::random_evidence_text(m, rng, 0.3), m);
    const support::NaiveMap expected = support::naive_map(m, e);
    if (!expected.satisfiable) continue;
    for (double gap : {0.1, 0.01}) {
      EngineConfig config;
      config.gap = gap;
      MapResult r = solve_map(m, e, config);
      CHECK(r.weight <= expected.weight + 1e-9);
      CHECK(r.weight >= expected.weight - gap * std::abs(expected.weight) - 1e-9);
    }
  }
}

TEST_CASE("stats block") {
  MlnModel m = parse_mln(kSmokers);
  MapResult r = solve_map(m, parse_evidence("smokes(A)\n", m));
  RunReport report = make_report(r);
  CHECK(report.iterations == 2);
  CHECK(report.groundings_total == 2);
  CHECK(report.groundings_translated == 1);
  CHECK(report.ilp_constraints == 1);
  const std::string text = format_stats(report);
  CHECK(text.find("constraints_with_cpa=1\n") != std::string::npos);
  CHECK(text.find("weight=3\n") != std::string::npos);
  CHECK(text.find("iterations=2\n") != std::string::npos);
}

TEST_CASE("a fixpoint on the first iteration still yields an ILP with the offset") {
  MlnModel m = parse_mln("d={A,B}\np(d)\nq(d)\n0.5 !p(x) v q(x)\n-0.25 p(x)\n");
  MapResult r = solve_map(m, parse_evidence("q(A)\n", m));
  CHECK(r.iterations == 1);
  CHECK(r.weight == 1.0);
  CHECK(r.ilp.constraints.empty());
  CHECK(r.ilp.constant_offset == 1.0);
  CHECK(support::enumerate_ilp(r.ilp).objective == 1.0);
}
