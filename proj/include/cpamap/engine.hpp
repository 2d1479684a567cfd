#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "cpamap/cpa.hpp"
#include "cpamap/grounder.hpp"
#include "cpamap/ilp.hpp"
#include "cpamap/interpretation.hpp"
#include "cpamap/mln_model.hpp"
#include "cpamap/solver.hpp"

namespace cpamap {

struct EngineConfig {
  enum class Backend { kBuiltin, kExportOnly };

  bool use_cpa = true;
  /// Relative gap handed to the solver, in [0, 1).
  double gap = 0.0;
  /// 0 means no limit.
  std::size_t max_iterations = 0;
  std::size_t workers = 1;
  Backend solver_backend = Backend::kBuiltin;
  std::uint64_t random_seed = 0;
  /// Fold new groups into earlier groups of the same formula, weight and
  /// context instead of keeping one group per iteration.
  bool merge_groups_across_iterations = false;
  std::uint64_t node_limit = 10'000'000;

  /// Throws std::invalid_argument for a gap outside [0, 1) or zero workers.
  void validate() const;
};

struct IterationStats {
  std::size_t iteration = 0;
  /// Active groundings (distinct after evidence simplification).
  std::uint64_t groundings_found = 0;
  std::uint64_t groundings_new = 0;
  /// Rows the new groundings cost clause by clause, and with aggregation.
  std::uint64_t constraints_without_cpa = 0;
  std::uint64_t constraints_with_cpa = 0;
  std::size_t ilp_constraints = 0;
  std::size_t ilp_variables = 0;
  bool solved = false;
  Solution::Status status = Solution::Status::kOptimal;
  double objective = 0.0;
  double bound = 0.0;
  std::uint64_t nodes = 0;
  double ground_seconds = 0.0;
  double assemble_seconds = 0.0;
  double solve_seconds = 0.0;
};

struct MapResult {
  Interpretation interpretation;
  /// interpretation_weight of `interpretation`.
  double weight = 0.0;
  /// Incumbent objective of the last solve, constant offset included.
  double ilp_objective = 0.0;
  std::size_t iterations = 0;
  /// False when the iteration limit stopped the loop before a fixpoint.
  bool converged = false;
  /// False when the last solve stopped at the gap or the node limit.
  bool optimal = true;
  std::vector<IterationStats> per_iteration_stats;
  /// Groundings of all formulas before any simplification.
  std::uint64_t groundings_total = 0;
  /// Distinct groundings that made it into the ILP.
  std::uint64_t groundings_translated = 0;
  /// The accumulated ILP in canonical order.
  IlpModel ilp;
};

/// Cutting plane inference state: the current interpretation, the
/// groundings translated so far and the ILP they form.
class CpiEngine {
 public:
  CpiEngine(const MlnModel& model, const EvidenceSet& evidence, EngineConfig config);

  /// Finds and translates new active groundings of every formula, then, if
  /// there were any, solves the accumulated ILP and adopts its solution.
  /// Returns the number of new groundings; 0 means fixpoint.
  std::size_t run_iteration();

  const Interpretation& interpretation() const { return interp_; }
  /// Canonical ILP as of the last iteration.
  const IlpModel& ilp() const { return ilp_; }
  const std::vector<IterationStats>& stats() const { return stats_; }
  const std::optional<Solution>& last_solution() const { return last_solution_; }
  std::size_t iterations() const { return stats_.size(); }

  /// How often each formula was processed, over all iterations.
  std::vector<std::uint32_t> formula_visits() const;
  /// Whether `g` (a simplified grounding) is already part of the ILP.
  bool is_translated(const GroundClause& g) const;

  std::uint64_t groundings_total() const { return groundings_total_; }
  std::uint64_t groundings_translated() const;

 private:
  struct FormulaState {
    std::set<std::vector<std::int64_t>> translated;
    std::int64_t translated_multiplicity = 0;
    FormulaCensus census;
    IlpModel fragment;
    // Only kept when groups are merged across iterations.
    std::vector<AggregatedGroup> groups;
    std::map<std::vector<std::int64_t>, std::size_t> group_index;
    std::vector<GroundClause> singles;
  };

  struct WorkerResult {
    std::uint64_t found = 0;
    std::uint64_t added = 0;
    std::uint64_t rows_without = 0;
    std::uint64_t rows_with = 0;
  };

  template <typename Fn>
  void for_each_formula_parallel(Fn&& fn);

  WorkerResult process_formula(std::uint32_t f, const RelationStore& store);
  void merge_into_groups(FormulaState& state, AggregationPlan plan);
  double constant_offset() const;
  void adopt(const Solution& solution);

  const MlnModel& model_;
  const EvidenceSet& evidence_;
  EngineConfig config_;
  Interpretation interp_;
  std::vector<FormulaState> formulas_;
  std::unique_ptr<std::atomic<std::uint32_t>[]> visits_;
  IlpModel ilp_;
  bool assembled_ = false;
  std::optional<Solution> last_solution_;
  std::vector<IterationStats> stats_;
  std::uint64_t groundings_total_ = 0;
};

/// Runs CPI to a fixpoint (or the iteration limit). Throws
/// UnsatisfiableError when the hard clauses admit no world.
MapResult solve_map(const MlnModel& model, const EvidenceSet& evidence,
                    const EngineConfig& config = {});

}  // namespace cpamap
