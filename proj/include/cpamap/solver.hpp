#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cpamap/ilp.hpp"
#include "cpamap/interpretation.hpp"
#include "cpamap/mln_model.hpp"

namespace cpamap {

struct Solution {
  enum class Status { kOptimal, kGapReached, kInfeasible, kLimit };

  Status status = Status::kInfeasible;
  /// Value per model variable when has_incumbent.
  std::vector<std::int64_t> assignment;
  /// Objective of `assignment`, constant offset included.
  double objective = 0.0;
  /// Best proven upper bound on the optimum, constant offset included.
  double bound = 0.0;
  std::uint64_t nodes = 0;
  bool has_incumbent = false;
};

const char* to_string(Solution::Status status);

struct SolveOptions {
  /// Relative gap at which the search may stop.
  double gap = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t node_limit = 10'000'000;
};

/// True when an incumbent of value `incumbent` is within relative `gap` of
/// every objective value not exceeding `bound`. Requires matching signs for
/// a nonzero gap so the guarantee holds for negative optima too.
bool gap_closed(double incumbent, double bound, double gap);

/// Depth-first branch and bound over the atom variables. Aux variables are
/// never branched on; each takes its best value given the atoms. Bounds come
/// from optimistic completion of every aux variable against the rows'
/// maximal activities, and hard rows are unit-propagated. Expects each row
/// to reference at most one aux variable and the objective to reference aux
/// variables only.
Solution solve_ilp(const IlpModel& model, const SolveOptions& options);
Solution solve_ilp(const IlpModel& model, double gap, std::uint64_t seed);

struct BruteForceResult {
  Interpretation interpretation;
  double weight = 0.0;
};

/// Exhaustive MAP over all assignments of the non-evidence atoms. Ties go
/// to the world with the fewest true atoms, then to the lexicographically
/// smallest list of true atom ids. Throws
/// std::length_error above `max_free_atoms` free atoms and
/// UnsatisfiableError when no world satisfies the hard clauses.
BruteForceResult brute_force_map(const MlnModel& model, const EvidenceSet& evidence,
                                 std::size_t max_free_atoms = 25);

/// LP text: Maximize / Subject To / Bounds / Generals / Binaries / End, in
/// the model's current variable and row order. Atom vars are named
/// x<atom id>, aux vars z<aux id>. A nonzero constant offset is written as
/// a `\ offset` comment.
std::string export_lp(const IlpModel& model);

}  // namespace cpamap
