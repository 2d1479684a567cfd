#pragma once

#include <optional>
#include <vector>

#include "cpamap/interpretation.hpp"
#include "cpamap/mln_model.hpp"

namespace cpamap {

/// Groundings of one formula that must be present in the ILP under the
/// current interpretation, already simplified by evidence. Sorted by key,
/// no duplicates.
struct ViolationSet {
  std::uint32_t formula_id = 0;
  std::vector<GroundClause> groundings;
};

/// Outcome of simplifying one ground clause against evidence.
struct Simplified {
  enum class Status { kKept, kSatisfied, kFalsified };
  Status status = Status::kKept;
  std::optional<GroundClause> clause;
  /// Objective contribution that no longer depends on any free atom.
  double constant = 0.0;
};

/// Drops evidence-falsified literals and duplicate literals. A clause with a
/// literal satisfied by evidence, or with complementary literals, is
/// satisfied outright. Throws UnsatisfiableError for a hard clause whose
/// literals are all falsified.
Simplified simplify_with_evidence(const GroundClause& g, const EvidenceSet& evidence);

/// Evidence atoms at their fixed values, every other atom false.
Interpretation initial_interpretation(const MlnModel& model, const EvidenceSet& evidence);

/// Per-predicate true and false relations of one interpretation snapshot.
/// Immutable once built, so concurrent retrievals may share it.
class RelationStore {
 public:
  RelationStore(const MlnModel& model, const Interpretation& interp);

  const Interpretation& interpretation() const { return *interp_; }
  /// Atoms of `predicate` whose truth value equals `truth`, ascending.
  const std::vector<AtomId>& atoms(PredicateId predicate, bool truth) const {
    return truth ? true_[predicate] : false_[predicate];
  }

 private:
  const Interpretation* interp_;
  std::vector<std::vector<AtomId>> true_;
  std::vector<std::vector<AtomId>> false_;
};

/// Active groundings of `clause`: violated ones for positive and hard
/// weights, satisfied ones for negative weights. Computed by hash joins
/// over the relations in `store`.
ViolationSet find_active_groundings(const MlnModel& model, const FirstOrderClause& clause,
                                    const RelationStore& store, const EvidenceSet& evidence);

/// Convenience overload that builds a throwaway RelationStore.
ViolationSet find_active_groundings(const MlnModel& model, const FirstOrderClause& clause,
                                    const Interpretation& interp, const EvidenceSet& evidence);

/// Evidence-only classification of all groundings of one soft formula.
struct FormulaCensus {
  std::uint64_t total = 0;
  /// Satisfied by evidence or tautological.
  std::uint64_t always_satisfied = 0;
  /// Every literal falsified by evidence.
  std::uint64_t always_falsified = 0;

  std::uint64_t open() const { return total - always_satisfied - always_falsified; }
};

FormulaCensus census(const MlnModel& model, const FirstOrderClause& clause,
                     const EvidenceSet& evidence);

}  // namespace cpamap
