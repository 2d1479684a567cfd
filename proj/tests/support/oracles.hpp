#pragma once

// Test-only reference implementations. Nothing here calls the grounder, the
// translator or the solver; the oracles work from the parsed model alone.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cpamap/ilp.hpp"
#include "cpamap/interpretation.hpp"
#include "cpamap/mln_model.hpp"

namespace support {

struct RandomShape {
  std::size_t max_predicates = 3;
  std::size_t max_constants = 4;
  std::size_t max_clauses = 5;
  std::size_t max_atoms = 16;
  std::size_t max_groundings = 60;
  double hard_probability = 0.15;
  double evidence_probability = 0.3;
};

/// MLN text within `shape`; resamples until the limits hold.
std::string random_mln_text(std::mt19937_64& rng, const RandomShape& shape = {});
/// Evidence text fixing a random subset of atoms.
std::string random_evidence_text(const cpamap::MlnModel& model, std::mt19937_64& rng,
                                 double probability);

/// One flattened grounding: (atom, sign) pairs plus weight.
struct FlatClause {
  std::vector<std::pair<cpamap::AtomId, bool>> literals;
  bool hard = false;
  double weight = 0.0;
  std::uint32_t formula = 0;
};

/// All groundings of the model by direct variable enumeration.
std::vector<FlatClause> flatten(const cpamap::MlnModel& model);

/// Sum of weights of satisfied soft groundings; -inf if a hard one fails.
double naive_weight(const std::vector<FlatClause>& ground, const cpamap::Interpretation& world);
double naive_weight(const cpamap::MlnModel& model, const cpamap::Interpretation& world);

struct NaiveMap {
  bool satisfiable = false;
  double weight = 0.0;
};

/// Exhaustive MAP weight over the atoms not fixed by evidence.
NaiveMap naive_map(const cpamap::MlnModel& model, const cpamap::EvidenceSet& evidence);

struct IlpOptimum {
  bool feasible = false;
  double objective = 0.0;  // constant offset included
  std::vector<std::int64_t> assignment;
};

/// Joint enumeration of every variable over its bounds.
IlpOptimum enumerate_ilp(const cpamap::IlpModel& model);

/// Checks every row against a full assignment.
bool satisfies_rows(const cpamap::IlpModel& model, const std::vector<std::int64_t>& values);

/// With the atom variables fixed (by atom id), the best objective over the
/// aux variables, each enumerated on its own. Offset not included. nullopt
/// if infeasible.
std::optional<double> best_completion(const cpamap::IlpModel& model,
                                      const cpamap::Interpretation& world);

struct LpRow {
  std::string name;
  std::map<std::string, std::int64_t> terms;
  std::string sense;
  std::int64_t rhs = 0;
};

struct LpFile {
  std::map<std::string, double> objective;
  std::optional<double> offset;
  std::vector<LpRow> rows;
  std::map<std::string, std::pair<std::int64_t, std::int64_t>> bounds;
  std::set<std::string> generals;
  std::set<std::string> binaries;
};

/// Reader for the LP subset export_lp writes.
LpFile parse_lp(const std::string& text);

}  // namespace support
