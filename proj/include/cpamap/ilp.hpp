#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "cpamap/mln_model.hpp"

namespace cpamap {

using VarId = std::uint32_t;
/// Sortable identity of the clause or group a block of rows came from.
using OriginKey = std::vector<std::int64_t>;

struct IlpVar {
  enum class Kind : std::uint8_t { kAtom, kAux };

  Kind kind = Kind::kAtom;
  /// AtomId for atom vars; canonical aux index for aux vars (set by
  /// IlpModel::canonicalize, otherwise creation order).
  std::uint32_t id = 0;
  std::int64_t lower = 0;
  std::int64_t upper = 1;
  OriginKey origin;

  bool is_binary() const { return lower >= 0 && upper <= 1; }
  friend bool operator==(const IlpVar&, const IlpVar&) = default;
};

struct LinearTerm {
  std::int64_t coef = 0;
  VarId var = 0;
  friend bool operator==(const LinearTerm&, const LinearTerm&) = default;
};

enum class Sense : std::uint8_t { kGreaterEqual, kLessEqual };

/// sum(terms) {>=,<=} rhs, constants already moved to the right-hand side.
struct LinearConstraint {
  std::vector<LinearTerm> terms;
  Sense sense = Sense::kGreaterEqual;
  std::int64_t rhs = 0;
  OriginKey origin;
  std::uint32_t ordinal = 0;  // row position within its origin block

  friend bool operator==(const LinearConstraint&, const LinearConstraint&) = default;
};

struct ObjectiveTerm {
  double weight = 0.0;
  VarId var = 0;
  friend bool operator==(const ObjectiveTerm&, const ObjectiveTerm&) = default;
};

/// Collects terms of one row, merging repeated variables and dropping zero
/// coefficients. Literal helpers fold the (1 - x) constants into the rhs.
class RowBuilder {
 public:
  void add(std::int64_t coef, VarId var);
  /// Adds coef * x for a positive literal, coef * (1 - x) for a negative one.
  void add_literal(std::int64_t coef, VarId var, bool positive);
  /// Moves a left-hand-side constant to the right-hand side.
  void add_constant(std::int64_t c) { constant_ += c; }
  LinearConstraint build(Sense sense, std::int64_t rhs) const;

 private:
  std::vector<LinearTerm> terms_;
  std::int64_t constant_ = 0;
};

/// Maximization ILP: binary atom variables, integer aux variables carrying
/// the objective, linear rows.
class IlpModel {
 public:
  std::vector<IlpVar> vars;
  std::vector<LinearConstraint> constraints;
  std::vector<ObjectiveTerm> objective;
  double constant_offset = 0.0;

  /// Binary variable of `atom`, created on first use.
  VarId atom_var(AtomId atom);
  std::optional<VarId> find_atom_var(AtomId atom) const;
  VarId add_aux(std::int64_t lower, std::int64_t upper, OriginKey origin);
  void add_constraint(LinearConstraint row);
  void add_objective(double weight, VarId var);

  /// Appends another model's vars, rows and objective, remapping atom vars
  /// onto existing ones. Offsets are summed.
  void append(const IlpModel& other);

  /// Removes an aux variable along with every row and objective term that
  /// references it.
  void retire_aux(VarId var);

  /// Renumbers into a canonical order independent of insertion order: atom
  /// vars by atom id, then aux vars by origin; rows by (origin, ordinal);
  /// terms and objective by variable.
  void canonicalize();

  std::size_t aux_count() const;
  std::size_t atom_var_count() const { return atom_index_.size(); }

  void rebuild_index();

 private:
  std::unordered_map<AtomId, VarId> atom_index_;
  std::uint32_t next_aux_id_ = 0;
};

/// Identity of a ground clause within its formula: formula id plus sorted
/// literal codes.
OriginKey clause_origin(const GroundClause& g);

/// One row per clause: w > 0 adds a binary z with sum >= z, w < 0 adds a
/// binary z with sum <= |g| z, hard adds sum >= 1. Soft clauses contribute
/// weight * multiplicity * z to the objective.
void translate_clause(const GroundClause& g, IlpModel& model);

/// Tightens the bounds of every atom var fixed by evidence.
void evidence_constraints(const EvidenceSet& evidence, IlpModel& model);

}  // namespace cpamap
