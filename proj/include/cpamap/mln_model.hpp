#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cpamap {

class Interpretation;

using AtomId = std::uint32_t;
using PredicateId = std::uint32_t;
using DomainId = std::uint32_t;
/// Position of a constant inside its domain's ordered constant list.
using ConstIndex = std::uint32_t;

/// Raised for malformed model or evidence text. Line and column are 1-based;
/// column 0 means the whole line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Raised when evidence plus hard clauses admit no world.
class UnsatisfiableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class WeightTag {
 public:
  static WeightTag soft(double value) { return WeightTag(false, value); }
  static WeightTag hard() { return WeightTag(true, 0.0); }

  bool is_hard() const { return hard_; }
  bool is_soft() const { return !hard_; }
  /// Only meaningful for soft weights.
  double value() const { return value_; }

  friend bool operator==(const WeightTag&, const WeightTag&) = default;

 private:
  WeightTag(bool hard, double value) : hard_(hard), value_(value) {}
  bool hard_;
  double value_;
};

struct Domain {
  std::string name;
  std::vector<std::string> constants;
  std::unordered_map<std::string, ConstIndex> index;

  std::optional<ConstIndex> find(std::string_view constant) const;
};

struct PredicateSig {
  std::string name;
  std::vector<DomainId> argument_domains;
  bool closed_world = false;

  std::size_t arity() const { return argument_domains.size(); }
};

/// A term is either a clause-local variable or a constant of the argument's
/// domain.
struct Term {
  bool is_variable = false;
  std::uint32_t value = 0;  // variable index or ConstIndex

  static Term variable(std::uint32_t v) { return {true, v}; }
  static Term constant(ConstIndex c) { return {false, c}; }
  friend bool operator==(const Term&, const Term&) = default;
};

struct Literal {
  PredicateId predicate = 0;
  bool positive = true;
  std::vector<Term> terms;
  friend bool operator==(const Literal&, const Literal&) = default;
};

struct FirstOrderClause {
  std::vector<Literal> literals;
  WeightTag weight = WeightTag::hard();
  std::uint32_t formula_id = 0;
  std::vector<std::string> variable_names;
  std::vector<DomainId> variable_domains;

  std::size_t variable_count() const { return variable_names.size(); }
};

/// A ground literal: atom plus sign.
struct GroundLiteral {
  AtomId atom = 0;
  bool positive = true;

  /// Dense sortable code (atom * 2 + sign) used for keys and ordering.
  std::int64_t code() const { return static_cast<std::int64_t>(atom) * 2 + (positive ? 1 : 0); }
  friend auto operator<=>(const GroundLiteral&, const GroundLiteral&) = default;
};

/// A ground clause. Literals keep the positional order of the first-order
/// clause they came from (evidence-falsified positions removed). `multiplicity`
/// counts the distinct groundings of the formula that simplified to this
/// clause; its total weight is multiplicity * weight.
struct GroundClause {
  std::vector<GroundLiteral> literals;
  WeightTag weight = WeightTag::hard();
  std::uint32_t formula_id = 0;
  std::uint32_t multiplicity = 1;

  std::vector<AtomId> positive_atoms() const;
  std::vector<AtomId> negative_atoms() const;
  /// Sorted literal codes; identity of the clause within its formula.
  std::vector<std::int64_t> key() const;
  bool satisfied_by(const Interpretation& interp) const;
};

/// First-order weighted clauses over typed constant domains. Call finalize()
/// after mutating the public members; parse_mln() returns a finalized model.
class MlnModel {
 public:
  std::vector<Domain> domains;
  std::vector<PredicateSig> predicates;
  std::vector<FirstOrderClause> clauses;

  void finalize();

  std::optional<DomainId> find_domain(std::string_view name) const;
  std::optional<PredicateId> find_predicate(std::string_view name) const;

  /// Size of the Herbrand base.
  std::size_t atom_count() const { return atom_count_; }
  AtomId atom_id(PredicateId predicate, std::span<const ConstIndex> args) const;
  PredicateId predicate_of(AtomId atom) const;
  std::vector<ConstIndex> arguments_of(AtomId atom) const;
  std::string atom_name(AtomId atom) const;
  /// Number of atoms of one predicate and the first id of its block.
  std::size_t predicate_atom_count(PredicateId p) const { return pred_sizes_[p]; }
  AtomId predicate_offset(PredicateId p) const { return pred_offsets_[p]; }

 private:
  std::unordered_map<std::string, DomainId> domain_index_;
  std::unordered_map<std::string, PredicateId> predicate_index_;
  std::vector<AtomId> pred_offsets_;
  std::vector<std::size_t> pred_sizes_;
  std::size_t atom_count_ = 0;
};

/// Fixed truth values. Atoms of closed-world predicates that were not listed
/// true are implicitly false.
class EvidenceSet {
 public:
  EvidenceSet() = default;
  explicit EvidenceSet(const MlnModel& model);

  /// Throws std::invalid_argument on contradicting an earlier listing.
  void set(AtomId atom, bool value);
  std::optional<bool> value(AtomId atom) const;
  bool is_fixed(AtomId atom) const { return value(atom).has_value(); }
  std::size_t atom_count() const { return state_.size(); }

  /// All atoms fixed true / false (closed-world defaults included), ascending.
  std::vector<AtomId> fixed_true() const;
  std::vector<AtomId> fixed_false() const;

 private:
  enum class State : std::uint8_t { kFree, kTrue, kFalse, kImplicitFalse };
  std::vector<State> state_;
};

MlnModel parse_mln(std::string_view text);
EvidenceSet parse_evidence(std::string_view text, const MlnModel& model);

/// Serializes in the input grammar; parse_mln(format_mln(m)) reproduces m.
std::string format_mln(const MlnModel& model);
std::string format_literal(const MlnModel& model, const FirstOrderClause& clause,
                           const Literal& literal);

/// Calls `fn` once per grounding of `clause` with the variable binding
/// (one ConstIndex per clause variable), in lexicographic binding order.
void for_each_grounding(const MlnModel& model, const FirstOrderClause& clause,
                        const std::function<void(std::span<const ConstIndex>)>& fn);

/// Ground atom of `literal` under `binding`.
AtomId ground_atom(const MlnModel& model, const Literal& literal,
                   std::span<const ConstIndex> binding);

/// Sum over soft clauses of weight times satisfied-grounding count;
/// -infinity if a hard grounding is violated.
double interpretation_weight(const MlnModel& model, const Interpretation& interp);

/// One true ground atom per line, sorted lexicographically.
std::string format_map_state(const MlnModel& model, const Interpretation& interp);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_weight(double value);

}  // namespace cpamap
