#include "cpamap/grounder.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <string>
#include <unordered_map>

namespace cpamap {

namespace {

constexpr ConstIndex kUnbound = std::numeric_limits<ConstIndex>::max();

std::string describe(const GroundClause& g) {
  std::string out = "formula " + std::to_string(g.formula_id) + " grounding {";
  for (std::size_t i = 0; i < g.literals.size(); ++i) {
    if (i) out += ", ";
    out += (g.literals[i].positive ? "" : "!") + std::to_string(g.literals[i].atom);
  }
  return out + "}";
}

}  // namespace

Simplified simplify_with_evidence(const GroundClause& g, const EvidenceSet& evidence) {
  Simplified out;
  const double total_weight =
      g.weight.is_soft() ? g.weight.value() * static_cast<double>(g.multiplicity) : 0.0;
  GroundClause kept;
  kept.weight = g.weight;
  kept.formula_id = g.formula_id;
  kept.multiplicity = g.multiplicity;
  for (const auto& lit : g.literals) {
    if (auto v = evidence.value(lit.atom)) {
      if (*v == lit.positive) {
        out.status = Simplified::Status::kSatisfied;
        out.constant = total_weight;
        return out;
      }
      continue;
    }
    bool duplicate = false;
    for (const auto& k : kept.literals) {
      if (k.atom != lit.atom) continue;
      if (k.positive != lit.positive) {
        out.status = Simplified::Status::kSatisfied;
        out.constant = total_weight;
        return out;
      }
      duplicate = true;
    }
    if (!duplicate) kept.literals.push_back(lit);
  }
  if (kept.literals.empty()) {
    if (g.weight.is_hard())
      throw UnsatisfiableError("hard clause falsified by evidence: " + describe(g));
    out.status = Simplified::Status::kFalsified;
    return out;
  }
  out.clause = std::move(kept);
  return out;
}

Interpretation initial_interpretation(const MlnModel& model, const EvidenceSet& evidence) {
  Interpretation interp(model.atom_count());
  for (AtomId a : evidence.fixed_true()) interp.set(a, true);
  return interp;
}

RelationStore::RelationStore(const MlnModel& model, const Interpretation& interp)
    : interp_(&interp), true_(model.predicates.size()), false_(model.predicates.size()) {
  for (PredicateId p = 0; p < model.predicates.size(); ++p) {
    AtomId begin = model.predicate_offset(p);
    for (std::size_t i = 0; i < model.predicate_atom_count(p); ++i) {
      AtomId a = begin + static_cast<AtomId>(i);
      (interp[a] ? true_[p] : false_[p]).push_back(a);
    }
  }
}

namespace {

/// Flat table of partial variable bindings, one row per candidate grounding.
struct BindingTable {
  std::size_t width = 0;
  std::vector<ConstIndex> cells;

  std::size_t rows() const { return width ? cells.size() / width : (cells.empty() ? 0 : 1); }
  std::span<const ConstIndex> row(std::size_t r) const {
    return {cells.data() + r * width, width};
  }
};

/// Argument tuples of a relation restricted to those compatible with the
/// literal's constants and repeated variables.
std::vector<std::vector<ConstIndex>> matching_tuples(const MlnModel& model, const Literal& lit,
                                                     const std::vector<AtomId>& relation) {
  std::vector<std::vector<ConstIndex>> out;
  for (AtomId a : relation) {
    auto args = model.arguments_of(a);
    bool ok = true;
    for (std::size_t i = 0; i < lit.terms.size() && ok; ++i) {
      const Term& t = lit.terms[i];
      if (!t.is_variable) {
        ok = args[i] == t.value;
        continue;
      }
      for (std::size_t j = 0; j < i && ok; ++j)
        if (lit.terms[j].is_variable && lit.terms[j].value == t.value) ok = args[j] == args[i];
    }
    if (ok) out.push_back(std::move(args));
  }
  return out;
}

class ClauseJoin {
 public:
  ClauseJoin(const MlnModel& model, const FirstOrderClause& clause, const RelationStore& store)
      : model_(model), clause_(clause), store_(store), vars_(clause.variable_count()) {
    radix_.resize(vars_);
    for (std::size_t v = 0; v < vars_; ++v)
      radix_[v] = model.domains[clause.variable_domains[v]].constants.size();
  }

  /// Bindings under which every literal is false.
  std::vector<std::vector<ConstIndex>> violated() {
    const auto& lits = clause_.literals;
    std::vector<bool> done(lits.size(), false);
    std::vector<bool> bound(vars_, false);

    // Drive from the smallest falsifying relation.
    std::size_t driver = 0;
    for (std::size_t j = 1; j < lits.size(); ++j)
      if (relation_for_false(j).size() < relation_for_false(driver).size()) driver = j;

    BindingTable table;
    table.width = vars_;
    table.cells.assign(vars_, kUnbound);
    if (vars_ == 0) table.cells.clear();
    bool empty_binding = vars_ == 0;

    std::size_t next = driver;
    for (std::size_t step = 0; step < lits.size(); ++step) {
      if (step > 0) next = pick_next(done, bound);
      done[next] = true;
      if (empty_binding) {
        // Variable-free clause: every literal is a direct probe.
        if (!literal_false(lits[next], {})) return {};
        continue;
      }
      table = join(table, lits[next], relation_for_false(next), bound, false);
      for (const Term& t : lits[next].terms)
        if (t.is_variable) bound[t.value] = true;
      if (table.cells.empty()) return {};
    }
    if (empty_binding) return {std::vector<ConstIndex>{}};
    std::vector<std::vector<ConstIndex>> out;
    for (std::size_t r = 0; r < table.rows(); ++r) {
      auto row = table.row(r);
      out.emplace_back(row.begin(), row.end());
    }
    return out;
  }

  /// Bindings under which at least one literal is true.
  std::vector<std::vector<ConstIndex>> satisfied() {
    std::vector<std::vector<ConstIndex>> out;
    for (std::size_t j = 0; j < clause_.literals.size(); ++j) {
      const Literal& lit = clause_.literals[j];
      if (vars_ == 0) {
        if (!literal_false(lit, {})) return {std::vector<ConstIndex>{}};
        continue;
      }
      BindingTable table;
      table.width = vars_;
      table.cells.assign(vars_, kUnbound);
      std::vector<bool> bound(vars_, false);
      table = join(table, lit, store_.atoms(lit.predicate, lit.positive), bound, true);
      // Remaining variables range over their whole domains.
      for (std::size_t r = 0; r < table.rows(); ++r) {
        auto row = table.row(r);
        std::vector<ConstIndex> binding(row.begin(), row.end());
        expand(binding, 0, out);
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

 private:
  const std::vector<AtomId>& relation_for_false(std::size_t j) const {
    const Literal& lit = clause_.literals[j];
    return store_.atoms(lit.predicate, !lit.positive);
  }

  bool literal_false(const Literal& lit, std::span<const ConstIndex> binding) const {
    return store_.interpretation()[ground_atom(model_, lit, binding)] != lit.positive;
  }

  std::size_t pick_next(const std::vector<bool>& done, const std::vector<bool>& bound) const {
    std::size_t best = clause_.literals.size();
    long best_unbound = 0;
    std::size_t best_size = 0;
    for (std::size_t j = 0; j < clause_.literals.size(); ++j) {
      if (done[j]) continue;
      long unbound = 0;
      for (const Term& t : clause_.literals[j].terms)
        if (t.is_variable && !bound[t.value]) ++unbound;
      std::size_t size = relation_for_false(j).size();
      if (best == clause_.literals.size() || unbound < best_unbound ||
          (unbound == best_unbound && size < best_size)) {
        best = j;
        best_unbound = unbound;
        best_size = size;
      }
    }
    return best;
  }

  /// Hash join of the binding table with `relation` on the literal's bound
  /// variables. With all variables bound this degenerates to a probe of the
  /// interpretation.
  BindingTable join(const BindingTable& in, const Literal& lit, const std::vector<AtomId>& relation,
                    const std::vector<bool>& bound, bool want_true) const {
    BindingTable out;
    out.width = vars_;

    bool all_bound = true;
    for (const Term& t : lit.terms)
      if (t.is_variable && !bound[t.value]) all_bound = false;
    if (all_bound) {
      for (std::size_t r = 0; r < in.rows(); ++r) {
        auto row = in.row(r);
        bool value = store_.interpretation()[ground_atom(model_, lit, row)];
        if (value == (want_true ? lit.positive : !lit.positive))
          out.cells.insert(out.cells.end(), row.begin(), row.end());
      }
      return out;
    }

    // Build side: relation tuples keyed on the already-bound positions.
    std::vector<std::size_t> key_positions;
    for (std::size_t i = 0; i < lit.terms.size(); ++i)
      if (lit.terms[i].is_variable && bound[lit.terms[i].value]) key_positions.push_back(i);

    auto tuples = matching_tuples(model_, lit, relation);
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> index;
    index.reserve(tuples.size());
    for (std::size_t k = 0; k < tuples.size(); ++k) {
      std::uint64_t key = 0;
      for (std::size_t i : key_positions) key = key * radix_[lit.terms[i].value] + tuples[k][i];
      index[key].push_back(k);
    }

    // Probe side: existing partial bindings.
    std::vector<ConstIndex> scratch(vars_);
    for (std::size_t r = 0; r < in.rows(); ++r) {
      auto row = in.row(r);
      std::uint64_t key = 0;
      for (std::size_t i : key_positions)
        key = key * radix_[lit.terms[i].value] + row[lit.terms[i].value];
      auto it = index.find(key);
      if (it == index.end()) continue;
      for (std::size_t k : it->second) {
        std::copy(row.begin(), row.end(), scratch.begin());
        for (std::size_t i = 0; i < lit.terms.size(); ++i)
          if (lit.terms[i].is_variable) scratch[lit.terms[i].value] = tuples[k][i];
        out.cells.insert(out.cells.end(), scratch.begin(), scratch.end());
      }
    }
    return out;
  }

  void expand(std::vector<ConstIndex>& binding, std::size_t v,
              std::vector<std::vector<ConstIndex>>& out) const {
    while (v < vars_ && binding[v] != kUnbound) ++v;
    if (v == vars_) {
      out.push_back(binding);
      return;
    }
    for (ConstIndex c = 0; c < radix_[v]; ++c) {
      binding[v] = c;
      expand(binding, v + 1, out);
    }
    binding[v] = kUnbound;
  }

  const MlnModel& model_;
  const FirstOrderClause& clause_;
  const RelationStore& store_;
  std::size_t vars_;
  std::vector<std::size_t> radix_;
};

}  // namespace

ViolationSet find_active_groundings(const MlnModel& model, const FirstOrderClause& clause,
                                    const RelationStore& store, const EvidenceSet& evidence) {
  ViolationSet out;
  out.formula_id = clause.formula_id;

  ClauseJoin join(model, clause, store);
  const bool want_satisfied = clause.weight.is_soft() && clause.weight.value() < 0;
  auto bindings = want_satisfied ? join.satisfied() : join.violated();
  std::sort(bindings.begin(), bindings.end());

  // Distinct groundings may simplify to one clause; keep the first
  // representative and count the rest as multiplicity.
  std::map<std::vector<std::int64_t>, GroundClause> merged;
  for (const auto& binding : bindings) {
    GroundClause g;
    g.weight = clause.weight;
    g.formula_id = clause.formula_id;
    for (const auto& lit : clause.literals)
      g.literals.push_back({ground_atom(model, lit, binding), lit.positive});
    auto s = simplify_with_evidence(g, evidence);
    if (!s.clause) continue;
    auto key = s.clause->key();
    auto it = merged.find(key);
    if (it == merged.end())
      merged.emplace(std::move(key), std::move(*s.clause));
    else
      ++it->second.multiplicity;
  }
  out.groundings.reserve(merged.size());
  for (auto& [key, g] : merged) out.groundings.push_back(std::move(g));
  return out;
}

ViolationSet find_active_groundings(const MlnModel& model, const FirstOrderClause& clause,
                                    const Interpretation& interp, const EvidenceSet& evidence) {
  RelationStore store(model, interp);
  return find_active_groundings(model, clause, store, evidence);
}

FormulaCensus census(const MlnModel& model, const FirstOrderClause& clause,
                     const EvidenceSet& evidence) {
  FormulaCensus out;
  std::vector<GroundLiteral> open;
  for_each_grounding(model, clause, [&](std::span<const ConstIndex> binding) {
    ++out.total;
    open.clear();
    for (const auto& lit : clause.literals) {
      AtomId a = ground_atom(model, lit, binding);
      if (auto v = evidence.value(a)) {
        if (*v == lit.positive) {
          ++out.always_satisfied;
          return;
        }
        continue;
      }
      for (const auto& o : open) {
        if (o.atom == a && o.positive != lit.positive) {
          ++out.always_satisfied;
          return;
        }
      }
      open.push_back({a, lit.positive});
    }
    if (open.empty()) ++out.always_falsified;
  });
  return out;
}

}  // namespace cpamap
