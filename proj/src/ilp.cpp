#include "cpamap/ilp.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace cpamap {

void RowBuilder::add(std::int64_t coef, VarId var) {
  for (auto& t : terms_) {
    if (t.var == var) {
      t.coef += coef;
      return;
    }
  }
  terms_.push_back({coef, var});
}

void RowBuilder::add_literal(std::int64_t coef, VarId var, bool positive) {
  if (positive) {
    add(coef, var);
  } else {
    add_constant(coef);
    add(-coef, var);
  }
}

LinearConstraint RowBuilder::build(Sense sense, std::int64_t rhs) const {
  LinearConstraint row;
  row.sense = sense;
  row.rhs = rhs - constant_;
  for (const auto& t : terms_)
    if (t.coef != 0) row.terms.push_back(t);
  return row;
}

VarId IlpModel::atom_var(AtomId atom) {
  auto [it, inserted] = atom_index_.emplace(atom, static_cast<VarId>(vars.size()));
  if (inserted) vars.push_back({IlpVar::Kind::kAtom, atom, 0, 1, {}});
  return it->second;
}

std::optional<VarId> IlpModel::find_atom_var(AtomId atom) const {
  auto it = atom_index_.find(atom);
  if (it == atom_index_.end()) return std::nullopt;
  return it->second;
}

VarId IlpModel::add_aux(std::int64_t lower, std::int64_t upper, OriginKey origin) {
  VarId v = static_cast<VarId>(vars.size());
  vars.push_back({IlpVar::Kind::kAux, next_aux_id_++, lower, upper, std::move(origin)});
  return v;
}

void IlpModel::add_constraint(LinearConstraint row) {
  for (const auto& t : row.terms)
    if (t.var >= vars.size()) throw std::out_of_range("constraint references unknown variable");
  constraints.push_back(std::move(row));
}

void IlpModel::add_objective(double weight, VarId var) {
  if (var >= vars.size() || vars[var].kind != IlpVar::Kind::kAux)
    throw std::invalid_argument("objective terms must reference aux variables");
  objective.push_back({weight, var});
}

std::size_t IlpModel::aux_count() const {
  return static_cast<std::size_t>(std::count_if(
      vars.begin(), vars.end(), [](const IlpVar& v) { return v.kind == IlpVar::Kind::kAux; }));
}

void IlpModel::rebuild_index() {
  atom_index_.clear();
  next_aux_id_ = 0;
  for (VarId v = 0; v < vars.size(); ++v) {
    if (vars[v].kind == IlpVar::Kind::kAtom)
      atom_index_.emplace(vars[v].id, v);
    else
      next_aux_id_ = std::max(next_aux_id_, vars[v].id + 1);
  }
}

void IlpModel::append(const IlpModel& other) {
  std::vector<VarId> remap(other.vars.size());
  for (VarId v = 0; v < other.vars.size(); ++v) {
    const IlpVar& src = other.vars[v];
    if (src.kind == IlpVar::Kind::kAtom) {
      remap[v] = atom_var(src.id);
      IlpVar& dst = vars[remap[v]];
      dst.lower = std::max(dst.lower, src.lower);
      dst.upper = std::min(dst.upper, src.upper);
    } else {
      remap[v] = add_aux(src.lower, src.upper, src.origin);
    }
  }
  for (const auto& row : other.constraints) {
    LinearConstraint copy = row;
    for (auto& t : copy.terms) t.var = remap[t.var];
    constraints.push_back(std::move(copy));
  }
  for (const auto& o : other.objective) objective.push_back({o.weight, remap[o.var]});
  constant_offset += other.constant_offset;
}

void IlpModel::retire_aux(VarId var) {
  if (var >= vars.size() || vars[var].kind != IlpVar::Kind::kAux)
    throw std::invalid_argument("retire_aux expects an aux variable");
  auto references = [var](const LinearConstraint& row) {
    return std::any_of(row.terms.begin(), row.terms.end(),
                       [var](const LinearTerm& t) { return t.var == var; });
  };
  std::erase_if(constraints, references);
  std::erase_if(objective, [var](const ObjectiveTerm& o) { return o.var == var; });
  vars.erase(vars.begin() + var);
  for (auto& row : constraints)
    for (auto& t : row.terms)
      if (t.var > var) --t.var;
  for (auto& o : objective)
    if (o.var > var) --o.var;
  rebuild_index();
}

void IlpModel::canonicalize() {
  std::vector<VarId> order(vars.size());
  std::iota(order.begin(), order.end(), VarId{0});
  std::sort(order.begin(), order.end(), [&](VarId a, VarId b) {
    const IlpVar& va = vars[a];
    const IlpVar& vb = vars[b];
    if (va.kind != vb.kind) return va.kind == IlpVar::Kind::kAtom;
    if (va.kind == IlpVar::Kind::kAtom) return va.id < vb.id;
    return std::tie(va.origin, va.id) < std::tie(vb.origin, vb.id);
  });
  std::vector<VarId> remap(vars.size());
  std::vector<IlpVar> sorted;
  sorted.reserve(vars.size());
  std::uint32_t aux = 0;
  for (VarId v : order) {
    remap[v] = static_cast<VarId>(sorted.size());
    sorted.push_back(vars[v]);
    if (sorted.back().kind == IlpVar::Kind::kAux) sorted.back().id = aux++;
  }
  vars = std::move(sorted);

  for (auto& row : constraints) {
    for (auto& t : row.terms) t.var = remap[t.var];
    std::sort(row.terms.begin(), row.terms.end(),
              [](const LinearTerm& a, const LinearTerm& b) { return a.var < b.var; });
  }
  auto row_key = [](const LinearConstraint& r) {
    return std::tie(r.origin, r.ordinal, r.rhs, r.sense);
  };
  std::stable_sort(constraints.begin(), constraints.end(),
                   [&](const LinearConstraint& a, const LinearConstraint& b) {
                     if (row_key(a) != row_key(b)) return row_key(a) < row_key(b);
                     return std::lexicographical_compare(
                         a.terms.begin(), a.terms.end(), b.terms.begin(), b.terms.end(),
                         [](const LinearTerm& x, const LinearTerm& y) {
                           return std::tie(x.var, x.coef) < std::tie(y.var, y.coef);
                         });
                   });

  for (auto& o : objective) o.var = remap[o.var];
  std::stable_sort(objective.begin(), objective.end(),
                   [](const ObjectiveTerm& a, const ObjectiveTerm& b) { return a.var < b.var; });
  rebuild_index();
}

OriginKey clause_origin(const GroundClause& g) {
  OriginKey key{0, static_cast<std::int64_t>(g.formula_id)};
  auto lits = g.key();
  key.insert(key.end(), lits.begin(), lits.end());
  return key;
}

void translate_clause(const GroundClause& g, IlpModel& model) {
  OriginKey origin = clause_origin(g);
  RowBuilder row;
  for (const auto& lit : g.literals) row.add_literal(1, model.atom_var(lit.atom), lit.positive);

  LinearConstraint built;
  if (g.weight.is_hard()) {
    built = row.build(Sense::kGreaterEqual, 1);
  } else {
    const double w = g.weight.value();
    VarId z = model.add_aux(0, 1, origin);
    if (w > 0) {
      row.add(-1, z);
      built = row.build(Sense::kGreaterEqual, 0);
    } else {
      row.add(-static_cast<std::int64_t>(g.literals.size()), z);
      built = row.build(Sense::kLessEqual, 0);
    }
    model.add_objective(w * static_cast<double>(g.multiplicity), z);
  }
  built.origin = std::move(origin);
  model.add_constraint(std::move(built));
}

void evidence_constraints(const EvidenceSet& evidence, IlpModel& model) {
  for (auto& v : model.vars) {
    if (v.kind != IlpVar::Kind::kAtom) continue;
    if (auto value = evidence.value(v.id)) {
      if (*value)
        v.lower = 1;
      else
        v.upper = 0;
    }
  }
}

}  // namespace cpamap
