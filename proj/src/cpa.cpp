#include "cpamap/cpa.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

namespace cpamap {

std::int64_t AggregatedGroup::size() const {
  return std::accumulate(multiplicity.begin(), multiplicity.end(), std::int64_t{0});
}

std::vector<GroundClause> AggregatedGroup::members() const {
  std::vector<GroundClause> out;
  for (std::size_t i = 0; i < varying.size(); ++i) {
    GroundClause g;
    g.literals.push_back(varying[i]);
    g.literals.insert(g.literals.end(), context.begin(), context.end());
    g.weight = WeightTag::soft(weight);
    g.formula_id = formula_id;
    g.multiplicity = multiplicity[i];
    out.push_back(std::move(g));
  }
  return out;
}

namespace {

using Projection = std::vector<std::int64_t>;

Projection project_without(const GroundClause& g, std::size_t column) {
  Projection p;
  p.reserve(g.literals.size() - 1);
  for (std::size_t i = 0; i < g.literals.size(); ++i)
    if (i != column) p.push_back(g.literals[i].code());
  return p;
}

void partition_bucket(const std::vector<const GroundClause*>& rows, AggregationPlan& plan) {
  const std::size_t width = rows.front()->literals.size();
  std::size_t best_column = 0;
  std::size_t best_count = 0;
  for (std::size_t k = 0; k < width; ++k) {
    std::set<Projection> distinct;
    for (const auto* g : rows) distinct.insert(project_without(*g, k));
    if (k == 0 || distinct.size() < best_count) {
      best_column = k;
      best_count = distinct.size();
    }
  }

  std::map<Projection, std::size_t> slot;
  std::vector<std::vector<const GroundClause*>> buckets;
  for (const auto* g : rows) {
    auto [it, inserted] = slot.emplace(project_without(*g, best_column), buckets.size());
    if (inserted) buckets.emplace_back();
    buckets[it->second].push_back(g);
  }

  for (const auto& members : buckets) {
    if (members.size() == 1) {
      plan.singletons.push_back(*members.front());
      continue;
    }
    AggregatedGroup group;
    const GroundClause& first = *members.front();
    group.weight = first.weight.value();
    group.formula_id = first.formula_id;
    for (std::size_t i = 0; i < width; ++i)
      if (i != best_column) group.context.push_back(first.literals[i]);
    for (const auto* g : members) {
      group.varying.push_back(g->literals[best_column]);
      group.multiplicity.push_back(g->multiplicity);
    }
    plan.groups.push_back(std::move(group));
  }
}

}  // namespace

AggregationPlan partition_for_aggregation(std::span<const GroundClause> groundings) {
  AggregationPlan plan;
  // Positions only align within one (exact weight bits, length) bucket.
  std::map<std::tuple<std::uint64_t, std::size_t>, std::size_t> slot;
  std::vector<std::vector<const GroundClause*>> buckets;
  for (const auto& g : groundings) {
    if (g.weight.is_hard()) {
      plan.singletons.push_back(g);
      continue;
    }
    auto key = std::make_tuple(std::bit_cast<std::uint64_t>(g.weight.value()), g.literals.size());
    auto [it, inserted] = slot.emplace(key, buckets.size());
    if (inserted) buckets.emplace_back();
    buckets[it->second].push_back(&g);
  }
  for (const auto& [key, index] : slot) partition_bucket(buckets[index], plan);
  return plan;
}

std::int64_t aggregated_feature_value(const AggregatedGroup& group, const Interpretation& interp) {
  for (const auto& l : group.context)
    if (interp[l.atom] == l.positive) return group.size();
  std::int64_t count = 0;
  for (std::size_t i = 0; i < group.varying.size(); ++i)
    if (interp[group.varying[i].atom] == group.varying[i].positive) count += group.multiplicity[i];
  return count;
}

OriginKey group_origin(const AggregatedGroup& group) {
  OriginKey key{1, static_cast<std::int64_t>(group.formula_id)};
  std::vector<std::int64_t> ctx;
  for (const auto& l : group.context) ctx.push_back(l.code());
  std::sort(ctx.begin(), ctx.end());
  key.insert(key.end(), ctx.begin(), ctx.end());
  key.push_back(-1);
  std::vector<std::int64_t> var;
  for (const auto& l : group.varying) var.push_back(l.code());
  std::sort(var.begin(), var.end());
  key.insert(key.end(), var.begin(), var.end());
  return key;
}

namespace {

void add_varying(const AggregatedGroup& group, IlpModel& model, RowBuilder& row) {
  for (std::size_t i = 0; i < group.varying.size(); ++i)
    row.add_literal(group.multiplicity[i], model.atom_var(group.varying[i].atom),
                    group.varying[i].positive);
}

}  // namespace

void translate_group_positive(const AggregatedGroup& group, IlpModel& model) {
  const std::int64_t n = group.size();
  OriginKey origin = group_origin(group);
  VarId z = model.add_aux(0, n, origin);

  RowBuilder count;
  add_varying(group, model, count);
  for (const auto& l : group.context) count.add_literal(n, model.atom_var(l.atom), l.positive);
  count.add(-1, z);
  LinearConstraint row = count.build(Sense::kGreaterEqual, 0);
  row.origin = origin;
  row.ordinal = 0;
  model.add_constraint(std::move(row));

  if (!group.context.empty()) {
    RowBuilder cap;
    cap.add(1, z);
    LinearConstraint capped = cap.build(Sense::kLessEqual, n);
    capped.origin = origin;
    capped.ordinal = 1;
    model.add_constraint(std::move(capped));
  }
  model.add_objective(group.weight, z);
}

void translate_group_negative(const AggregatedGroup& group, IlpModel& model) {
  const std::int64_t n = group.size();
  OriginKey origin = group_origin(group);
  VarId z = model.add_aux(0, n, origin);

  RowBuilder count;
  add_varying(group, model, count);
  count.add(-1, z);
  LinearConstraint row = count.build(Sense::kLessEqual, 0);
  row.origin = origin;
  row.ordinal = 0;
  model.add_constraint(std::move(row));

  std::uint32_t ordinal = 1;
  for (const auto& l : group.context) {
    RowBuilder force;
    force.add_literal(n, model.atom_var(l.atom), l.positive);
    force.add(-1, z);
    LinearConstraint forced = force.build(Sense::kLessEqual, 0);
    forced.origin = origin;
    forced.ordinal = ordinal++;
    model.add_constraint(std::move(forced));
  }
  model.add_objective(group.weight, z);
}

std::size_t aggregated_row_count(const AggregatedGroup& group) {
  if (group.weight > 0) return group.context.empty() ? 1 : 2;
  return 1 + group.context.size();
}

bool worth_aggregating(const AggregatedGroup& group) {
  return aggregated_row_count(group) <= group.varying.size();
}

std::size_t compile_plan(const AggregationPlan& plan, IlpModel& model) {
  std::size_t rows = 0;
  for (const auto& group : plan.groups) {
    if (worth_aggregating(group)) {
      if (group.weight > 0)
        translate_group_positive(group, model);
      else
        translate_group_negative(group, model);
      rows += aggregated_row_count(group);
    } else {
      for (const auto& g : group.members()) translate_clause(g, model);
      rows += group.varying.size();
    }
  }
  for (const auto& g : plan.singletons) translate_clause(g, model);
  return rows + plan.singletons.size();
}

std::size_t plan_row_count(const AggregationPlan& plan) {
  std::size_t rows = plan.singletons.size();
  for (const auto& group : plan.groups)
    rows += worth_aggregating(group) ? aggregated_row_count(group) : group.varying.size();
  return rows;
}

}  // namespace cpamap
