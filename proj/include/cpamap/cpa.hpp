#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cpamap/ilp.hpp"
#include "cpamap/interpretation.hpp"
#include "cpamap/mln_model.hpp"

namespace cpamap {

/// Ground clauses l_i v c sharing context c and one weight. Each varying
/// literal carries the multiplicity of its clause, so the group stands for
/// size() groundings.
struct AggregatedGroup {
  std::vector<GroundLiteral> context;  // empty: c is the constant false
  std::vector<GroundLiteral> varying;
  std::vector<std::uint32_t> multiplicity;  // parallel to varying
  double weight = 0.0;
  std::uint32_t formula_id = 0;

  std::int64_t size() const;
  /// The member clauses, l_i v c in context order after l_i.
  std::vector<GroundClause> members() const;
};

struct AggregationPlan {
  std::vector<AggregatedGroup> groups;
  std::vector<GroundClause> singletons;
};

/// Greedy estimate of the best single-column aggregation. Clauses are
/// bucketed by weight and length; within a bucket the column whose removal
/// leaves the fewest distinct projections is the varying column. Hard
/// clauses are never aggregated.
AggregationPlan partition_for_aggregation(std::span<const GroundClause> groundings);

/// |G| if the context is satisfied, else the number of satisfied varying
/// literals (weighted by multiplicity).
std::int64_t aggregated_feature_value(const AggregatedGroup& group, const Interpretation& interp);

OriginKey group_origin(const AggregatedGroup& group);

/// Counting rows for w > 0: sum(l_i) + n * sum(c) >= z, plus z <= n when c
/// is non-empty. z is integer in [0, n].
void translate_group_positive(const AggregatedGroup& group, IlpModel& model);

/// Counting rows for w < 0: sum(l_i) <= z and n * l <= z for every literal
/// l of c. z is integer in [0, n].
void translate_group_negative(const AggregatedGroup& group, IlpModel& model);

/// Rows translate_group_{positive,negative} would emit for `group`.
std::size_t aggregated_row_count(const AggregatedGroup& group);

/// Translates a plan. Groups whose counting rows would outnumber their
/// member clauses are translated clause by clause instead. Returns the
/// number of rows emitted.
std::size_t compile_plan(const AggregationPlan& plan, IlpModel& model);

/// Row count compile_plan would produce, without building anything.
std::size_t plan_row_count(const AggregationPlan& plan);

/// True when compile_plan aggregates `group` rather than expanding it.
bool worth_aggregating(const AggregatedGroup& group);

}  // namespace cpamap
