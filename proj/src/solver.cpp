#include "cpamap/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace cpamap {

const char* to_string(Solution::Status status) {
  switch (status) {
    case Solution::Status::kOptimal:
      return "optimal";
    case Solution::Status::kGapReached:
      return "gap_reached";
    case Solution::Status::kInfeasible:
      return "infeasible";
    case Solution::Status::kLimit:
      return "limit";
  }
  return "unknown";
}

bool gap_closed(double incumbent, double bound, double gap) {
  const double tolerance = 1e-10 * std::max(1.0, std::abs(incumbent));
  if (bound <= incumbent + tolerance) return true;
  if (gap <= 0.0) return false;
  const bool same_sign = (incumbent >= 0 && bound >= 0) || (incumbent <= 0 && bound <= 0);
  return same_sign && bound - incumbent <= gap * std::min(std::abs(incumbent), std::abs(bound));
}

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if (a % b != 0 && a < 0) --q;
  return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if (a % b != 0 && a > 0) ++q;
  return q;
}

class BranchAndBound {
 public:
  BranchAndBound(const IlpModel& model, const SolveOptions& options)
      : model_(model), options_(options) {
    build();
  }

  Solution run() {
    Solution out;
    if (root_infeasible_ || !fix_root()) {
      out.status = Solution::Status::kInfeasible;
      return out;
    }
    root_bound_ = current_bound();
    search(0);

    out.nodes = nodes_;
    out.has_incumbent = have_incumbent_;
    if (have_incumbent_) {
      out.assignment = incumbent_;
      out.objective = incumbent_value_;
    }
    if (hit_limit_) {
      out.status = Solution::Status::kLimit;
      out.bound = root_bound_;
      return out;
    }
    if (!have_incumbent_) {
      out.status = Solution::Status::kInfeasible;
      return out;
    }
    out.bound = std::max(incumbent_value_, pruned_bound_);
    out.status = gap_closed(incumbent_value_, out.bound, 0.0) ? Solution::Status::kOptimal
                                                              : Solution::Status::kGapReached;
    return out;
  }

 private:
  struct Row {
    std::vector<std::pair<std::uint32_t, std::int64_t>> atoms;  // (local atom, coef)
    int aux = -1;
    std::int64_t aux_coef = 0;
    std::int64_t rhs = 0;  // atoms + aux_coef * z >= rhs
    std::int64_t max_activity = 0;
  };

  struct Aux {
    VarId var = 0;
    std::int64_t lower = 0;
    std::int64_t upper = 0;
    double weight = 0.0;
    std::vector<std::uint32_t> rows;
    std::int64_t value = 0;
    double contribution = 0.0;
    bool infeasible = false;
  };

  void build() {
    const std::size_t n = model_.vars.size();
    local_atom_.assign(n, -1);
    local_aux_.assign(n, -1);
    for (VarId v = 0; v < n; ++v) {
      const IlpVar& var = model_.vars[v];
      if (var.lower > var.upper) root_infeasible_ = true;
      if (var.kind == IlpVar::Kind::kAtom) {
        if (var.lower < 0 || var.upper > 1)
          throw std::invalid_argument("atom variables must be binary");
        local_atom_[v] = static_cast<int>(atom_var_.size());
        atom_var_.push_back(v);
      } else {
        local_aux_[v] = static_cast<int>(aux_.size());
        aux_.push_back({v, var.lower, var.upper, 0.0, {}, 0, 0.0, false});
      }
    }
    for (const auto& o : model_.objective) {
      if (local_aux_[o.var] < 0) throw std::invalid_argument("objective must reference aux vars");
      aux_[local_aux_[o.var]].weight += o.weight;
    }

    occurrences_.assign(atom_var_.size(), {});
    for (const auto& c : model_.constraints) {
      Row row;
      const std::int64_t sign = c.sense == Sense::kGreaterEqual ? 1 : -1;
      row.rhs = sign * c.rhs;
      for (const auto& t : c.terms) {
        const std::int64_t coef = sign * t.coef;
        if (local_aux_[t.var] >= 0) {
          if (row.aux >= 0) throw std::invalid_argument("rows may reference at most one aux var");
          row.aux = local_aux_[t.var];
          row.aux_coef = coef;
        } else {
          row.atoms.emplace_back(static_cast<std::uint32_t>(local_atom_[t.var]), coef);
          row.max_activity += std::max<std::int64_t>(coef, 0);
        }
      }
      const auto r = static_cast<std::uint32_t>(rows_.size());
      for (const auto& [a, coef] : row.atoms) occurrences_[a].emplace_back(r, coef);
      if (row.aux >= 0) {
        aux_[row.aux].rows.push_back(r);
      } else if (row.max_activity < row.rhs) {
        ++violated_rows_;
      }
      rows_.push_back(std::move(row));
    }

    values_.assign(atom_var_.size(), -1);
    aux_stamp_.assign(aux_.size(), 0);
    for (std::size_t k = 0; k < aux_.size(); ++k) {
      refresh_aux(k);
      bound_sum_ += aux_[k].contribution;
    }

    // Most-constrained first, ties by canonical index.
    order_.resize(atom_var_.size());
    std::iota(order_.begin(), order_.end(), 0u);
    std::stable_sort(order_.begin(), order_.end(), [&](std::uint32_t a, std::uint32_t b) {
      return occurrences_[a].size() > occurrences_[b].size();
    });

    // Value ordering: the value that loosens the aux bounds the objective
    // rewards; hard rows break ties.
    preferred_.assign(atom_var_.size(), 0);
    for (std::uint32_t a = 0; a < atom_var_.size(); ++a) {
      double score = 0.0;
      std::int64_t hard_score = 0;
      for (const auto& [r, coef] : occurrences_[a]) {
        const Row& row = rows_[r];
        if (row.aux < 0) {
          hard_score += coef;
          continue;
        }
        const double w = aux_[row.aux].weight;
        const double scaled = static_cast<double>(coef) / std::abs(static_cast<double>(row.aux_coef));
        if (row.aux_coef < 0 && w > 0) score += w * scaled;
        if (row.aux_coef > 0 && w < 0) score += -w * scaled;
      }
      preferred_[a] = score > 0 || (score == 0 && hard_score > 0) ? 1 : 0;
    }
  }

  void refresh_aux(std::size_t k) {
    Aux& aux = aux_[k];
    std::int64_t lo = aux.lower;
    std::int64_t hi = aux.upper;
    for (std::uint32_t r : aux.rows) {
      const Row& row = rows_[r];
      if (row.aux_coef > 0)
        lo = std::max(lo, ceil_div(row.rhs - row.max_activity, row.aux_coef));
      else
        hi = std::min(hi, floor_div(row.max_activity - row.rhs, -row.aux_coef));
    }
    const bool infeasible = lo > hi;
    if (infeasible != aux.infeasible) infeasible_aux_ += infeasible ? 1 : -1;
    aux.infeasible = infeasible;
    aux.value = aux.weight > 0 ? hi : lo;
    aux.contribution = infeasible ? 0.0 : aux.weight * static_cast<double>(aux.value);
  }

  void set_value(std::uint32_t a, int value) {
    const int old = values_[a];
    values_[a] = static_cast<std::int8_t>(value);
    ++stamp_;
    // Update every row first; an aux var may sit in several of them.
    for (const auto& [r, coef] : occurrences_[a]) {
      Row& row = rows_[r];
      const std::int64_t before = row.max_activity;
      const std::int64_t relaxed = std::max<std::int64_t>(coef, 0);
      if (value < 0)
        row.max_activity += relaxed - coef * old;
      else
        row.max_activity += coef * value - relaxed;
      if (row.aux < 0) {
        const bool was = before < row.rhs;
        const bool now = row.max_activity < row.rhs;
        if (was != now) violated_rows_ += now ? 1 : -1;
      }
    }
    for (const auto& [r, coef] : occurrences_[a]) {
      const int k = rows_[r].aux;
      if (k < 0 || aux_stamp_[k] == stamp_) continue;
      aux_stamp_[k] = stamp_;
      const double old_contribution = aux_[k].contribution;
      refresh_aux(static_cast<std::size_t>(k));
      bound_sum_ += aux_[k].contribution - old_contribution;
    }
  }

  bool conflict() const { return violated_rows_ > 0 || infeasible_aux_ > 0; }

  /// Assigns and unit-propagates hard rows. Returns false on conflict.
  bool assign(std::uint32_t a, int value) {
    std::vector<std::uint32_t> queue{a};
    set_value(a, value);
    trail_.push_back(a);
    while (!queue.empty() && !conflict()) {
      std::uint32_t x = queue.back();
      queue.pop_back();
      for (const auto& [r, coef] : occurrences_[x]) {
        const Row& row = rows_[r];
        if (row.aux >= 0) continue;
        const std::int64_t slack = row.max_activity - row.rhs;
        if (slack < 0) return false;
        for (const auto& [y, c] : row.atoms) {
          if (values_[y] >= 0 || std::abs(c) <= slack) continue;
          set_value(y, c > 0 ? 1 : 0);
          trail_.push_back(y);
          queue.push_back(y);
          if (conflict()) return false;
        }
      }
    }
    return !conflict();
  }

  void undo_to(std::size_t mark) {
    while (trail_.size() > mark) {
      set_value(trail_.back(), -1);
      trail_.pop_back();
    }
  }

  bool fix_root() {
    if (conflict()) return false;
    // Fix every bounded var before propagating, so propagation cannot pick
    // the opposite value for one of them.
    for (std::uint32_t a = 0; a < atom_var_.size(); ++a) {
      const IlpVar& var = model_.vars[atom_var_[a]];
      if (var.lower != var.upper) continue;
      set_value(a, static_cast<int>(var.lower));
      trail_.push_back(a);
    }
    if (conflict()) return false;
    for (std::uint32_t a : std::vector<std::uint32_t>(trail_)) {
      for (const auto& [r, coef] : occurrences_[a]) {
        const Row& row = rows_[r];
        if (row.aux >= 0) continue;
        const std::int64_t slack = row.max_activity - row.rhs;
        for (const auto& [y, c] : row.atoms)
          if (values_[y] < 0 && std::abs(c) > slack && !assign(y, c > 0 ? 1 : 0)) return false;
      }
    }
    // Rows that are tight before any decision.
    for (std::uint32_t r = 0; r < rows_.size(); ++r) {
      const Row& row = rows_[r];
      if (row.aux >= 0 || row.atoms.empty()) continue;
      const std::int64_t slack = row.max_activity - row.rhs;
      for (const auto& [y, c] : row.atoms)
        if (values_[y] < 0 && std::abs(c) > slack && !assign(y, c > 0 ? 1 : 0)) return false;
    }
    return !conflict();
  }

  double current_bound() {
    if ((nodes_ & 511) == 0) {
      bound_sum_ = 0.0;
      for (const auto& aux : aux_) bound_sum_ += aux.contribution;
    }
    return model_.constant_offset + bound_sum_;
  }

  void search(std::size_t cursor) {
    if (hit_limit_) return;
    if (++nodes_ > options_.node_limit) {
      hit_limit_ = true;
      return;
    }
    const double bound = current_bound();
    if (have_incumbent_ && gap_closed(incumbent_value_, bound, options_.gap)) {
      pruned_bound_ = std::max(pruned_bound_, bound);
      return;
    }
    while (cursor < order_.size() && values_[order_[cursor]] >= 0) ++cursor;
    if (cursor == order_.size()) {
      record_leaf();
      return;
    }
    const std::uint32_t a = order_[cursor];
    const int first = preferred_[a];
    for (int value : {first, 1 - first}) {
      const std::size_t mark = trail_.size();
      if (assign(a, value)) search(cursor + 1);
      undo_to(mark);
      if (hit_limit_) return;
    }
  }

  void record_leaf() {
    double value = model_.constant_offset;
    for (const auto& aux : aux_) value += aux.weight * static_cast<double>(aux.value);
    if (have_incumbent_ && value <= incumbent_value_) return;
    have_incumbent_ = true;
    incumbent_value_ = value;
    incumbent_.assign(model_.vars.size(), 0);
    for (std::uint32_t a = 0; a < atom_var_.size(); ++a) incumbent_[atom_var_[a]] = values_[a];
    for (const auto& aux : aux_) incumbent_[aux.var] = aux.value;
  }

  const IlpModel& model_;
  SolveOptions options_;

  std::vector<int> local_atom_;
  std::vector<int> local_aux_;
  std::vector<VarId> atom_var_;
  std::vector<Aux> aux_;
  std::vector<Row> rows_;
  std::vector<std::vector<std::pair<std::uint32_t, std::int64_t>>> occurrences_;
  std::vector<std::uint32_t> order_;
  std::vector<int> preferred_;

  std::vector<std::int8_t> values_;
  std::vector<std::uint32_t> trail_;
  std::vector<std::uint64_t> aux_stamp_;
  std::uint64_t stamp_ = 0;
  long violated_rows_ = 0;
  long infeasible_aux_ = 0;
  double bound_sum_ = 0.0;
  bool root_infeasible_ = false;

  std::uint64_t nodes_ = 0;
  bool hit_limit_ = false;
  double root_bound_ = 0.0;
  double pruned_bound_ = -std::numeric_limits<double>::infinity();
  bool have_incumbent_ = false;
  double incumbent_value_ = 0.0;
  std::vector<std::int64_t> incumbent_;
};

}  // namespace

Solution solve_ilp(const IlpModel& model, const SolveOptions& options) {
  if (!(options.gap >= 0.0 && options.gap < 1.0))
    throw std::invalid_argument("gap must lie in [0, 1)");
  return BranchAndBound(model, options).run();
}

Solution solve_ilp(const IlpModel& model, double gap, std::uint64_t seed) {
  SolveOptions options;
  options.gap = gap;
  options.seed = seed;
  return solve_ilp(model, options);
}

// ---------------------------------------------------------------------------

BruteForceResult brute_force_map(const MlnModel& model, const EvidenceSet& evidence,
                                 std::size_t max_free_atoms) {
  std::vector<AtomId> free_atoms;
  for (AtomId a = 0; a < model.atom_count(); ++a)
    if (!evidence.is_fixed(a)) free_atoms.push_back(a);
  if (free_atoms.size() > max_free_atoms)
    throw std::length_error("brute_force_map: " + std::to_string(free_atoms.size()) +
                            " free atoms exceed the limit of " + std::to_string(max_free_atoms));

  struct Flat {
    std::vector<GroundLiteral> literals;
    bool hard;
    double weight;
  };
  std::vector<Flat> ground;
  for (const auto& clause : model.clauses) {
    for_each_grounding(model, clause, [&](std::span<const ConstIndex> binding) {
      Flat g{{}, clause.weight.is_hard(), clause.weight.is_soft() ? clause.weight.value() : 0.0};
      for (const auto& lit : clause.literals)
        g.literals.push_back({ground_atom(model, lit, binding), lit.positive});
      ground.push_back(std::move(g));
    });
  }

  Interpretation world(model.atom_count());
  for (AtomId a : evidence.fixed_true()) world.set(a, true);

  bool found = false;
  double best_weight = 0.0;
  std::vector<AtomId> best_true;
  Interpretation best;
  const std::uint64_t masks = std::uint64_t{1} << free_atoms.size();
  for (std::uint64_t mask = 0; mask < masks; ++mask) {
    for (std::size_t i = 0; i < free_atoms.size(); ++i) world.set(free_atoms[i], (mask >> i) & 1);
    double weight = 0.0;
    bool feasible = true;
    for (const auto& g : ground) {
      bool sat = false;
      for (const auto& l : g.literals) {
        if (world[l.atom] == l.positive) {
          sat = true;
          break;
        }
      }
      if (g.hard) {
        if (!sat) {
          feasible = false;
          break;
        }
      } else if (sat) {
        weight += g.weight;
      }
    }
    if (!feasible) continue;
    if (found && weight < best_weight - 1e-12) continue;
    std::vector<AtomId> true_atoms = world.true_atoms();
    if (found && std::abs(weight - best_weight) <= 1e-12 &&
        std::pair(true_atoms.size(), true_atoms) >= std::pair(best_true.size(), best_true))
      continue;
    found = true;
    best_weight = weight;
    best_true = std::move(true_atoms);
    best = world;
  }
  if (!found) throw UnsatisfiableError("no world satisfies the hard clauses");
  return {best, best_weight};
}

}  // namespace cpamap
