#include "cpamap/engine.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace cpamap {

void EngineConfig::validate() const {
  if (!(gap >= 0.0 && gap < 1.0)) throw std::invalid_argument("gap must lie in [0, 1)");
  if (workers == 0) throw std::invalid_argument("workers must be at least 1");
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<std::int64_t> group_key(const AggregatedGroup& group) {
  std::vector<std::int64_t> key{std::bit_cast<std::int64_t>(group.weight)};
  for (const auto& l : group.context) key.push_back(l.code());
  std::sort(key.begin() + 1, key.end());
  return key;
}

}  // namespace

CpiEngine::CpiEngine(const MlnModel& model, const EvidenceSet& evidence, EngineConfig config)
    : model_(model),
      evidence_(evidence),
      config_(config),
      interp_(initial_interpretation(model, evidence)),
      formulas_(model.clauses.size()),
      visits_(new std::atomic<std::uint32_t>[model.clauses.size()]) {
  config_.validate();
  for (std::size_t f = 0; f < model.clauses.size(); ++f) visits_[f] = 0;
  for_each_formula_parallel([&](std::uint32_t f) {
    formulas_[f].census = census(model_, model_.clauses[f], evidence_);
  });
  for (const auto& state : formulas_) groundings_total_ += state.census.total;
}

template <typename Fn>
void CpiEngine::for_each_formula_parallel(Fn&& fn) {
  // Workers pop formulas off a shared stack; the first failure by formula id
  // is rethrown once every worker has stopped.
  std::vector<std::uint32_t> stack(model_.clauses.size());
  for (std::size_t i = 0; i < stack.size(); ++i)
    stack[i] = static_cast<std::uint32_t>(stack.size() - 1 - i);
  std::mutex mutex;
  std::vector<std::exception_ptr> errors(stack.size());

  auto work = [&] {
    for (;;) {
      std::uint32_t f;
      {
        std::lock_guard lock(mutex);
        if (stack.empty()) return;
        f = stack.back();
        stack.pop_back();
      }
      try {
        fn(f);
      } catch (...) {
        errors[f] = std::current_exception();
      }
    }
  };

  const std::size_t threads = std::min(config_.workers, stack.size());
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void CpiEngine::merge_into_groups(FormulaState& state, AggregationPlan plan) {
  for (auto& group : plan.groups) {
    auto key = group_key(group);
    auto it = state.group_index.find(key);
    if (it == state.group_index.end()) {
      state.group_index.emplace(std::move(key), state.groups.size());
      state.groups.push_back(std::move(group));
      continue;
    }
    AggregatedGroup& existing = state.groups[it->second];
    existing.varying.insert(existing.varying.end(), group.varying.begin(), group.varying.end());
    existing.multiplicity.insert(existing.multiplicity.end(), group.multiplicity.begin(),
                                 group.multiplicity.end());
  }
  for (auto& g : plan.singletons) state.singles.push_back(std::move(g));

  // Retire everything emitted earlier for this formula and emit it afresh.
  AggregationPlan all;
  all.groups = state.groups;
  all.singletons = state.singles;
  state.fragment = IlpModel();
  compile_plan(all, state.fragment);
}

CpiEngine::WorkerResult CpiEngine::process_formula(std::uint32_t f, const RelationStore& store) {
  visits_[f].fetch_add(1, std::memory_order_relaxed);
  FormulaState& state = formulas_[f];
  ViolationSet active = find_active_groundings(model_, model_.clauses[f], store, evidence_);

  WorkerResult result;
  result.found = active.groundings.size();
  std::vector<GroundClause> fresh;
  for (auto& g : active.groundings) {
    if (!state.translated.insert(g.key()).second) continue;
    if (g.weight.is_soft()) state.translated_multiplicity += g.multiplicity;
    fresh.push_back(std::move(g));
  }
  result.added = fresh.size();
  if (fresh.empty()) return result;

  AggregationPlan plan = partition_for_aggregation(fresh);
  result.rows_without = fresh.size();
  result.rows_with = plan_row_count(plan);

  if (!config_.use_cpa) {
    for (const auto& g : fresh) translate_clause(g, state.fragment);
  } else if (config_.merge_groups_across_iterations) {
    merge_into_groups(state, std::move(plan));
  } else {
    compile_plan(plan, state.fragment);
  }
  return result;
}

double CpiEngine::constant_offset() const {
  // Groundings outside the ILP: evidence-satisfied ones always count; for
  // positive weights the untranslated open ones are currently satisfied and
  // counted optimistically, for negative weights they count zero.
  double offset = 0.0;
  for (std::size_t f = 0; f < formulas_.size(); ++f) {
    const WeightTag& weight = model_.clauses[f].weight;
    if (weight.is_hard()) continue;
    const FormulaCensus& c = formulas_[f].census;
    offset += weight.value() * static_cast<double>(c.always_satisfied);
    if (weight.value() > 0)
      offset += weight.value() *
                static_cast<double>(static_cast<std::int64_t>(c.open()) -
                                    formulas_[f].translated_multiplicity);
  }
  return offset;
}

void CpiEngine::adopt(const Solution& solution) {
  Interpretation next = interp_;
  for (AtomId a = 0; a < model_.atom_count(); ++a) next.set(a, evidence_.value(a).value_or(false));
  for (VarId v = 0; v < ilp_.vars.size(); ++v) {
    const IlpVar& var = ilp_.vars[v];
    if (var.kind == IlpVar::Kind::kAtom && !evidence_.is_fixed(var.id))
      next.set(var.id, solution.assignment[v] != 0);
  }
  next.bump_generation();
  interp_ = std::move(next);
}

std::size_t CpiEngine::run_iteration() {
  IterationStats stats;
  stats.iteration = stats_.size() + 1;

  auto start = Clock::now();
  const RelationStore store(model_, interp_);
  std::vector<WorkerResult> results(formulas_.size());
  for_each_formula_parallel([&](std::uint32_t f) { results[f] = process_formula(f, store); });
  for (const auto& r : results) {
    stats.groundings_found += r.found;
    stats.groundings_new += r.added;
    stats.constraints_without_cpa += r.rows_without;
    stats.constraints_with_cpa += r.rows_with;
  }
  stats.ground_seconds = seconds_since(start);

  // A fixpoint reached before anything was translated still gets an ILP, so
  // the exported model carries the offset for the satisfied groundings.
  if (stats.groundings_new > 0 || !assembled_) {
    start = Clock::now();
    ilp_ = IlpModel();
    for (const auto& state : formulas_) ilp_.append(state.fragment);
    ilp_.constant_offset = constant_offset();
    evidence_constraints(evidence_, ilp_);
    ilp_.canonicalize();
    assembled_ = true;
    stats.assemble_seconds = seconds_since(start);
  }
  stats.ilp_constraints = ilp_.constraints.size();
  stats.ilp_variables = ilp_.vars.size();
  if (stats.groundings_new == 0) {
    stats_.push_back(stats);
    return 0;
  }

  if (config_.solver_backend == EngineConfig::Backend::kBuiltin) {
    start = Clock::now();
    SolveOptions options;
    options.gap = config_.gap;
    options.seed = config_.random_seed;
    options.node_limit = config_.node_limit;
    Solution solution = solve_ilp(ilp_, options);
    stats.solve_seconds = seconds_since(start);
    stats.solved = true;
    stats.status = solution.status;
    stats.nodes = solution.nodes;
    stats.bound = solution.bound;
    if (solution.status == Solution::Status::kInfeasible)
      throw UnsatisfiableError("the hard clauses admit no world consistent with the evidence");
    if (!solution.has_incumbent)
      throw std::runtime_error("node limit reached before any feasible solution was found");
    stats.objective = solution.objective;
    adopt(solution);
    last_solution_ = std::move(solution);
  }
  stats_.push_back(stats);
  return static_cast<std::size_t>(stats.groundings_new);
}

std::vector<std::uint32_t> CpiEngine::formula_visits() const {
  std::vector<std::uint32_t> out(formulas_.size());
  for (std::size_t f = 0; f < out.size(); ++f) out[f] = visits_[f].load();
  return out;
}

bool CpiEngine::is_translated(const GroundClause& g) const {
  return g.formula_id < formulas_.size() && formulas_[g.formula_id].translated.count(g.key()) > 0;
}

std::uint64_t CpiEngine::groundings_translated() const {
  std::uint64_t n = 0;
  for (const auto& state : formulas_) n += state.translated.size();
  return n;
}

MapResult solve_map(const MlnModel& model, const EvidenceSet& evidence,
                    const EngineConfig& config) {
  CpiEngine engine(model, evidence, config);
  MapResult result;
  for (;;) {
    if (config.max_iterations != 0 && engine.iterations() >= config.max_iterations) break;
    if (engine.run_iteration() == 0) {
      result.converged = true;
      break;
    }
    if (config.solver_backend == EngineConfig::Backend::kExportOnly) break;
  }
  result.interpretation = engine.interpretation();
  result.weight = interpretation_weight(model, result.interpretation);
  if (const auto& last = engine.last_solution()) {
    result.ilp_objective = last->objective;
    result.optimal = last->status == Solution::Status::kOptimal;
  } else {
    result.ilp_objective = result.weight;
  }
  result.iterations = engine.iterations();
  result.per_iteration_stats = engine.stats();
  result.groundings_total = engine.groundings_total();
  result.groundings_translated = engine.groundings_translated();
  result.ilp = engine.ilp();
  return result;
}

}  // namespace cpamap
