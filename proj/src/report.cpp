#include "cpamap/report.hpp"

#include <sstream>

namespace cpamap {

RunReport make_report(const MapResult& result) {
  RunReport r;
  r.iterations = result.iterations;
  r.converged = result.converged;
  r.optimal = result.optimal;
  r.groundings_total = result.groundings_total;
  r.groundings_translated = result.groundings_translated;
  for (const auto& s : result.per_iteration_stats) {
    r.constraints_without_cpa += s.constraints_without_cpa;
    r.constraints_with_cpa += s.constraints_with_cpa;
    r.time_ground += s.ground_seconds;
    r.time_assemble += s.assemble_seconds;
    r.time_solve += s.solve_seconds;
  }
  r.ilp_constraints = result.ilp.constraints.size();
  r.ilp_variables = result.ilp.vars.size();
  r.weight = result.weight;
  return r;
}

std::string format_stats(const RunReport& report) {
  std::ostringstream out;
  out << "iterations=" << report.iterations << '\n'
      << "converged=" << (report.converged ? 1 : 0) << '\n'
      << "optimal=" << (report.optimal ? 1 : 0) << '\n'
      << "groundings_total=" << report.groundings_total << '\n'
      << "groundings_translated=" << report.groundings_translated << '\n'
      << "constraints_without_cpa=" << report.constraints_without_cpa << '\n'
      << "constraints_with_cpa=" << report.constraints_with_cpa << '\n'
      << "ilp_constraints=" << report.ilp_constraints << '\n'
      << "ilp_variables=" << report.ilp_variables << '\n'
      << "time_parse=" << report.time_parse << '\n'
      << "time_ground=" << report.time_ground << '\n'
      << "time_assemble=" << report.time_assemble << '\n'
      << "time_solve=" << report.time_solve << '\n'
      << "time_total=" << report.time_total << '\n'
      << "weight=" << format_weight(report.weight) << '\n';
  return out.str();
}

}  // namespace cpamap
