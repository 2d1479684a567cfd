#pragma once

#include <cstdint>
#include <string>

#include "cpamap/engine.hpp"

namespace cpamap {

/// Run summary printed by `cpa-map --stats`.
struct RunReport {
  std::size_t iterations = 0;
  bool converged = false;
  bool optimal = false;
  std::uint64_t groundings_total = 0;
  std::uint64_t groundings_translated = 0;
  /// Rows the translated groundings cost clause by clause / with aggregation.
  std::uint64_t constraints_without_cpa = 0;
  std::uint64_t constraints_with_cpa = 0;
  /// Rows in the final ILP; equals one of the two above depending on mode.
  std::uint64_t ilp_constraints = 0;
  std::uint64_t ilp_variables = 0;
  double time_parse = 0.0;
  double time_ground = 0.0;
  double time_assemble = 0.0;
  double time_solve = 0.0;
  double time_total = 0.0;
  double weight = 0.0;
};

RunReport make_report(const MapResult& result);

/// key=value, one per line, fixed key order.
std::string format_stats(const RunReport& report);

}  // namespace cpamap
