#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cpamap/solver.hpp"

namespace cpamap {

namespace {

std::string var_name(const IlpVar& v) {
  return (v.kind == IlpVar::Kind::kAtom ? "x" : "z") + std::to_string(v.id);
}

// Wraps after a fixed number of terms; LP readers cap line length.
constexpr std::size_t kTermsPerLine = 8;

void write_term(std::ostringstream& out, std::size_t index, bool negative,
                const std::string& magnitude, const std::string& name) {
  if (index > 0 && index % kTermsPerLine == 0) out << "\n ";
  if (index == 0)
    out << (negative ? "-" : "");
  else
    out << (negative ? " - " : " + ");
  if (magnitude != "1") out << magnitude << ' ';
  out << name;
}

std::string abs_text(double w) { return format_weight(w < 0 ? -w : w); }

}  // namespace

std::string export_lp(const IlpModel& model) {
  std::ostringstream out;
  out << "Maximize\n";

  std::vector<VarId> objective_order;
  std::map<VarId, double> objective_weight;
  for (const auto& o : model.objective) {
    auto [it, inserted] = objective_weight.emplace(o.var, 0.0);
    if (inserted) objective_order.push_back(o.var);
    it->second += o.weight;
  }
  std::size_t written = 0;
  for (VarId v : objective_order) {
    const double w = objective_weight[v];
    if (w == 0.0) continue;
    if (written == 0) out << ' ';
    write_term(out, written++, w < 0, abs_text(w), var_name(model.vars[v]));
  }
  if (written > 0) out << '\n';
  if (model.constant_offset != 0.0) out << "\\ offset " << format_weight(model.constant_offset) << '\n';

  if (!model.constraints.empty()) {
    out << "Subject To\n";
    for (std::size_t r = 0; r < model.constraints.size(); ++r) {
      const auto& row = model.constraints[r];
      if (row.terms.empty() && model.vars.empty()) continue;
      out << " c" << r << ": ";
      if (row.terms.empty()) out << "0 " << var_name(model.vars.front());
      std::size_t index = 0;
      for (const auto& t : row.terms) {
        const std::int64_t mag = t.coef < 0 ? -t.coef : t.coef;
        write_term(out, index++, t.coef < 0, std::to_string(mag), var_name(model.vars[t.var]));
      }
      out << (row.sense == Sense::kGreaterEqual ? " >= " : " <= ") << row.rhs << '\n';
    }
  }

  std::vector<std::string> bounds;
  std::vector<std::string> generals;
  std::vector<std::string> binaries;
  for (const auto& v : model.vars) {
    const std::string name = var_name(v);
    if (v.lower == v.upper) {
      bounds.push_back(name + " = " + std::to_string(v.lower));
    } else if (v.is_binary()) {
      if (v.lower != 0 || v.upper != 1)
        bounds.push_back(std::to_string(v.lower) + " <= " + name + " <= " + std::to_string(v.upper));
    } else if (v.lower == 0) {
      bounds.push_back(name + " <= " + std::to_string(v.upper));
    } else {
      bounds.push_back(std::to_string(v.lower) + " <= " + name + " <= " + std::to_string(v.upper));
    }
    if (v.is_binary())
      binaries.push_back(name);
    else
      generals.push_back(name);
  }
  auto section = [&](const char* title, const std::vector<std::string>& lines) {
    if (lines.empty()) return;
    out << title << '\n';
    for (const auto& l : lines) out << ' ' << l << '\n';
  };
  section("Bounds", bounds);
  section("Generals", generals);
  section("Binaries", binaries);
  out << "End\n";
  return out.str();
}

}  // namespace cpamap
