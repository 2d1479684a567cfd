#include "cpamap/mln_model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "cpamap/interpretation.hpp"

namespace cpamap {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) +
                         (column ? ", column " + std::to_string(column) : std::string()) + ": " +
                         what),
      line_(line),
      column_(column) {}

std::optional<ConstIndex> Domain::find(std::string_view constant) const {
  auto it = index.find(std::string(constant));
  if (it == index.end()) return std::nullopt;
  return it->second;
}

std::vector<AtomId> GroundClause::positive_atoms() const {
  std::vector<AtomId> out;
  for (const auto& l : literals)
    if (l.positive) out.push_back(l.atom);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<AtomId> GroundClause::negative_atoms() const {
  std::vector<AtomId> out;
  for (const auto& l : literals)
    if (!l.positive) out.push_back(l.atom);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::int64_t> GroundClause::key() const {
  std::vector<std::int64_t> out;
  out.reserve(literals.size());
  for (const auto& l : literals) out.push_back(l.code());
  std::sort(out.begin(), out.end());
  return out;
}

bool GroundClause::satisfied_by(const Interpretation& interp) const {
  return std::any_of(literals.begin(), literals.end(),
                     [&](const GroundLiteral& l) { return interp[l.atom] == l.positive; });
}

// ---------------------------------------------------------------------------
// MlnModel

std::optional<DomainId> MlnModel::find_domain(std::string_view name) const {
  auto it = domain_index_.find(std::string(name));
  if (it == domain_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<PredicateId> MlnModel::find_predicate(std::string_view name) const {
  auto it = predicate_index_.find(std::string(name));
  if (it == predicate_index_.end()) return std::nullopt;
  return it->second;
}

void MlnModel::finalize() {
  domain_index_.clear();
  predicate_index_.clear();
  for (DomainId d = 0; d < domains.size(); ++d) {
    auto& dom = domains[d];
    if (!domain_index_.emplace(dom.name, d).second)
      throw std::invalid_argument("duplicate domain '" + dom.name + "'");
    dom.index.clear();
    for (ConstIndex c = 0; c < dom.constants.size(); ++c)
      if (!dom.index.emplace(dom.constants[c], c).second)
        throw std::invalid_argument("duplicate constant '" + dom.constants[c] + "' in domain '" +
                                    dom.name + "'");
  }

  pred_offsets_.assign(predicates.size(), 0);
  pred_sizes_.assign(predicates.size(), 0);
  std::size_t total = 0;
  for (PredicateId p = 0; p < predicates.size(); ++p) {
    const auto& sig = predicates[p];
    if (!predicate_index_.emplace(sig.name, p).second)
      throw std::invalid_argument("duplicate predicate '" + sig.name + "'");
    std::size_t size = 1;
    for (DomainId d : sig.argument_domains) {
      if (d >= domains.size())
        throw std::invalid_argument("predicate '" + sig.name + "' uses an undeclared domain");
      size *= domains[d].constants.size();
      if (size > std::numeric_limits<AtomId>::max())
        throw std::invalid_argument("Herbrand base too large");
    }
    pred_offsets_[p] = static_cast<AtomId>(total);
    pred_sizes_[p] = size;
    total += size;
    if (total > std::numeric_limits<AtomId>::max())
      throw std::invalid_argument("Herbrand base too large");
  }
  atom_count_ = total;

  for (std::uint32_t f = 0; f < clauses.size(); ++f) {
    auto& clause = clauses[f];
    clause.formula_id = f;
    if (clause.literals.empty()) throw std::invalid_argument("empty clause");
    if (clause.variable_domains.size() != clause.variable_names.size())
      throw std::invalid_argument("clause variable tables disagree");
    if (clause.weight.is_soft() && !std::isfinite(clause.weight.value()))
      throw std::invalid_argument("non-finite soft weight");
    std::vector<bool> used(clause.variable_count(), false);
    for (const auto& lit : clause.literals) {
      if (lit.predicate >= predicates.size())
        throw std::invalid_argument("clause uses an undeclared predicate");
      const auto& sig = predicates[lit.predicate];
      if (lit.terms.size() != sig.arity())
        throw std::invalid_argument("arity mismatch for '" + sig.name + "'");
      for (std::size_t i = 0; i < lit.terms.size(); ++i) {
        const Term& t = lit.terms[i];
        DomainId d = sig.argument_domains[i];
        if (t.is_variable) {
          if (t.value >= clause.variable_count() || clause.variable_domains[t.value] != d)
            throw std::invalid_argument("variable used with inconsistent domains in '" + sig.name +
                                        "'");
          used[t.value] = true;
        } else if (t.value >= domains[d].constants.size()) {
          throw std::invalid_argument("constant outside domain in '" + sig.name + "'");
        }
      }
    }
    if (std::find(used.begin(), used.end(), false) != used.end())
      throw std::invalid_argument("clause declares a variable that no literal uses");
  }
}

AtomId MlnModel::atom_id(PredicateId predicate, std::span<const ConstIndex> args) const {
  const auto& sig = predicates[predicate];
  std::size_t index = 0;
  for (std::size_t i = 0; i < args.size(); ++i)
    index = index * domains[sig.argument_domains[i]].constants.size() + args[i];
  return pred_offsets_[predicate] + static_cast<AtomId>(index);
}

PredicateId MlnModel::predicate_of(AtomId atom) const {
  auto it = std::upper_bound(pred_offsets_.begin(), pred_offsets_.end(), atom);
  // Zero-sized predicates share an offset with their successor; skip them.
  PredicateId p = static_cast<PredicateId>(std::distance(pred_offsets_.begin(), it) - 1);
  while (pred_sizes_[p] == 0) --p;
  return p;
}

std::vector<ConstIndex> MlnModel::arguments_of(AtomId atom) const {
  PredicateId p = predicate_of(atom);
  const auto& sig = predicates[p];
  std::size_t index = atom - pred_offsets_[p];
  std::vector<ConstIndex> args(sig.arity());
  for (std::size_t i = sig.arity(); i-- > 0;) {
    std::size_t radix = domains[sig.argument_domains[i]].constants.size();
    args[i] = static_cast<ConstIndex>(index % radix);
    index /= radix;
  }
  return args;
}

std::string MlnModel::atom_name(AtomId atom) const {
  PredicateId p = predicate_of(atom);
  const auto& sig = predicates[p];
  std::string out = sig.name;
  if (sig.arity() == 0) return out;
  auto args = arguments_of(atom);
  out += '(';
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ',';
    out += domains[sig.argument_domains[i]].constants[args[i]];
  }
  out += ')';
  return out;
}

// ---------------------------------------------------------------------------
// Evidence

EvidenceSet::EvidenceSet(const MlnModel& model) : state_(model.atom_count(), State::kFree) {
  for (PredicateId p = 0; p < model.predicates.size(); ++p) {
    if (!model.predicates[p].closed_world) continue;
    AtomId begin = model.predicate_offset(p);
    for (std::size_t i = 0; i < model.predicate_atom_count(p); ++i)
      state_[begin + i] = State::kImplicitFalse;
  }
}

void EvidenceSet::set(AtomId atom, bool value) {
  State& s = state_.at(atom);
  if ((value && s == State::kFalse) || (!value && s == State::kTrue))
    throw std::invalid_argument("contradictory evidence");
  s = value ? State::kTrue : State::kFalse;
}

std::optional<bool> EvidenceSet::value(AtomId atom) const {
  switch (state_[atom]) {
    case State::kTrue:
      return true;
    case State::kFalse:
    case State::kImplicitFalse:
      return false;
    case State::kFree:
      break;
  }
  return std::nullopt;
}

std::vector<AtomId> EvidenceSet::fixed_true() const {
  std::vector<AtomId> out;
  for (std::size_t i = 0; i < state_.size(); ++i)
    if (state_[i] == State::kTrue) out.push_back(static_cast<AtomId>(i));
  return out;
}

std::vector<AtomId> EvidenceSet::fixed_false() const {
  std::vector<AtomId> out;
  for (std::size_t i = 0; i < state_.size(); ++i)
    if (state_[i] == State::kFalse || state_[i] == State::kImplicitFalse)
      out.push_back(static_cast<AtomId>(i));
  return out;
}

// ---------------------------------------------------------------------------
// Text parsing

namespace {

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

/// Character cursor over one line. Columns are 1-based.
class LineCursor {
 public:
  LineCursor(std::string_view text, std::size_t line) : text_(text), line_(line) {}

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }
  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  std::string_view ident() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
    if (start == pos_) fail("expected identifier");
    return text_.substr(start, pos_ - start);
  }
  double number() {
    skip_space();
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    if (*begin == '+') ++begin;
    double value = 0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr == begin) fail("malformed weight");
    // Reject "inf"/"nan" spellings and out-of-range literals alike.
    if (!std::isfinite(value)) fail("weight must be a finite real");
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    if (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])))
      fail("weight must be followed by whitespace");
    return value;
  }
  std::size_t column() const { return pos_ + 1; }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(line_, pos_ + 1, what); }
  [[noreturn]] void fail_at(std::size_t column, const std::string& what) const {
    throw ParseError(line_, column, what);
  }
  std::size_t line() const { return line_; }

 private:
  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

struct RawAtom {
  bool positive = true;
  std::string_view predicate;
  std::vector<std::string_view> args;
  std::vector<std::size_t> arg_columns;
  std::size_t column = 0;
};

RawAtom read_atom(LineCursor& cur, bool allow_negation) {
  RawAtom atom;
  cur.skip_space();
  atom.column = cur.column();
  if (cur.accept('!')) {
    if (!allow_negation) cur.fail("negation not allowed here");
    atom.positive = false;
  }
  atom.predicate = cur.ident();
  if (std::isdigit(static_cast<unsigned char>(atom.predicate.front())))
    cur.fail_at(atom.column, "predicate names must start with a letter");
  if (cur.accept('(')) {
    if (!cur.accept(')')) {
      do {
        cur.skip_space();
        atom.arg_columns.push_back(cur.column());
        atom.args.push_back(cur.ident());
      } while (cur.accept(','));
      cur.expect(')');
    }
  }
  return atom;
}

bool is_variable_name(std::string_view s) {
  return std::islower(static_cast<unsigned char>(s.front())) != 0;
}

std::string_view strip_comment(std::string_view line) {
  auto pos = line.find("//");
  if (pos != std::string_view::npos) line = line.substr(0, pos);
  while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back())))
    line.remove_suffix(1);
  return line;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

class MlnParser {
 public:
  MlnModel run(std::string_view text) {
    auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) parse_line(strip_comment(lines[i]), i + 1);
    return finish();
  }

 private:
  void parse_line(std::string_view line, std::size_t lineno) {
    LineCursor cur(line, lineno);
    if (cur.at_end()) return;
    char first = cur.peek();
    if (line.find('=') != std::string_view::npos) {
      parse_domain(cur);
    } else if (std::isdigit(static_cast<unsigned char>(first)) || first == '-' || first == '+' ||
               first == '.') {
      double w = cur.number();
      parse_clause(cur, WeightTag::soft(w));
    } else if (line.back() == '.') {
      parse_clause(cur, WeightTag::hard());
    } else {
      parse_predicate(cur, line);
    }
  }

  void parse_domain(LineCursor& cur) {
    std::size_t col = cur.column();
    Domain dom;
    dom.name = std::string(cur.ident());
    if (model_.find_domain(dom.name) || domain_names_.count(dom.name))
      cur.fail_at(col, "duplicate domain '" + dom.name + "'");
    cur.expect('=');
    cur.expect('{');
    if (!cur.accept('}')) {
      do {
        cur.skip_space();
        std::size_t ccol = cur.column();
        std::string c(cur.ident());
        if (is_variable_name(c)) cur.fail_at(ccol, "constants must not start with a lowercase letter");
        if (!dom.index.emplace(c, static_cast<ConstIndex>(dom.constants.size())).second)
          cur.fail_at(ccol, "duplicate constant '" + c + "'");
        dom.constants.push_back(std::move(c));
      } while (cur.accept(','));
      cur.expect('}');
    }
    if (!cur.at_end()) cur.fail("unexpected text after domain declaration");
    domain_names_.emplace(dom.name, static_cast<DomainId>(model_.domains.size()));
    model_.domains.push_back(std::move(dom));
  }

  void parse_predicate(LineCursor& cur, std::string_view line) {
    if (line.find('!') != std::string_view::npos || line.find(" v ") != std::string_view::npos)
      cur.fail_at(0, "clause needs a leading weight or a terminating '.'");
    bool closed = cur.accept('*');
    RawAtom raw = read_atom(cur, false);
    if (!cur.at_end()) cur.fail("unexpected text after predicate declaration");
    PredicateSig sig;
    sig.name = std::string(raw.predicate);
    sig.closed_world = closed;
    if (predicate_names_.count(sig.name))
      cur.fail_at(raw.column, "duplicate predicate '" + sig.name + "'");
    for (std::size_t i = 0; i < raw.args.size(); ++i) {
      auto it = domain_names_.find(std::string(raw.args[i]));
      if (it == domain_names_.end())
        cur.fail_at(raw.arg_columns[i], "undeclared domain '" + std::string(raw.args[i]) + "'");
      sig.argument_domains.push_back(it->second);
    }
    predicate_names_.emplace(sig.name, static_cast<PredicateId>(model_.predicates.size()));
    model_.predicates.push_back(std::move(sig));
  }

  void parse_clause(LineCursor& cur, WeightTag weight) {
    FirstOrderClause clause;
    clause.weight = weight;
    std::map<std::string, std::uint32_t, std::less<>> vars;
    bool first = true;
    while (true) {
      if (!first) {
        if (cur.at_end()) break;
        if (cur.peek() == '.') {
          cur.accept('.');
          if (!cur.at_end()) cur.fail("unexpected text after '.'");
          if (!weight.is_hard()) cur.fail("a weighted clause cannot end with '.'");
          break;
        }
        std::size_t col = cur.column();
        if (cur.ident() != "v") cur.fail_at(col, "expected 'v' between literals");
      }
      first = false;
      RawAtom raw = read_atom(cur, true);
      auto pit = predicate_names_.find(std::string(raw.predicate));
      if (pit == predicate_names_.end())
        cur.fail_at(raw.column, "undeclared predicate '" + std::string(raw.predicate) + "'");
      const PredicateSig& sig = model_.predicates[pit->second];
      if (raw.args.size() != sig.arity())
        cur.fail_at(raw.column, "arity mismatch for '" + sig.name + "': expected " +
                                    std::to_string(sig.arity()) + ", got " +
                                    std::to_string(raw.args.size()));
      Literal lit;
      lit.predicate = pit->second;
      lit.positive = raw.positive;
      for (std::size_t i = 0; i < raw.args.size(); ++i) {
        DomainId d = sig.argument_domains[i];
        std::string_view name = raw.args[i];
        if (is_variable_name(name)) {
          auto [it, inserted] =
              vars.emplace(std::string(name), static_cast<std::uint32_t>(clause.variable_count()));
          if (inserted) {
            clause.variable_names.emplace_back(name);
            clause.variable_domains.push_back(d);
          } else if (clause.variable_domains[it->second] != d) {
            cur.fail_at(raw.arg_columns[i], "variable '" + std::string(name) +
                                                "' used with domains '" +
                                                model_.domains[clause.variable_domains[it->second]].name +
                                                "' and '" + model_.domains[d].name + "'");
          }
          lit.terms.push_back(Term::variable(it->second));
        } else {
          auto c = model_.domains[d].find(name);
          if (!c)
            cur.fail_at(raw.arg_columns[i], "constant '" + std::string(name) +
                                                "' is not in domain '" + model_.domains[d].name + "'");
          lit.terms.push_back(Term::constant(*c));
        }
      }
      if (std::find(clause.literals.begin(), clause.literals.end(), lit) == clause.literals.end())
        clause.literals.push_back(std::move(lit));
    }
    add_clause(std::move(clause));
  }

  void add_clause(FirstOrderClause clause) {
    if (clause.weight.is_soft() && clause.weight.value() == 0.0) return;
    std::vector<std::string> parts;
    for (const auto& lit : clause.literals) parts.push_back(format_literal(model_, clause, lit));
    std::sort(parts.begin(), parts.end());
    std::string key;
    for (const auto& p : parts) key += p + '\x1f';
    auto it = clause_index_.find(key);
    if (it == clause_index_.end()) {
      clause_index_.emplace(key, model_.clauses.size());
      model_.clauses.push_back(std::move(clause));
      return;
    }
    auto& existing = model_.clauses[it->second];
    if (existing.weight.is_hard() || clause.weight.is_hard())
      existing.weight = WeightTag::hard();
    else
      existing.weight = WeightTag::soft(existing.weight.value() + clause.weight.value());
  }

  MlnModel finish() {
    std::vector<FirstOrderClause> kept;
    for (auto& c : model_.clauses)
      if (c.weight.is_hard() || c.weight.value() != 0.0) kept.push_back(std::move(c));
    model_.clauses = std::move(kept);
    model_.finalize();
    return std::move(model_);
  }

  MlnModel model_;
  std::map<std::string, DomainId, std::less<>> domain_names_;
  std::map<std::string, PredicateId, std::less<>> predicate_names_;
  std::map<std::string, std::size_t> clause_index_;
};

}  // namespace

MlnModel parse_mln(std::string_view text) {
  try {
    return MlnParser().run(text);
  } catch (const ParseError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ParseError(0, 0, e.what());
  }
}

EvidenceSet parse_evidence(std::string_view text, const MlnModel& model) {
  EvidenceSet evidence(model);
  auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto line = strip_comment(lines[i]);
    LineCursor cur(line, i + 1);
    if (cur.at_end()) continue;
    RawAtom raw = read_atom(cur, true);
    if (!cur.at_end()) cur.fail("unexpected text after ground atom");
    auto p = model.find_predicate(raw.predicate);
    if (!p) cur.fail_at(raw.column, "unknown predicate '" + std::string(raw.predicate) + "'");
    const auto& sig = model.predicates[*p];
    if (raw.args.size() != sig.arity())
      cur.fail_at(raw.column, "arity mismatch for '" + sig.name + "'");
    std::vector<ConstIndex> args;
    for (std::size_t a = 0; a < raw.args.size(); ++a) {
      const auto& dom = model.domains[sig.argument_domains[a]];
      auto c = dom.find(raw.args[a]);
      if (!c)
        cur.fail_at(raw.arg_columns[a], "unknown constant '" + std::string(raw.args[a]) +
                                            "' for domain '" + dom.name + "'");
      args.push_back(*c);
    }
    AtomId atom = model.atom_id(*p, args);
    try {
      evidence.set(atom, raw.positive);
    } catch (const std::invalid_argument&) {
      cur.fail_at(raw.column, "contradictory evidence for " + model.atom_name(atom));
    }
  }
  return evidence;
}

// ---------------------------------------------------------------------------
// Formatting

std::string format_weight(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  (void)ec;
  return std::string(buf, ptr);
}

std::string format_literal(const MlnModel& model, const FirstOrderClause& clause,
                           const Literal& literal) {
  const auto& sig = model.predicates[literal.predicate];
  std::string out = literal.positive ? "" : "!";
  out += sig.name;
  if (sig.arity() == 0) return out;
  out += '(';
  for (std::size_t i = 0; i < literal.terms.size(); ++i) {
    if (i) out += ',';
    const Term& t = literal.terms[i];
    if (t.is_variable)
      out += clause.variable_names[t.value];
    else
      out += model.domains[sig.argument_domains[i]].constants[t.value];
  }
  out += ')';
  return out;
}

std::string format_mln(const MlnModel& model) {
  std::ostringstream out;
  for (const auto& dom : model.domains) {
    out << dom.name << " = {";
    for (std::size_t i = 0; i < dom.constants.size(); ++i)
      out << (i ? ", " : "") << dom.constants[i];
    out << "}\n";
  }
  for (const auto& sig : model.predicates) {
    out << (sig.closed_world ? "*" : "") << sig.name;
    if (sig.arity()) {
      out << '(';
      for (std::size_t i = 0; i < sig.arity(); ++i)
        out << (i ? ", " : "") << model.domains[sig.argument_domains[i]].name;
      out << ')';
    }
    out << '\n';
  }
  for (const auto& clause : model.clauses) {
    if (clause.weight.is_soft()) out << format_weight(clause.weight.value()) << ' ';
    for (std::size_t i = 0; i < clause.literals.size(); ++i)
      out << (i ? " v " : "") << format_literal(model, clause, clause.literals[i]);
    if (clause.weight.is_hard()) out << " .";
    out << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Grounding and weights

void for_each_grounding(const MlnModel& model, const FirstOrderClause& clause,
                        const std::function<void(std::span<const ConstIndex>)>& fn) {
  const std::size_t n = clause.variable_count();
  std::vector<std::size_t> radix(n);
  for (std::size_t v = 0; v < n; ++v) {
    radix[v] = model.domains[clause.variable_domains[v]].constants.size();
    if (radix[v] == 0) return;
  }
  std::vector<ConstIndex> binding(n, 0);
  while (true) {
    fn(binding);
    std::size_t v = n;
    while (v > 0) {
      --v;
      if (++binding[v] < radix[v]) break;
      binding[v] = 0;
      if (v == 0) return;
    }
    if (n == 0) return;
  }
}

AtomId ground_atom(const MlnModel& model, const Literal& literal,
                   std::span<const ConstIndex> binding) {
  ConstIndex args[16];
  std::vector<ConstIndex> wide;
  ConstIndex* dst = args;
  if (literal.terms.size() > 16) {
    wide.resize(literal.terms.size());
    dst = wide.data();
  }
  for (std::size_t i = 0; i < literal.terms.size(); ++i) {
    const Term& t = literal.terms[i];
    dst[i] = t.is_variable ? binding[t.value] : t.value;
  }
  return model.atom_id(literal.predicate, std::span<const ConstIndex>(dst, literal.terms.size()));
}

double interpretation_weight(const MlnModel& model, const Interpretation& interp) {
  double total = 0.0;
  for (const auto& clause : model.clauses) {
    std::size_t satisfied = 0;
    bool hard_violated = false;
    for_each_grounding(model, clause, [&](std::span<const ConstIndex> binding) {
      for (const auto& lit : clause.literals) {
        if (interp[ground_atom(model, lit, binding)] == lit.positive) {
          ++satisfied;
          return;
        }
      }
      if (clause.weight.is_hard()) hard_violated = true;
    });
    if (hard_violated) return -std::numeric_limits<double>::infinity();
    if (clause.weight.is_soft()) total += clause.weight.value() * static_cast<double>(satisfied);
  }
  return total;
}

std::string format_map_state(const MlnModel& model, const Interpretation& interp) {
  std::vector<std::string> names;
  for (AtomId a : interp.true_atoms()) names.push_back(model.atom_name(a));
  std::sort(names.begin(), names.end());
  std::string out;
  for (const auto& n : names) {
    out += n;
    out += '\n';
  }
  return out;
}

}  // namespace cpamap
