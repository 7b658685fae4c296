// Copyright 2026 The gqaoa-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gqaoa/cnf.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "gqaoa/rng.hpp"
#include "gqaoa/spectrum.hpp"

#include <json.hpp>

namespace gqaoa {

namespace {

// Packs a canonical clause into a single comparable/hashable key.
// Variable indices fit in 20 bits each (n is capped far below that by the
// exhaustive oracles); one extra bit per literal carries the sign.
std::uint64_t clause_key(const Clause& clause) {
  const Clause c = clause.canonical();
  std::uint64_t key = 0;
  for (const Literal& lit : c.literals) {
    key = (key << 21) | (static_cast<std::uint64_t>(lit.variable) << 1) |
          (lit.sign < 0 ? 1u : 0u);
  }
  return key;
}

void validate_clause(const Clause& clause, int n) {
  for (const Literal& lit : clause.literals) {
    if (lit.sign != 1 && lit.sign != -1)
      throw std::invalid_argument("literal sign must be +1 or -1");
    if (lit.variable < 0 || lit.variable >= n)
      throw std::invalid_argument("variable index " + std::to_string(lit.variable) +
                                  " out of range for n=" + std::to_string(n));
  }
  const auto& l = clause.literals;
  if (l[0].variable == l[1].variable || l[0].variable == l[2].variable ||
      l[1].variable == l[2].variable)
    throw std::invalid_argument("clause repeats a variable");
}

}  // namespace

std::uint64_t Clause::variable_mask() const {
  std::uint64_t mask = 0;
  for (const Literal& lit : literals) mask |= std::uint64_t{1} << lit.variable;
  return mask;
}

std::uint64_t Clause::falsifying_pattern() const {
  std::uint64_t pattern = 0;
  for (const Literal& lit : literals)
    if (lit.sign < 0) pattern |= std::uint64_t{1} << lit.variable;
  return pattern;
}

Clause Clause::canonical() const {
  Clause c = *this;
  std::sort(c.literals.begin(), c.literals.end(), [](const Literal& a, const Literal& b) {
    return a.variable != b.variable ? a.variable < b.variable : a.sign < b.sign;
  });
  return c;
}

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::satisfiable: return "satisfiable";
    case Regime::unsatisfiable: return "unsatisfiable";
    case Regime::any: return "any";
  }
  return "any";
}

Regime regime_from_string(std::string_view name) {
  if (name == "satisfiable" || name == "sat") return Regime::satisfiable;
  if (name == "unsatisfiable" || name == "unsat") return Regime::unsatisfiable;
  if (name == "any") return Regime::any;
  throw std::invalid_argument("unknown regime: " + std::string(name));
}

CnfFormula::CnfFormula(int variable_count, std::vector<Clause> clauses) : n_(variable_count) {
  if (n_ < 0) throw std::invalid_argument("negative variable count");
  if (n_ > 62) throw std::invalid_argument("variable count above the 62-bit assignment limit");
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(clauses.size());
  clauses_.reserve(clauses.size());
  for (const Clause& clause : clauses) {
    validate_clause(clause, n_);
    if (seen.insert(clause_key(clause)).second) clauses_.push_back(clause);
  }
  masks_.reserve(clauses_.size());
  patterns_.reserve(clauses_.size());
  for (const Clause& clause : clauses_) {
    masks_.push_back(clause.variable_mask());
    patterns_.push_back(clause.falsifying_pattern());
  }
}

double CnfFormula::density() const {
  if (n_ == 0) throw std::logic_error("density undefined for an empty variable set");
  return static_cast<double>(clause_count()) / static_cast<double>(n_);
}

int CnfFormula::energy(Assignment bits) const {
  if (n_ < 64 && (bits >> n_) != 0)
    throw std::invalid_argument("assignment sets bits above the variable count");
  int unsatisfied = 0;
  for (std::size_t i = 0; i < masks_.size(); ++i)
    unsatisfied += static_cast<int>((bits & masks_[i]) == patterns_[i]);
  return unsatisfied;
}

bool operator==(const CnfFormula& a, const CnfFormula& b) {
  if (a.n_ != b.n_ || a.clauses_.size() != b.clauses_.size()) return false;
  std::vector<std::uint64_t> ka, kb;
  ka.reserve(a.clauses_.size());
  kb.reserve(b.clauses_.size());
  for (const Clause& c : a.clauses_) ka.push_back(clause_key(c));
  for (const Clause& c : b.clauses_) kb.push_back(clause_key(c));
  std::sort(ka.begin(), ka.end());
  std::sort(kb.begin(), kb.end());
  return ka == kb;
}

CnfFormula CnfFormula::parse(std::string_view text, CnfFormat format) {
  return format == CnfFormat::dimacs ? parse_dimacs(text) : parse_json(text);
}

CnfFormula CnfFormula::parse_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int n = -1;
  long declared_clauses = -1;
  std::vector<int> pending;
  std::vector<Clause> clauses;

  auto flush_clause = [&]() {
    if (pending.size() != 3)
      throw std::invalid_argument("clause with " + std::to_string(pending.size()) +
                                  " literals; exactly 3 required");
    Clause clause;
    for (int i = 0; i < 3; ++i) {
      const int lit = pending[static_cast<std::size_t>(i)];
      clause.literals[static_cast<std::size_t>(i)] =
          Literal{std::abs(lit) - 1, lit > 0 ? +1 : -1};
    }
    validate_clause(clause, n);
    clauses.push_back(clause);
    pending.clear();
  };

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == 'c') continue;
    if (line[0] == 'p') {
      if (n >= 0) throw std::invalid_argument("duplicate DIMACS header");
      std::istringstream header(line);
      std::string p, fmt;
      if (!(header >> p >> fmt >> n >> declared_clauses) || fmt != "cnf" || n < 0 ||
          declared_clauses < 0)
        throw std::invalid_argument("malformed DIMACS header: " + line);
      continue;
    }
    if (n < 0) throw std::invalid_argument("clause data before DIMACS header");
    std::istringstream body(line);
    int lit = 0;
    while (body >> lit) {
      if (lit == 0)
        flush_clause();
      else
        pending.push_back(lit);
    }
    if (!body.eof()) throw std::invalid_argument("malformed clause line: " + line);
  }
  if (n < 0) throw std::invalid_argument("missing DIMACS header");
  if (!pending.empty()) throw std::invalid_argument("clause not terminated by 0");
  if (static_cast<long>(clauses.size()) != declared_clauses)
    throw std::invalid_argument("header declares " + std::to_string(declared_clauses) +
                                " clauses, file has " + std::to_string(clauses.size()));
  return CnfFormula(n, std::move(clauses));
}

namespace {

// One JSON literal: a nonzero integer (sign = arithmetic sign), or a string
// "+k"/"-k". Variable 0 requires the string form since +0 and -0 collapse
// as numbers.
Literal literal_from_json(const nlohmann::json& entry) {
  if (entry.is_number_integer()) {
    const long long v = entry.get<long long>();
    if (v == 0)
      throw std::invalid_argument(
          "bare 0 is ambiguous; write variable 0 as \"+0\" or \"-0\"");
    return Literal{static_cast<int>(std::llabs(v)), v > 0 ? +1 : -1};
  }
  if (entry.is_string()) {
    const std::string s = entry.get<std::string>();
    if (s.size() < 2 || (s[0] != '+' && s[0] != '-'))
      throw std::invalid_argument("literal string must look like \"+3\" or \"-0\": " + s);
    std::size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(s.substr(1), &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("malformed literal string: " + s);
    }
    if (pos + 1 != s.size() || v < 0)
      throw std::invalid_argument("malformed literal string: " + s);
    return Literal{v, s[0] == '+' ? +1 : -1};
  }
  throw std::invalid_argument("literal must be an integer or a signed string");
}

}  // namespace

CnfFormula CnfFormula::parse_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw std::invalid_argument("instance JSON must be an array of clauses");

  std::vector<Clause> clauses;
  int max_variable = -1;
  for (const auto& entry : doc) {
    if (!entry.is_array() || entry.size() != 3)
      throw std::invalid_argument("each clause must be an array of exactly 3 literals");
    Clause clause;
    for (int i = 0; i < 3; ++i) {
      clause.literals[static_cast<std::size_t>(i)] = literal_from_json(entry[i]);
      max_variable = std::max(max_variable, clause.literals[static_cast<std::size_t>(i)].variable);
    }
    clauses.push_back(clause);
  }
  return CnfFormula(max_variable + 1, std::move(clauses));
}

std::string CnfFormula::to_dimacs() const {
  std::vector<Clause> sorted;
  sorted.reserve(clauses_.size());
  for (const Clause& c : clauses_) sorted.push_back(c.canonical());
  std::sort(sorted.begin(), sorted.end(),
            [](const Clause& a, const Clause& b) { return clause_key(a) < clause_key(b); });

  std::ostringstream out;
  out << "p cnf " << n_ << ' ' << clauses_.size() << '\n';
  for (const Clause& clause : sorted) {
    for (const Literal& lit : clause.literals)
      out << lit.sign * (lit.variable + 1) << ' ';
    out << "0\n";
  }
  return out.str();
}

std::string CnfFormula::to_json() const {
  std::vector<Clause> sorted;
  sorted.reserve(clauses_.size());
  for (const Clause& c : clauses_) sorted.push_back(c.canonical());
  std::sort(sorted.begin(), sorted.end(),
            [](const Clause& a, const Clause& b) { return clause_key(a) < clause_key(b); });

  nlohmann::json doc = nlohmann::json::array();
  for (const Clause& clause : sorted) {
    nlohmann::json entry = nlohmann::json::array();
    for (const Literal& lit : clause.literals)
      entry.push_back((lit.sign > 0 ? "+" : "-") + std::to_string(lit.variable));
    doc.push_back(std::move(entry));
  }
  return doc.dump();
}

int clause_count_for_density(int n, double density) {
  if (n <= 0 || density <= 0.0) throw std::invalid_argument("n and density must be positive");
  return static_cast<int>(std::llround(static_cast<double>(n) * density));
}

CnfFormula generate_random_instance(int n, double density_min, double density_max,
                                    Regime regime, std::uint64_t seed,
                                    const GeneratorOptions& options) {
  if (n < 3) throw std::invalid_argument("need at least 3 variables for 3-literal clauses");
  if (density_min <= 0.0 || density_max < density_min)
    throw std::invalid_argument("density range must be positive and ordered");
  if (regime != Regime::any && n > options.enumeration_cap)
    throw std::invalid_argument("regime confirmation needs n within the enumeration cap");

  for (int attempt = 0; attempt < options.max_resamples; ++attempt) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(attempt)));
    const double density = density_min == density_max
                               ? density_min
                               : rng.next_real(density_min, density_max);
    const int target = clause_count_for_density(n, density);

    std::vector<Clause> clauses;
    clauses.reserve(static_cast<std::size_t>(target));
    for (int i = 0; i < target; ++i) {
      int v0 = rng.next_int(0, n - 1);
      int v1 = v0;
      while (v1 == v0) v1 = rng.next_int(0, n - 1);
      int v2 = v0;
      while (v2 == v0 || v2 == v1) v2 = rng.next_int(0, n - 1);
      Clause clause;
      clause.literals[0] = Literal{v0, rng.next_bool() ? +1 : -1};
      clause.literals[1] = Literal{v1, rng.next_bool() ? +1 : -1};
      clause.literals[2] = Literal{v2, rng.next_bool() ? +1 : -1};
      clauses.push_back(clause);
    }

    CnfFormula formula(n, std::move(clauses));
    if (regime == Regime::any) return formula;
    const bool satisfiable = find_solution(formula, options.enumeration_cap).has_value();
    if ((regime == Regime::satisfiable) == satisfiable) return formula;
  }
  throw std::runtime_error("regime " + to_string(regime) + " not attained within " +
                           std::to_string(options.max_resamples) + " resamples");
}

}  // namespace gqaoa
