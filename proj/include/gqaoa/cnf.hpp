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

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace gqaoa {

/// Truth assignment of the n Boolean variables: bit i holds the value of
/// variable i. Only the low n bits may be set.
using Assignment = std::uint64_t;

/// A possibly negated Boolean variable. `sign` is +1 for x_v, -1 for the
/// negation of x_v.
struct Literal {
  int variable = 0;
  int sign = +1;

  friend bool operator==(const Literal&, const Literal&) = default;
};

/// Disjunction of exactly three literals over pairwise-distinct variables.
struct Clause {
  std::array<Literal, 3> literals{};

  /// Bits of the three variables this clause touches.
  std::uint64_t variable_mask() const;

  /// The unique value of the masked bits that falsifies the clause: every
  /// positive literal 0, every negated literal 1.
  std::uint64_t falsifying_pattern() const;

  bool falsified_by(Assignment bits) const {
    return (bits & variable_mask()) == falsifying_pattern();
  }

  /// Literals sorted by (variable, sign); two clauses are the same clause
  /// iff their canonical forms are equal.
  Clause canonical() const;

  friend bool operator==(const Clause&, const Clause&) = default;
};

enum class CnfFormat { dimacs, json };
enum class Regime { satisfiable, unsatisfiable, any };

std::string to_string(Regime regime);
Regime regime_from_string(std::string_view name);

/// A 3-CNF formula over n variables. Clauses are deduplicated on
/// construction (first occurrence kept, order otherwise preserved), so the
/// stored clause count m may be smaller than what the caller supplied.
class CnfFormula {
 public:
  CnfFormula() = default;
  CnfFormula(int variable_count, std::vector<Clause> clauses);

  int variable_count() const { return n_; }
  int clause_count() const { return static_cast<int>(clauses_.size()); }
  const std::vector<Clause>& clauses() const { return clauses_; }

  /// Clause density m/n, recomputed from the deduplicated clause list.
  double density() const;

  /// Number of clauses left unsatisfied by `bits`; 0 iff `bits` satisfies
  /// the formula.
  int energy(Assignment bits) const;

  /// Per-clause (variable mask, falsifying pattern) pairs, aligned with
  /// clauses(); the evaluation hot path for exhaustive scans.
  const std::vector<std::uint64_t>& clause_masks() const { return masks_; }
  const std::vector<std::uint64_t>& clause_patterns() const { return patterns_; }

  static CnfFormula parse(std::string_view text, CnfFormat format);
  static CnfFormula parse_dimacs(std::string_view text);
  static CnfFormula parse_json(std::string_view text);

  /// Canonical serializations: clauses written in sorted canonical order so
  /// fixtures are reproducible regardless of input order.
  std::string to_dimacs() const;
  std::string to_json() const;

  /// Semantic equality: same variable count and same clause set.
  friend bool operator==(const CnfFormula& a, const CnfFormula& b);

 private:
  int n_ = 0;
  std::vector<Clause> clauses_;
  std::vector<std::uint64_t> masks_;
  std::vector<std::uint64_t> patterns_;
};

/// Number of clauses to generate for variable count n at density d:
/// n*d rounded half away from zero.
int clause_count_for_density(int n, double density);

struct GeneratorOptions {
  /// Whole-instance resample attempts allowed before giving up on a regime.
  int max_resamples = 10000;
  /// Exhaustive-check cap used when a regime must be confirmed.
  int enumeration_cap = 30;
};

/// Draws d uniformly from [density_min, density_max], generates
/// round(n*d) random clauses (3 distinct variables, independent uniform
/// signs), and deduplicates. If `regime` is not `any`, whole instances are
/// resampled on fresh seed streams until the exhaustive oracle confirms the
/// regime. Deterministic in all arguments.
CnfFormula generate_random_instance(int n, double density_min, double density_max,
                                    Regime regime, std::uint64_t seed,
                                    const GeneratorOptions& options = {});

}  // namespace gqaoa
