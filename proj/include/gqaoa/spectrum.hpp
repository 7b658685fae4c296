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

#include <cstdint>
#include <optional>
#include <vector>

#include "gqaoa/cnf.hpp"

namespace gqaoa {

/// Histogram of assignment energies: counts[E] is the number of
/// assignments leaving exactly E clauses unsatisfied. The counts always sum
/// to 2^n and the vector spans E = 0..m.
struct EnergySpectrum {
  int n = 0;
  std::vector<std::uint64_t> counts;

  std::uint64_t total() const { return std::uint64_t{1} << n; }
  std::uint64_t solution_count() const { return counts.empty() ? 0 : counts[0]; }

  /// Smallest occupied energy; 0 iff the formula is satisfiable.
  int min_energy() const;

  /// Number of occupied energy levels.
  int occupied_levels() const;

  /// P: fraction of assignments that are solutions.
  double satisfying_probability() const;

  /// D: fraction of assignments attaining the minimum energy. Equals P for
  /// satisfiable formulas.
  double min_energy_probability() const;
};

/// Exhaustively counts the assignments in every energy manifold. Refuses
/// variable counts above `enumeration_cap`. The scan is partitioned across
/// workers; counts are exact integers so the result does not depend on the
/// worker count.
EnergySpectrum compute_spectrum(const CnfFormula& formula, int enumeration_cap = 30,
                                int threads = 0);

/// All satisfying assignments in ascending order.
std::vector<Assignment> enumerate_solutions(const CnfFormula& formula,
                                            int enumeration_cap = 30, int threads = 0);

/// First satisfying assignment in ascending order, if any. Early-exits, so
/// it is much cheaper than a spectrum for satisfiable formulas.
std::optional<Assignment> find_solution(const CnfFormula& formula,
                                        int enumeration_cap = 30);

/// Energy of every assignment, indexed by assignment. Memory is 4 bytes per
/// assignment, so the cap is tighter than the spectrum cap.
std::vector<std::int32_t> energy_table(const CnfFormula& formula, int cap = 20,
                                       int threads = 0);

}  // namespace gqaoa
