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

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "gqaoa/cnf.hpp"
#include "gqaoa/manifold.hpp"

namespace gqaoa {

/// Full 2^n quantum state, indexed by assignment (bit i of the index is the
/// value of variable i).
struct StateVector {
  int n = 0;
  std::vector<std::complex<double>> amplitudes;

  double norm() const;
};

enum class Mixer { grover, transverse_x };

std::string to_string(Mixer mixer);
Mixer mixer_from_string(std::string_view name);

/// Exact QAOA simulation in the full Hilbert space. Each round applies the
/// diagonal phase exp(-i*gamma*energy(tau)) and then the mixer: the Grover
/// mixer as its rank-1 update, the transverse-field mixer as n independent
/// single-qubit exp(-i*beta*X) rotations. Refuses n above `cap`.
StateVector simulate(const CnfFormula& formula, const AngleSchedule& schedule, Mixer mixer,
                     int cap = 20, int threads = 0);

/// Measurement outcomes over assignments: exact probabilities, or counts
/// with their empirical probabilities (total_shots = 0 marks exact).
struct OutputDistribution {
  int n = 0;
  std::vector<double> probabilities;
  std::vector<std::uint64_t> counts;  // empty for exact distributions
  std::uint64_t total_shots = 0;

  bool is_exact() const { return total_shots == 0; }
};

OutputDistribution exact_distribution(const StateVector& state);

/// Multinomial sampling by inverse CDF; deterministic per seed.
OutputDistribution sample(const OutputDistribution& distribution, std::uint64_t shots,
                          std::uint64_t seed);

/// Bitstring with variable 0 leftmost, the convention of count files.
std::string bitstring_of(Assignment bits, int n);
Assignment assignment_from_bitstring(std::string_view text, int n);

/// Decimal state index with variable 0 as the most significant bit, the
/// convention of exported distribution tables.
std::uint64_t external_index(Assignment bits, int n);

/// Count files: JSON object mapping bitstrings to non-negative counts. Also
/// the ingestion format for externally measured counts. `n` fixes the
/// expected bitstring width.
OutputDistribution counts_from_json(std::string_view text, int n);
std::string counts_to_json(const OutputDistribution& distribution);

/// Exact distribution as CSV rows (state index, probability) using the
/// external index convention.
std::string distribution_to_csv(const OutputDistribution& distribution);

}  // namespace gqaoa
