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

#include "gqaoa/spectrum.hpp"

#include <algorithm>
#include <mutex>
#include <stdexcept>

#include "gqaoa/parallel.hpp"

namespace gqaoa {

namespace {

void check_cap(const CnfFormula& formula, int cap, const char* what) {
  if (formula.variable_count() > cap)
    throw std::invalid_argument(std::string(what) + ": n=" +
                                std::to_string(formula.variable_count()) +
                                " exceeds the enumeration cap " + std::to_string(cap));
}

inline int energy_of(const std::vector<std::uint64_t>& masks,
                     const std::vector<std::uint64_t>& patterns, Assignment bits) {
  int unsatisfied = 0;
  for (std::size_t i = 0; i < masks.size(); ++i)
    unsatisfied += static_cast<int>((bits & masks[i]) == patterns[i]);
  return unsatisfied;
}

}  // namespace

int EnergySpectrum::min_energy() const {
  for (std::size_t e = 0; e < counts.size(); ++e)
    if (counts[e] > 0) return static_cast<int>(e);
  throw std::logic_error("empty spectrum");
}

int EnergySpectrum::occupied_levels() const {
  int occupied = 0;
  for (const std::uint64_t c : counts) occupied += static_cast<int>(c > 0);
  return occupied;
}

double EnergySpectrum::satisfying_probability() const {
  return static_cast<double>(solution_count()) / static_cast<double>(total());
}

double EnergySpectrum::min_energy_probability() const {
  return static_cast<double>(counts[static_cast<std::size_t>(min_energy())]) /
         static_cast<double>(total());
}

EnergySpectrum compute_spectrum(const CnfFormula& formula, int enumeration_cap, int threads) {
  check_cap(formula, enumeration_cap, "compute_spectrum");
  const auto& masks = formula.clause_masks();
  const auto& patterns = formula.clause_patterns();
  const std::uint64_t total = std::uint64_t{1} << formula.variable_count();
  const std::size_t levels = masks.size() + 1;

  EnergySpectrum spectrum;
  spectrum.n = formula.variable_count();
  spectrum.counts.assign(levels, 0);

  std::mutex merge_mutex;
  parallel_chunks(0, total, threads, [&](std::uint64_t lo, std::uint64_t hi) {
    std::vector<std::uint64_t> local(levels, 0);
    for (std::uint64_t bits = lo; bits < hi; ++bits)
      ++local[static_cast<std::size_t>(energy_of(masks, patterns, bits))];
    std::lock_guard<std::mutex> lock(merge_mutex);
    for (std::size_t e = 0; e < levels; ++e) spectrum.counts[e] += local[e];
  });
  return spectrum;
}

std::vector<Assignment> enumerate_solutions(const CnfFormula& formula, int enumeration_cap,
                                            int threads) {
  check_cap(formula, enumeration_cap, "enumerate_solutions");
  const auto& masks = formula.clause_masks();
  const auto& patterns = formula.clause_patterns();
  const std::uint64_t total = std::uint64_t{1} << formula.variable_count();

  std::mutex merge_mutex;
  std::vector<std::pair<std::uint64_t, std::vector<Assignment>>> parts;
  parallel_chunks(0, total, threads, [&](std::uint64_t lo, std::uint64_t hi) {
    std::vector<Assignment> local;
    for (std::uint64_t bits = lo; bits < hi; ++bits)
      if (energy_of(masks, patterns, bits) == 0) local.push_back(bits);
    std::lock_guard<std::mutex> lock(merge_mutex);
    parts.emplace_back(lo, std::move(local));
  });

  std::sort(parts.begin(), parts.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Assignment> solutions;
  for (auto& part : parts)
    solutions.insert(solutions.end(), part.second.begin(), part.second.end());
  return solutions;
}

std::optional<Assignment> find_solution(const CnfFormula& formula, int enumeration_cap) {
  check_cap(formula, enumeration_cap, "find_solution");
  const auto& masks = formula.clause_masks();
  const auto& patterns = formula.clause_patterns();
  const std::uint64_t total = std::uint64_t{1} << formula.variable_count();
  for (std::uint64_t bits = 0; bits < total; ++bits)
    if (energy_of(masks, patterns, bits) == 0) return bits;
  return std::nullopt;
}

std::vector<std::int32_t> energy_table(const CnfFormula& formula, int cap, int threads) {
  check_cap(formula, cap, "energy_table");
  const auto& masks = formula.clause_masks();
  const auto& patterns = formula.clause_patterns();
  const std::uint64_t total = std::uint64_t{1} << formula.variable_count();

  std::vector<std::int32_t> table(total);
  parallel_chunks(0, total, threads, [&](std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t bits = lo; bits < hi; ++bits)
      table[bits] = energy_of(masks, patterns, bits);
  });
  return table;
}

}  // namespace gqaoa
