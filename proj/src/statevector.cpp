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

#include "gqaoa/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "gqaoa/parallel.hpp"
#include "gqaoa/rng.hpp"
#include "gqaoa/spectrum.hpp"

#include <json.hpp>

namespace gqaoa {

namespace {

constexpr double kNormDriftTolerance = 1e-9;

void apply_phase(std::vector<std::complex<double>>& amps,
                 const std::vector<std::int32_t>& energies, double gamma, int max_energy) {
  std::vector<std::complex<double>> table(static_cast<std::size_t>(max_energy) + 1);
  for (int e = 0; e <= max_energy; ++e) {
    const double theta = gamma * e;
    table[static_cast<std::size_t>(e)] = {std::cos(theta), -std::sin(theta)};
  }
  for (std::size_t i = 0; i < amps.size(); ++i)
    amps[i] *= table[static_cast<std::size_t>(energies[i])];
}

void apply_grover_mixer(std::vector<std::complex<double>>& amps, int n, double beta) {
  std::complex<double> total = 0.0;
  for (const auto& a : amps) total += a;
  const std::complex<double> shift =
      (std::complex<double>(std::cos(beta), -std::sin(beta)) - 1.0) *
      std::ldexp(1.0, -n) * total;
  for (auto& a : amps) a += shift;
}

void apply_x_mixer(std::vector<std::complex<double>>& amps, int n, double beta) {
  const double c = std::cos(beta);
  const double s = std::sin(beta);
  // exp(-i*beta*X) = [[c, -i s], [-i s, c]] applied to every qubit
  for (int q = 0; q < n; ++q) {
    const std::uint64_t bit = std::uint64_t{1} << q;
    for (std::uint64_t base = 0; base < amps.size(); ++base) {
      if (base & bit) continue;
      const std::uint64_t partner = base | bit;
      const std::complex<double> a0 = amps[base];
      const std::complex<double> a1 = amps[partner];
      amps[base] = {c * a0.real() + s * a1.imag(), c * a0.imag() - s * a1.real()};
      amps[partner] = {c * a1.real() + s * a0.imag(), c * a1.imag() - s * a0.real()};
    }
  }
}

}  // namespace

double StateVector::norm() const {
  double total = 0.0;
  for (const auto& a : amplitudes) total += std::norm(a);
  return total;
}

std::string to_string(Mixer mixer) {
  return mixer == Mixer::grover ? "grover" : "transverse_x";
}

Mixer mixer_from_string(std::string_view name) {
  if (name == "grover" || name == "g") return Mixer::grover;
  if (name == "transverse_x" || name == "x") return Mixer::transverse_x;
  throw std::invalid_argument("unknown mixer: " + std::string(name));
}

StateVector simulate(const CnfFormula& formula, const AngleSchedule& schedule, Mixer mixer,
                     int cap, int threads) {
  schedule.validate();
  const int n = formula.variable_count();
  if (n < 1) throw std::invalid_argument("simulate needs at least one variable");
  if (n > cap)
    throw std::invalid_argument("n=" + std::to_string(n) + " exceeds the statevector cap " +
                                std::to_string(cap));

  const std::vector<std::int32_t> energies = energy_table(formula, cap, threads);

  StateVector state;
  state.n = n;
  // same uniform-amplitude representation as the manifold simulator: for odd
  // n the weight is split across re and im so |amp|^2 == 2^-n exactly
  const double init_re = n % 2 == 0 ? std::ldexp(1.0, -n / 2) : std::ldexp(1.0, -(n + 1) / 2);
  const double init_im = n % 2 == 0 ? 0.0 : init_re;
  state.amplitudes.assign(std::uint64_t{1} << n, {init_re, init_im});

  for (int round = 0; round < schedule.rounds; ++round) {
    apply_phase(state.amplitudes, energies, schedule.gamma(round), formula.clause_count());
    if (mixer == Mixer::grover)
      apply_grover_mixer(state.amplitudes, n, schedule.beta(round));
    else
      apply_x_mixer(state.amplitudes, n, schedule.beta(round));
    const double drift = std::abs(state.norm() - 1.0);
    if (drift > kNormDriftTolerance)
      throw std::logic_error("statevector norm drifted by " + std::to_string(drift));
  }
  return state;
}

OutputDistribution exact_distribution(const StateVector& state) {
  OutputDistribution dist;
  dist.n = state.n;
  dist.probabilities.reserve(state.amplitudes.size());
  for (const auto& a : state.amplitudes) dist.probabilities.push_back(std::norm(a));
  return dist;
}

OutputDistribution sample(const OutputDistribution& distribution, std::uint64_t shots,
                          std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("shots must be at least 1");
  const std::size_t size = distribution.probabilities.size();
  if (size == 0) throw std::invalid_argument("empty distribution");

  std::vector<double> cdf(size);
  double running = 0.0;
  for (std::size_t i = 0; i < size; ++i) {
    running += distribution.probabilities[i];
    cdf[i] = running;
  }
  const double total = cdf.back();
  if (!(total > 0.0)) throw std::invalid_argument("distribution has no mass");

  OutputDistribution out;
  out.n = distribution.n;
  out.counts.assign(size, 0);
  out.total_shots = shots;

  Rng rng(seed);
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = rng.next_unit() * total;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const std::size_t index = std::min(static_cast<std::size_t>(it - cdf.begin()), size - 1);
    ++out.counts[index];
  }

  out.probabilities.resize(size);
  for (std::size_t i = 0; i < size; ++i)
    out.probabilities[i] = static_cast<double>(out.counts[i]) / static_cast<double>(shots);
  return out;
}

std::string bitstring_of(Assignment bits, int n) {
  std::string text(static_cast<std::size_t>(n), '0');
  for (int i = 0; i < n; ++i)
    if (bits >> i & 1) text[static_cast<std::size_t>(i)] = '1';
  return text;
}

Assignment assignment_from_bitstring(std::string_view text, int n) {
  if (static_cast<int>(text.size()) != n)
    throw std::invalid_argument("bitstring width " + std::to_string(text.size()) +
                                " does not match n=" + std::to_string(n));
  Assignment bits = 0;
  for (int i = 0; i < n; ++i) {
    const char c = text[static_cast<std::size_t>(i)];
    if (c == '1')
      bits |= Assignment{1} << i;
    else if (c != '0')
      throw std::invalid_argument("bitstring may contain only 0 and 1");
  }
  return bits;
}

std::uint64_t external_index(Assignment bits, int n) {
  std::uint64_t index = 0;
  for (int i = 0; i < n; ++i)
    if (bits >> i & 1) index |= std::uint64_t{1} << (n - 1 - i);
  return index;
}

OutputDistribution counts_from_json(std::string_view text, int n) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("invalid counts JSON: ") + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("counts file must be a JSON object");
  if (doc.empty()) throw std::invalid_argument("counts file is empty");

  OutputDistribution dist;
  dist.n = n;
  dist.counts.assign(std::uint64_t{1} << n, 0);
  std::uint64_t total = 0;
  for (const auto& [key, value] : doc.items()) {
    if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<long long>() >= 0))
      throw std::invalid_argument("count for " + key + " must be a non-negative integer");
    const Assignment bits = assignment_from_bitstring(key, n);
    const std::uint64_t count = value.get<std::uint64_t>();
    dist.counts[bits] += count;
    total += count;
  }
  if (total == 0) throw std::invalid_argument("counts file has zero total shots");

  dist.total_shots = total;
  dist.probabilities.resize(dist.counts.size());
  for (std::size_t i = 0; i < dist.counts.size(); ++i)
    dist.probabilities[i] = static_cast<double>(dist.counts[i]) / static_cast<double>(total);
  return dist;
}

std::string counts_to_json(const OutputDistribution& distribution) {
  if (distribution.is_exact())
    throw std::invalid_argument("cannot write an exact distribution as counts");
  nlohmann::json doc = nlohmann::json::object();
  for (std::size_t i = 0; i < distribution.counts.size(); ++i)
    if (distribution.counts[i] > 0)
      doc[bitstring_of(static_cast<Assignment>(i), distribution.n)] = distribution.counts[i];
  return doc.dump();
}

std::string distribution_to_csv(const OutputDistribution& distribution) {
  // rows ordered by the external state index
  std::vector<std::pair<std::uint64_t, double>> rows;
  rows.reserve(distribution.probabilities.size());
  for (std::size_t i = 0; i < distribution.probabilities.size(); ++i)
    rows.emplace_back(external_index(static_cast<Assignment>(i), distribution.n),
                      distribution.probabilities[i]);
  std::sort(rows.begin(), rows.end());

  std::ostringstream out;
  out.precision(17);
  out << "state,probability\n";
  for (const auto& [index, probability] : rows) out << index << ',' << probability << '\n';
  return out.str();
}

}  // namespace gqaoa
