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

#include "gqaoa/manifold.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "gqaoa/parallel.hpp"

#include <json.hpp>

namespace gqaoa {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kNormDriftTolerance = 1e-9;

void init_amplitude(int n, double& re, double& im) {
  // 2^(-n/2) for even n. For odd n the magnitude is irrational, so split the
  // weight across both components: |a|^2 == 2^-n holds exactly either way
  // (the difference is a global phase).
  if (n % 2 == 0) {
    re = std::ldexp(1.0, -n / 2);
    im = 0.0;
  } else {
    re = std::ldexp(1.0, -(n + 1) / 2);
    im = re;
  }
}

}  // namespace

double reduce_angle(double radians) {
  if (!std::isfinite(radians)) throw std::invalid_argument("non-finite angle");
  double reduced = std::fmod(radians, kTwoPi);
  if (reduced < 0.0) reduced += kTwoPi;
  if (reduced >= kTwoPi) reduced = 0.0;
  return reduced;
}

AngleSchedule AngleSchedule::single_pair(int rounds, double beta, double gamma) {
  AngleSchedule schedule;
  schedule.mode = Mode::single_pair;
  schedule.rounds = rounds;
  schedule.betas = {reduce_angle(beta)};
  schedule.gammas = {reduce_angle(gamma)};
  schedule.validate();
  return schedule;
}

AngleSchedule AngleSchedule::per_round(std::vector<double> betas, std::vector<double> gammas) {
  AngleSchedule schedule;
  schedule.mode = Mode::per_round;
  schedule.rounds = static_cast<int>(betas.size());
  for (double& b : betas) b = reduce_angle(b);
  for (double& g : gammas) g = reduce_angle(g);
  schedule.betas = std::move(betas);
  schedule.gammas = std::move(gammas);
  schedule.validate();
  return schedule;
}

void AngleSchedule::validate() const {
  if (rounds < 0) throw std::invalid_argument("negative round count");
  const std::size_t expected = mode == Mode::single_pair ? 1 : static_cast<std::size_t>(rounds);
  if (betas.size() != expected || gammas.size() != expected)
    throw std::invalid_argument("schedule carries the wrong number of angle pairs");
}

std::string to_string(AngleSchedule::Mode mode) {
  return mode == AngleSchedule::Mode::single_pair ? "single_pair" : "per_round";
}

AngleSchedule::Mode mode_from_string(std::string_view name) {
  if (name == "single_pair" || name == "single") return AngleSchedule::Mode::single_pair;
  if (name == "per_round" || name == "full") return AngleSchedule::Mode::per_round;
  throw std::invalid_argument("unknown schedule mode: " + std::string(name));
}

std::string to_string(Objective objective) {
  return objective == Objective::solutions ? "solutions" : "min_energy";
}

Objective objective_from_string(std::string_view name) {
  if (name == "solutions") return Objective::solutions;
  if (name == "min_energy" || name == "maxsat") return Objective::min_energy;
  throw std::invalid_argument("unknown objective: " + std::string(name));
}

double EffectiveState::norm() const {
  double total = 0.0;
  for (const ManifoldLevel& level : levels)
    total += static_cast<double>(level.count) * std::norm(level.amplitude);
  return total;
}

double EffectiveState::level_probability(std::size_t index) const {
  const ManifoldLevel& level = levels[index];
  return static_cast<double>(level.count) * std::norm(level.amplitude);
}

EffectiveState init_uniform(const EnergySpectrum& spectrum) {
  double re = 0.0, im = 0.0;
  init_amplitude(spectrum.n, re, im);
  EffectiveState state;
  state.n = spectrum.n;
  for (std::size_t e = 0; e < spectrum.counts.size(); ++e)
    if (spectrum.counts[e] > 0)
      state.levels.push_back(
          ManifoldLevel{static_cast<int>(e), spectrum.counts[e], {re, im}});
  if (state.levels.empty()) throw std::invalid_argument("empty spectrum");
  return state;
}

EffectiveState apply_round(const EffectiveState& state, double beta, double gamma) {
  EffectiveState next = state;

  std::complex<double> overlap = 0.0;  // sum_E count_E * amplitude_E
  for (ManifoldLevel& level : next.levels) {
    const double theta = gamma * static_cast<double>(level.energy);
    level.amplitude *= std::complex<double>(std::cos(theta), -std::sin(theta));
    overlap += static_cast<double>(level.count) * level.amplitude;
  }

  const std::complex<double> z(std::cos(beta) - 1.0, -std::sin(beta));
  const std::complex<double> shift = z * (overlap * std::ldexp(1.0, -state.n));
  for (ManifoldLevel& level : next.levels) level.amplitude += shift;

  const double drift = std::abs(next.norm() - 1.0);
  if (drift > kNormDriftTolerance)
    throw std::logic_error("state norm drifted by " + std::to_string(drift));
  return next;
}

EffectiveState run_schedule(const EnergySpectrum& spectrum, const AngleSchedule& schedule) {
  schedule.validate();
  EffectiveState state = init_uniform(spectrum);
  for (int round = 0; round < schedule.rounds; ++round)
    state = apply_round(state, schedule.beta(round), schedule.gamma(round));
  return state;
}

double expected_energy(const EffectiveState& state) {
  double energy = 0.0;
  for (const ManifoldLevel& level : state.levels)
    energy += static_cast<double>(level.count) * static_cast<double>(level.energy) *
              std::norm(level.amplitude);
  return energy;
}

double success_probability(const EffectiveState& state, Objective objective) {
  if (state.levels.empty()) throw std::invalid_argument("empty state");
  const ManifoldLevel& lowest = state.levels.front();
  if (objective == Objective::solutions && lowest.energy != 0) return 0.0;
  return static_cast<double>(lowest.count) * std::norm(lowest.amplitude);
}

ManifoldEvaluator::ManifoldEvaluator(const EnergySpectrum& spectrum) : n_(spectrum.n) {
  scale_ = std::ldexp(1.0, -n_);
  init_amplitude(n_, init_re_, init_im_);

  std::uint64_t moment = 0;
  for (std::size_t e = 0; e < spectrum.counts.size(); ++e) {
    const std::uint64_t count = spectrum.counts[e];
    if (count == 0) continue;
    energy_.push_back(static_cast<double>(e));
    weight_.push_back(static_cast<double>(count));
    energy_weight_.push_back(static_cast<double>(count) * static_cast<double>(e));
    count_.push_back(count);
    moment += count * e;
  }
  if (energy_.empty()) throw std::invalid_argument("empty spectrum");
  uniform_energy_ = static_cast<double>(moment) * scale_;
  solution_weight_ = energy_.front() == 0.0 ? static_cast<double>(count_.front()) : 0.0;
}

bool ManifoldEvaluator::build_phase_table(double gamma, std::vector<double>& phase_re,
                                          std::vector<double>& phase_im) const {
  const std::size_t levels = energy_.size();
  phase_re.resize(levels);
  phase_im.resize(levels);
  bool identity = true;
  for (std::size_t k = 0; k < levels; ++k) {
    const double theta = gamma * energy_[k];
    phase_re[k] = std::cos(theta);
    phase_im[k] = -std::sin(theta);
    identity = identity && phase_re[k] == 1.0 && phase_im[k] == 0.0;
  }
  return identity;
}

void ManifoldEvaluator::run_rounds(double z_re, double z_im, int rounds,
                                   const std::vector<double>& phase_re,
                                   const std::vector<double>& phase_im,
                                   std::vector<double>& re, std::vector<double>& im) const {
  const std::size_t levels = energy_.size();
  const double* er = phase_re.data();
  const double* ei = phase_im.data();
  const double* w = weight_.data();
  double* ar = re.data();
  double* ai = im.data();
  for (int round = 0; round < rounds; ++round) {
    double sum_re = 0.0, sum_im = 0.0;
    for (std::size_t k = 0; k < levels; ++k) {
      const double tr = ar[k] * er[k] - ai[k] * ei[k];
      const double ti = ar[k] * ei[k] + ai[k] * er[k];
      ar[k] = tr;
      ai[k] = ti;
      sum_re += w[k] * tr;
      sum_im += w[k] * ti;
    }
    // associate exactly as apply_round: z * (overlap * 2^-n)
    const double t_re = sum_re * scale_;
    const double t_im = sum_im * scale_;
    const double shift_re = z_re * t_re - z_im * t_im;
    const double shift_im = z_re * t_im + z_im * t_re;
    for (std::size_t k = 0; k < levels; ++k) {
      ar[k] += shift_re;
      ai[k] += shift_im;
    }
  }
}

double ManifoldEvaluator::cost_of(const std::vector<double>& re,
                                  const std::vector<double>& im) const {
  double cost = 0.0;
  for (std::size_t k = 0; k < energy_.size(); ++k)
    cost += energy_weight_[k] * (re[k] * re[k] + im[k] * im[k]);
  return cost;
}

void ManifoldEvaluator::run_single_pair(double beta, double gamma, int rounds,
                                        std::vector<double>& re,
                                        std::vector<double>& im) const {
  const std::size_t levels = energy_.size();
  re.assign(levels, init_re_);
  im.assign(levels, init_im_);
  if (rounds == 0) return;

  const double z_re = std::cos(beta) - 1.0;
  const double z_im = -std::sin(beta);
  if (z_re == 0.0 && z_im == 0.0) return;  // identity mixer: probabilities frozen

  std::vector<double> phase_re, phase_im;
  if (build_phase_table(gamma, phase_re, phase_im))
    return;  // identity phases: the uniform state is a mixer eigenstate
  run_rounds(z_re, z_im, rounds, phase_re, phase_im, re, im);
}

double ManifoldEvaluator::cost_single_pair(double beta, double gamma, int rounds) const {
  // Untouched uniform amplitudes (both shortcut paths) give the uniform
  // energy bit-exactly here: the init components are powers of two, so
  // re^2 + im^2 == 2^-n without rounding.
  std::vector<double> re, im;
  run_single_pair(beta, gamma, rounds, re, im);
  return cost_of(re, im);
}

double ManifoldEvaluator::cost_schedule(const AngleSchedule& schedule) const {
  schedule.validate();
  const std::size_t levels = energy_.size();
  std::vector<double> re(levels, init_re_), im(levels, init_im_);
  std::vector<double> phase_re, phase_im;
  for (int round = 0; round < schedule.rounds; ++round) {
    build_phase_table(schedule.gamma(round), phase_re, phase_im);
    const double beta = schedule.beta(round);
    run_rounds(std::cos(beta) - 1.0, -std::sin(beta), 1, phase_re, phase_im, re, im);
  }
  return cost_of(re, im);
}

double ManifoldEvaluator::success_single_pair(double beta, double gamma, int rounds,
                                              Objective objective) const {
  if (objective == Objective::solutions && solution_weight_ == 0.0) return 0.0;
  std::vector<double> re, im;
  run_single_pair(beta, gamma, rounds, re, im);
  // level 0 is the lowest occupied manifold
  return static_cast<double>(count_[0]) * (re[0] * re[0] + im[0] * im[0]);
}

double ManifoldEvaluator::success_schedule(const AngleSchedule& schedule,
                                           Objective objective) const {
  if (objective == Objective::solutions && solution_weight_ == 0.0) return 0.0;
  schedule.validate();
  const std::size_t levels = energy_.size();
  std::vector<double> re(levels, init_re_), im(levels, init_im_);
  std::vector<double> phase_re, phase_im;
  for (int round = 0; round < schedule.rounds; ++round) {
    build_phase_table(schedule.gamma(round), phase_re, phase_im);
    const double beta = schedule.beta(round);
    run_rounds(std::cos(beta) - 1.0, -std::sin(beta), 1, phase_re, phase_im, re, im);
  }
  return static_cast<double>(count_[0]) * (re[0] * re[0] + im[0] * im[0]);
}

ManifoldEvaluator::Session::Session(const ManifoldEvaluator& evaluator)
    : evaluator_(&evaluator),
      cached_gamma_(std::numeric_limits<double>::quiet_NaN()) {}

double ManifoldEvaluator::Session::cost(double beta, double gamma, int rounds) {
  const ManifoldEvaluator& eval = *evaluator_;
  const std::size_t levels = eval.energy_.size();
  re_.assign(levels, eval.init_re_);
  im_.assign(levels, eval.init_im_);
  if (rounds == 0) return eval.uniform_energy_;

  const double z_re = std::cos(beta) - 1.0;
  const double z_im = -std::sin(beta);
  if (z_re == 0.0 && z_im == 0.0) return eval.uniform_energy_;

  if (gamma != cached_gamma_) {
    identity_phase_ = eval.build_phase_table(gamma, phase_re_, phase_im_);
    cached_gamma_ = gamma;
  }
  if (identity_phase_) return eval.uniform_energy_;

  eval.run_rounds(z_re, z_im, rounds, phase_re_, phase_im_, re_, im_);
  return eval.cost_of(re_, im_);
}

std::vector<double> angle_grid(double spacing) {
  if (spacing <= 0.0 || spacing > kTwoPi) throw std::invalid_argument("bad grid spacing");
  const int steps = static_cast<int>(std::llround(kTwoPi / spacing));
  std::vector<double> grid(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) grid[static_cast<std::size_t>(k)] = k * spacing;
  return grid;
}

LandscapeGrid landscape_grid(const EnergySpectrum& spectrum, int rounds,
                             const std::vector<double>& beta_grid,
                             const std::vector<double>& gamma_grid, int threads) {
  if (rounds < 0) throw std::invalid_argument("negative round count");
  const ManifoldEvaluator evaluator(spectrum);

  LandscapeGrid grid;
  grid.betas = beta_grid;
  grid.gammas = gamma_grid;
  grid.values.assign(beta_grid.size() * gamma_grid.size(), 0.0);

  // gamma-major so each column shares one phase table
  parallel_chunks(0, gamma_grid.size(), threads, [&](std::uint64_t lo, std::uint64_t hi) {
    ManifoldEvaluator::Session session(evaluator);
    for (std::uint64_t j = lo; j < hi; ++j)
      for (std::size_t i = 0; i < beta_grid.size(); ++i)
        grid.values[i * gamma_grid.size() + j] =
            session.cost(beta_grid[i], gamma_grid[j], rounds);
  });
  return grid;
}

std::string state_to_json(const EffectiveState& state) {
  nlohmann::json doc = nlohmann::json::array();
  for (const ManifoldLevel& level : state.levels)
    doc.push_back({level.energy, level.count, level.amplitude.real(), level.amplitude.imag()});
  return doc.dump();
}

std::string landscape_to_csv(const LandscapeGrid& grid) {
  std::ostringstream out;
  out.precision(17);
  out << "beta\\gamma";
  for (const double gamma : grid.gammas) out << ',' << gamma;
  out << '\n';
  for (std::size_t i = 0; i < grid.betas.size(); ++i) {
    out << grid.betas[i];
    for (std::size_t j = 0; j < grid.gammas.size(); ++j) out << ',' << grid.at(i, j);
    out << '\n';
  }
  return out.str();
}

}  // namespace gqaoa
