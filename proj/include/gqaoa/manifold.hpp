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

#include "gqaoa/spectrum.hpp"

namespace gqaoa {

/// Normalizes an angle into [0, 2*pi).
double reduce_angle(double radians);

/// Variational angles for p rounds: either one (beta, gamma) pair shared by
/// every round or one pair per round. Angles are stored reduced mod 2*pi;
/// both round unitaries are 2*pi-periodic because the energies are integers.
struct AngleSchedule {
  enum class Mode { single_pair, per_round };

  Mode mode = Mode::single_pair;
  int rounds = 0;
  std::vector<double> betas;   // size 1 (single_pair) or rounds (per_round)
  std::vector<double> gammas;  // likewise

  static AngleSchedule single_pair(int rounds, double beta, double gamma);
  static AngleSchedule per_round(std::vector<double> betas, std::vector<double> gammas);

  double beta(int round) const { return betas[mode == Mode::single_pair ? 0 : static_cast<std::size_t>(round)]; }
  double gamma(int round) const { return gammas[mode == Mode::single_pair ? 0 : static_cast<std::size_t>(round)]; }

  void validate() const;
};

std::string to_string(AngleSchedule::Mode mode);
AngleSchedule::Mode mode_from_string(std::string_view name);

/// One occupied energy manifold: all `count` assignments at energy `energy`
/// share the amplitude `amplitude` (the Grover mixer preserves this).
struct ManifoldLevel {
  int energy = 0;
  std::uint64_t count = 0;
  std::complex<double> amplitude;
};

/// Grover-mixer QAOA state in the reduced manifold space: one amplitude per
/// occupied energy level instead of one per assignment.
struct EffectiveState {
  int n = 0;
  std::vector<ManifoldLevel> levels;

  /// Total probability sum(count * |amplitude|^2); 1 for a valid state.
  double norm() const;

  /// Probability carried by one manifold.
  double level_probability(std::size_t index) const;
};

enum class Objective { solutions, min_energy };

std::string to_string(Objective objective);
Objective objective_from_string(std::string_view name);

/// The uniform superposition |+>: every occupied level at amplitude
/// 2^(-n/2). For odd n the amplitude is split evenly between the real and
/// imaginary parts (a global phase) so the stored per-assignment
/// probability is exactly 2^-n.
EffectiveState init_uniform(const EnergySpectrum& spectrum);

/// One QAOA round: the diagonal phase exp(-i*gamma*E) followed by the
/// Grover mixer exp(-i*beta*|+><+|), which adds
/// (exp(-i*beta)-1) * 2^-n * sum_E count_E*amplitude_E to every level.
/// Norm drift beyond 1e-9 indicates a bug and throws; no silent
/// renormalization is ever applied.
EffectiveState apply_round(const EffectiveState& state, double beta, double gamma);

/// init_uniform followed by the scheduled rounds.
EffectiveState run_schedule(const EnergySpectrum& spectrum, const AngleSchedule& schedule);

/// Cost value: expected number of unsatisfied clauses,
/// sum_E count_E * |amplitude_E|^2 * E. Exactly m/8 on the uniform state.
double expected_energy(const EffectiveState& state);

/// Probability of measuring a solution (objective `solutions`; 0 when the
/// formula is unsatisfiable) or of landing in the lowest occupied manifold
/// (objective `min_energy`; coincides with `solutions` when satisfiable).
double success_probability(const EffectiveState& state, Objective objective);

/// Flattened per-level arrays plus the round kernel, reused across the many
/// cost evaluations of a grid scan or refinement. Single-pair rounds with an
/// identity mixer (beta = 0) or an identity phase table (gamma = 0) cannot
/// move probability out of the uniform state, so those columns evaluate to
/// the uniform energy exactly.
class ManifoldEvaluator {
 public:
  explicit ManifoldEvaluator(const EnergySpectrum& spectrum);

  int variable_count() const { return n_; }
  int level_count() const { return static_cast<int>(energy_.size()); }

  /// Expected energy of the uniform state, exactly m/8.
  double uniform_energy() const { return uniform_energy_; }

  double cost_single_pair(double beta, double gamma, int rounds) const;
  double cost_schedule(const AngleSchedule& schedule) const;

  /// Lowest-manifold probability at the given angles (shares the kernel).
  double success_single_pair(double beta, double gamma, int rounds, Objective objective) const;
  double success_schedule(const AngleSchedule& schedule, Objective objective) const;

  /// Per-worker scratch that caches the phase table across consecutive
  /// evaluations sharing one gamma; grid scans are gamma-major, so the
  /// table is rebuilt once per column instead of once per point.
  class Session {
   public:
    explicit Session(const ManifoldEvaluator& evaluator);
    double cost(double beta, double gamma, int rounds);

   private:
    const ManifoldEvaluator* evaluator_;
    double cached_gamma_;
    bool identity_phase_ = false;
    std::vector<double> phase_re_, phase_im_, re_, im_;
  };

 private:
  friend class Session;

  /// Fills the exp(-i*gamma*E) table; true if every entry is exactly 1.
  bool build_phase_table(double gamma, std::vector<double>& phase_re,
                         std::vector<double>& phase_im) const;
  void run_rounds(double z_re, double z_im, int rounds, const std::vector<double>& phase_re,
                  const std::vector<double>& phase_im, std::vector<double>& re,
                  std::vector<double>& im) const;
  double cost_of(const std::vector<double>& re, const std::vector<double>& im) const;
  void run_single_pair(double beta, double gamma, int rounds,
                       std::vector<double>& re, std::vector<double>& im) const;

  int n_ = 0;
  double scale_ = 0.0;  // 2^-n
  double init_re_ = 0.0, init_im_ = 0.0;
  std::vector<double> energy_;         // occupied level energies
  std::vector<double> weight_;         // manifold counts
  std::vector<double> energy_weight_;  // count * energy
  std::vector<std::uint64_t> count_;
  double uniform_energy_ = 0.0;
  double solution_weight_ = 0.0;  // count at E=0 (0 if unsatisfiable)
};

/// Expected-energy surface of the single-pair schedule over a (beta, gamma)
/// grid; values are row-major with rows indexed by beta.
struct LandscapeGrid {
  std::vector<double> betas;
  std::vector<double> gammas;
  std::vector<double> values;

  double at(std::size_t beta_index, std::size_t gamma_index) const {
    return values[beta_index * gammas.size() + gamma_index];
  }
};

/// Uniformly spaced grid over [0, 2*pi) with the given spacing.
std::vector<double> angle_grid(double spacing);

LandscapeGrid landscape_grid(const EnergySpectrum& spectrum, int rounds,
                             const std::vector<double>& beta_grid,
                             const std::vector<double>& gamma_grid, int threads = 0);

/// State dump as a JSON list of (E, count, Re amplitude, Im amplitude).
std::string state_to_json(const EffectiveState& state);

/// Landscape matrix as CSV; first row carries the gamma grid, first column
/// the beta grid, angles in radians.
std::string landscape_to_csv(const LandscapeGrid& grid);

}  // namespace gqaoa
