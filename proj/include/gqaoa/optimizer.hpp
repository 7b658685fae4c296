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
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "gqaoa/manifold.hpp"
#include "gqaoa/spectrum.hpp"

namespace gqaoa {

struct OptimizerConfig {
  /// Grid spacing for exhaustive seeding (problem sizes up to grid_max_n).
  double grid_spacing = 0.017453292519943295;  // pi/180
  int grid_max_n = 20;
  /// Random seeds drawn instead of the grid for larger problems.
  int random_seed_count = 4000;
  /// Number of best seeds refined locally.
  int top_seeds = 20;
  /// Central-difference step for numerical gradients, radians.
  double gradient_step = 1e-6;
  /// Refinement stops when the relative cost change between iterations
  /// drops below this.
  double relative_tolerance = 1e-6;
  int max_iterations = 200;
  /// Largest round count the minimal-round search will probe.
  int round_cap = 4096;
  /// Probe p = 1, 2, 3, ... instead of geometric bracketing + bisection.
  bool linear_scan = false;
  std::uint64_t seed = 0;
  int threads = 0;

  static OptimizerConfig from_json(std::string_view text);
  std::string to_json() const;
};

struct OptimizationResult {
  AngleSchedule schedule;
  /// Expected unsatisfied-clause count at the schedule.
  double cost = 0.0;
  /// Probability of the lowest occupied manifold at the schedule; the
  /// solution probability whenever the formula is satisfiable.
  double success_probability = 0.0;
  /// Grid/random seed the winning refinement started from.
  double seed_beta = 0.0;
  double seed_gamma = 0.0;
  int iterations = 0;
  bool converged = true;
};

/// Initial (beta, gamma) candidates: the full uniform grid over [0, 2*pi)^2
/// for n <= grid_max_n (gamma-major order), otherwise random_seed_count
/// uniform points. Deterministic per seed.
std::vector<std::pair<double, double>> seed_candidates(int n, int rounds, std::uint64_t seed,
                                                       const OptimizerConfig& config = {});

/// Appendix-style two-parameter protocol: evaluate the cost at every seed,
/// locally refine the best ones with BFGS over numerical gradients, return
/// the best refined point. The cost is invariant under
/// (beta, gamma) -> (2*pi - beta, 2*pi - gamma) (complex conjugation), so
/// the representative with gamma in [0, pi] is returned; equal-cost mirror
/// optima therefore resolve deterministically.
OptimizationResult optimize_single_pair(const EnergySpectrum& spectrum, int rounds,
                                        const OptimizerConfig& config = {});

/// Relaxes all 2p angles: same seeds, replicated across rounds (and the
/// refined single-pair optimum as an extra start, making it a feasible
/// point), then BFGS over all parameters.
OptimizationResult optimize_full_schedule(const EnergySpectrum& spectrum, int rounds,
                                          const OptimizerConfig& config = {});

/// Cost callable over one (beta, gamma) pair at a fixed round count.
using PairCost = std::function<double(double beta, double gamma)>;
/// Creates a fresh evaluation context per worker thread.
using PairCostFactory = std::function<PairCost()>;
/// Cost callable over a full schedule.
using ScheduleCost = std::function<double(const AngleSchedule&)>;

/// Same search protocol against a caller-supplied cost (used for the
/// transverse-field mixer, whose cost lives in the full state space).
/// success_probability is left NaN; callers fill it from their simulator.
OptimizationResult optimize_custom(int n, int rounds, AngleSchedule::Mode mode,
                                   const PairCostFactory& pair_cost,
                                   const ScheduleCost& schedule_cost,
                                   const OptimizerConfig& config = {});

struct RoundProbe {
  int rounds = 0;
  double success = 0.0;
};

struct RoundSearchResult {
  int p_min = 0;
  OptimizationResult at_p_min;
  double target = 0.0;
  Objective objective = Objective::solutions;
  /// Every probed round count with its optimized success probability,
  /// ascending in rounds.
  std::vector<RoundProbe> probes;
};

/// Smallest p whose optimized success probability reaches the target, by
/// geometric bracketing p = 1, 2, 4, ... plus bisection (assumes success is
/// monotone in p; config.linear_scan forces the assumption-free scan).
/// p_min = 0 when the uniform state already meets the target.
RoundSearchResult find_min_rounds(const EnergySpectrum& spectrum, double target,
                                  Objective objective, AngleSchedule::Mode mode,
                                  const OptimizerConfig& config = {});

/// Round search for several targets sharing one probe cache, so all results
/// are minima of the same success-vs-p curve.
std::vector<RoundSearchResult> find_min_rounds_targets(const EnergySpectrum& spectrum,
                                                       const std::vector<double>& targets,
                                                       Objective objective,
                                                       AngleSchedule::Mode mode,
                                                       const OptimizerConfig& config = {});

}  // namespace gqaoa
