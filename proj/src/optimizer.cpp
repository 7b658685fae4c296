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

#include "gqaoa/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "gqaoa/parallel.hpp"
#include "gqaoa/rng.hpp"

#include <json.hpp>

namespace gqaoa {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct ScoredSeed {
  double cost = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

// Total order breaking cost ties by smallest gamma, then beta.
bool seed_less(const ScoredSeed& a, const ScoredSeed& b) {
  if (a.cost != b.cost) return a.cost < b.cost;
  if (a.gamma != b.gamma) return a.gamma < b.gamma;
  return a.beta < b.beta;
}

// Keeps the k best entries of a stream, sorted.
class TopSeeds {
 public:
  explicit TopSeeds(std::size_t k) : k_(k) {}

  void offer(const ScoredSeed& seed) {
    if (entries_.size() == k_ && !seed_less(seed, entries_.back())) return;
    auto it = std::upper_bound(entries_.begin(), entries_.end(), seed, seed_less);
    entries_.insert(it, seed);
    if (entries_.size() > k_) entries_.pop_back();
  }

  std::vector<ScoredSeed>& entries() { return entries_; }

 private:
  std::size_t k_;
  std::vector<ScoredSeed> entries_;
};

// Evaluates the pair cost at every seed and returns the k best. The union
// of per-chunk bests contains the global best k, so the outcome does not
// depend on the chunking.
std::vector<ScoredSeed> scan_seeds(const std::vector<std::pair<double, double>>& seeds,
                                   const PairCostFactory& pair_cost, std::size_t k,
                                   int threads) {
  std::mutex merge_mutex;
  TopSeeds global(k);
  parallel_chunks(0, seeds.size(), threads, [&](std::uint64_t lo, std::uint64_t hi) {
    PairCost cost = pair_cost();
    TopSeeds local(k);
    for (std::uint64_t i = lo; i < hi; ++i) {
      const auto& [beta, gamma] = seeds[i];
      local.offer(ScoredSeed{cost(beta, gamma), beta, gamma});
    }
    std::lock_guard<std::mutex> lock(merge_mutex);
    for (const ScoredSeed& s : local.entries()) global.offer(s);
  });
  if (global.entries().empty()) throw std::logic_error("no seeds scanned");
  return global.entries();
}

using VectorCost = std::function<double(const std::vector<double>&)>;

struct BfgsOutcome {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Dense BFGS over numerical central-difference gradients. Stops when the
// relative cost change between accepted iterates falls below rel_tol, when
// no step along the search direction improves the cost, or at max_iter.
BfgsOutcome bfgs_minimize(const VectorCost& f, std::vector<double> x, double grad_step,
                          double rel_tol, int max_iter) {
  const std::size_t dim = x.size();
  BfgsOutcome out;
  double fx = f(x);

  std::vector<double> hessian_inv(dim * dim, 0.0);
  auto reset_hessian = [&]() {
    std::fill(hessian_inv.begin(), hessian_inv.end(), 0.0);
    for (std::size_t i = 0; i < dim; ++i) hessian_inv[i * dim + i] = 1.0;
  };
  reset_hessian();

  std::vector<double> grad(dim), grad_new(dim), direction(dim), x_new(dim), s(dim), y(dim),
      hy(dim), probe(dim);
  auto gradient = [&](const std::vector<double>& at, std::vector<double>& g) {
    probe = at;
    for (std::size_t i = 0; i < dim; ++i) {
      probe[i] = at[i] + grad_step;
      const double fp = f(probe);
      probe[i] = at[i] - grad_step;
      const double fm = f(probe);
      probe[i] = at[i];
      g[i] = (fp - fm) / (2.0 * grad_step);
    }
  };

  gradient(x, grad);
  int iter = 0;
  bool converged = false;
  while (iter < max_iter) {
    ++iter;
    for (std::size_t i = 0; i < dim; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < dim; ++j) acc += hessian_inv[i * dim + j] * grad[j];
      direction[i] = -acc;
    }
    double slope = 0.0;
    for (std::size_t i = 0; i < dim; ++i) slope += direction[i] * grad[i];
    if (slope >= 0.0) {  // not a descent direction: restart from steepest descent
      reset_hessian();
      slope = 0.0;
      for (std::size_t i = 0; i < dim; ++i) {
        direction[i] = -grad[i];
        slope -= grad[i] * grad[i];
      }
      if (slope == 0.0) {
        converged = true;
        break;
      }
    }

    constexpr double kArmijo = 1e-4;
    double alpha = 1.0;
    double f_new = fx;
    bool improved = false;
    for (int backtrack = 0; backtrack < 45; ++backtrack) {
      for (std::size_t i = 0; i < dim; ++i) x_new[i] = x[i] + alpha * direction[i];
      f_new = f(x_new);
      if (f_new <= fx + kArmijo * alpha * slope) {
        improved = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!improved || !(f_new < fx)) {
      converged = true;  // local minimum at the line-search resolution
      break;
    }

    gradient(x_new, grad_new);
    double sy = 0.0, ss = 0.0, yy = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      s[i] = x_new[i] - x[i];
      y[i] = grad_new[i] - grad[i];
      sy += s[i] * y[i];
      ss += s[i] * s[i];
      yy += y[i] * y[i];
    }
    if (sy > 1e-12 * std::sqrt(ss * yy) && sy > 0.0) {
      const double rho = 1.0 / sy;
      double y_hy = 0.0;
      for (std::size_t i = 0; i < dim; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < dim; ++j) acc += hessian_inv[i * dim + j] * y[j];
        hy[i] = acc;
        y_hy += y[i] * acc;
      }
      const double coeff = rho * (1.0 + rho * y_hy);
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
          hessian_inv[i * dim + j] +=
              coeff * s[i] * s[j] - rho * (s[i] * hy[j] + hy[i] * s[j]);
    } else {
      reset_hessian();
    }

    const double change = std::abs(fx - f_new);
    const double scale = std::max({std::abs(fx), std::abs(f_new), 1e-300});
    x.swap(x_new);
    fx = f_new;
    grad.swap(grad_new);
    if (change <= rel_tol * scale) {
      converged = true;
      break;
    }
  }

  out.x = std::move(x);
  out.value = fx;
  out.iterations = iter;
  out.converged = converged;
  return out;
}

// The cost is conjugation-invariant under negating every angle; report the
// mirror with the leading gamma in [0, pi].
AngleSchedule canonical_schedule(AngleSchedule::Mode mode, int rounds,
                                 std::vector<double> betas, std::vector<double> gammas) {
  for (double& b : betas) b = reduce_angle(b);
  for (double& g : gammas) g = reduce_angle(g);
  if (!gammas.empty() && gammas.front() > std::numbers::pi) {
    for (double& b : betas) b = reduce_angle(kTwoPi - b);
    for (double& g : gammas) g = reduce_angle(kTwoPi - g);
  }
  if (mode == AngleSchedule::Mode::single_pair)
    return AngleSchedule::single_pair(rounds, betas.front(), gammas.front());
  return AngleSchedule::per_round(std::move(betas), std::move(gammas));
}

bool schedule_less(const OptimizationResult& a, const OptimizationResult& b) {
  if (a.cost != b.cost) return a.cost < b.cost;
  if (a.schedule.gammas != b.schedule.gammas) return a.schedule.gammas < b.schedule.gammas;
  return a.schedule.betas < b.schedule.betas;
}

struct Start {
  std::vector<double> x;
  double seed_beta = 0.0, seed_gamma = 0.0;
};

Start replicated_start(int rounds, double beta, double gamma, double seed_beta,
                       double seed_gamma) {
  Start start;
  start.seed_beta = seed_beta;
  start.seed_gamma = seed_gamma;
  start.x.assign(2 * static_cast<std::size_t>(rounds), 0.0);
  std::fill(start.x.begin(), start.x.begin() + rounds, beta);
  std::fill(start.x.begin() + rounds, start.x.end(), gamma);
  return start;
}

OptimizationResult refine_starts(int rounds, AngleSchedule::Mode mode,
                                 const std::vector<Start>& starts,
                                 const ScheduleCost& schedule_cost,
                                 const OptimizerConfig& config) {
  auto vector_cost = [&](const std::vector<double>& x) {
    if (mode == AngleSchedule::Mode::single_pair)
      return schedule_cost(AngleSchedule::single_pair(rounds, x[0], x[1]));
    std::vector<double> betas(x.begin(), x.begin() + rounds);
    std::vector<double> gammas(x.begin() + rounds, x.end());
    return schedule_cost(AngleSchedule::per_round(std::move(betas), std::move(gammas)));
  };

  bool have_best = false;
  OptimizationResult best;
  for (const Start& start : starts) {
    const BfgsOutcome refined = bfgs_minimize(vector_cost, start.x, config.gradient_step,
                                              config.relative_tolerance, config.max_iterations);
    std::vector<double> betas, gammas;
    if (mode == AngleSchedule::Mode::single_pair) {
      betas = {refined.x[0]};
      gammas = {refined.x[1]};
    } else {
      betas.assign(refined.x.begin(), refined.x.begin() + rounds);
      gammas.assign(refined.x.begin() + rounds, refined.x.end());
    }
    OptimizationResult candidate;
    candidate.schedule = canonical_schedule(mode, rounds, std::move(betas), std::move(gammas));
    candidate.cost = schedule_cost(candidate.schedule);
    candidate.seed_beta = start.seed_beta;
    candidate.seed_gamma = start.seed_gamma;
    candidate.iterations = refined.iterations;
    candidate.converged = refined.converged;
    if (!have_best || schedule_less(candidate, best)) {
      best = std::move(candidate);
      have_best = true;
    }
  }
  return best;
}

// One seed scan feeds both protocols: the two-parameter refinement, and for
// the per-round relaxation the same seeds replicated across rounds plus the
// refined two-parameter optimum (so the relaxed cost can never be worse).
OptimizationResult search_schedule(int n, int rounds, AngleSchedule::Mode mode,
                                   const PairCostFactory& pair_cost,
                                   const ScheduleCost& schedule_cost,
                                   const OptimizerConfig& config) {
  if (rounds < 1) throw std::invalid_argument("optimization needs at least one round");
  const auto seeds = seed_candidates(n, rounds, config.seed, config);
  const std::size_t k = std::max<std::size_t>(1, static_cast<std::size_t>(config.top_seeds));
  const std::vector<ScoredSeed> top = scan_seeds(seeds, pair_cost, k, config.threads);

  std::vector<Start> single_starts;
  single_starts.reserve(top.size());
  for (const ScoredSeed& seed : top)
    single_starts.push_back(Start{{seed.beta, seed.gamma}, seed.beta, seed.gamma});
  OptimizationResult single =
      refine_starts(rounds, AngleSchedule::Mode::single_pair, single_starts, schedule_cost,
                    config);
  if (mode == AngleSchedule::Mode::single_pair) return single;

  std::vector<Start> full_starts;
  full_starts.reserve(top.size() + 1);
  for (const ScoredSeed& seed : top)
    full_starts.push_back(replicated_start(rounds, seed.beta, seed.gamma, seed.beta, seed.gamma));
  full_starts.push_back(replicated_start(rounds, single.schedule.betas.front(),
                                         single.schedule.gammas.front(), single.seed_beta,
                                         single.seed_gamma));
  return refine_starts(rounds, AngleSchedule::Mode::per_round, full_starts, schedule_cost,
                       config);
}

}  // namespace

OptimizerConfig OptimizerConfig::from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("invalid optimizer config: ") + e.what());
  }
  OptimizerConfig config;
  for (const auto& [key, value] : doc.items()) {
    if (key == "grid_spacing") config.grid_spacing = value.get<double>();
    else if (key == "grid_max_n") config.grid_max_n = value.get<int>();
    else if (key == "random_seed_count") config.random_seed_count = value.get<int>();
    else if (key == "top_seeds") config.top_seeds = value.get<int>();
    else if (key == "gradient_step") config.gradient_step = value.get<double>();
    else if (key == "relative_tolerance") config.relative_tolerance = value.get<double>();
    else if (key == "max_iterations") config.max_iterations = value.get<int>();
    else if (key == "round_cap") config.round_cap = value.get<int>();
    else if (key == "linear_scan") config.linear_scan = value.get<bool>();
    else if (key == "seed") config.seed = value.get<std::uint64_t>();
    else if (key == "threads") config.threads = value.get<int>();
    else throw std::invalid_argument("unknown optimizer config key: " + key);
  }
  return config;
}

std::string OptimizerConfig::to_json() const {
  nlohmann::json doc{{"grid_spacing", grid_spacing},
                     {"grid_max_n", grid_max_n},
                     {"random_seed_count", random_seed_count},
                     {"top_seeds", top_seeds},
                     {"gradient_step", gradient_step},
                     {"relative_tolerance", relative_tolerance},
                     {"max_iterations", max_iterations},
                     {"round_cap", round_cap},
                     {"linear_scan", linear_scan},
                     {"seed", seed},
                     {"threads", threads}};
  return doc.dump();
}

std::vector<std::pair<double, double>> seed_candidates(int n, int rounds, std::uint64_t seed,
                                                       const OptimizerConfig& config) {
  if (rounds < 1) throw std::invalid_argument("seeding needs at least one round");
  std::vector<std::pair<double, double>> out;
  if (n <= config.grid_max_n) {
    const std::vector<double> grid = angle_grid(config.grid_spacing);
    out.reserve(grid.size() * grid.size());
    for (const double gamma : grid)
      for (const double beta : grid) out.emplace_back(beta, gamma);
  } else {
    Rng rng(seed);
    out.reserve(static_cast<std::size_t>(config.random_seed_count));
    for (int i = 0; i < config.random_seed_count; ++i) {
      const double beta = rng.next_real(0.0, kTwoPi);
      const double gamma = rng.next_real(0.0, kTwoPi);
      out.emplace_back(beta, gamma);
    }
  }
  return out;
}

namespace {

OptimizationResult optimize_manifold(const EnergySpectrum& spectrum, int rounds,
                                     AngleSchedule::Mode mode, const OptimizerConfig& config) {
  const ManifoldEvaluator evaluator(spectrum);
  PairCostFactory factory = [&evaluator, rounds]() -> PairCost {
    auto session = std::make_shared<ManifoldEvaluator::Session>(evaluator);
    return [session, rounds](double beta, double gamma) {
      return session->cost(beta, gamma, rounds);
    };
  };
  ScheduleCost schedule_cost = [&evaluator](const AngleSchedule& schedule) {
    return evaluator.cost_schedule(schedule);
  };
  OptimizationResult result =
      search_schedule(spectrum.n, rounds, mode, factory, schedule_cost, config);
  result.success_probability =
      evaluator.success_schedule(result.schedule, Objective::min_energy);
  return result;
}

}  // namespace

OptimizationResult optimize_single_pair(const EnergySpectrum& spectrum, int rounds,
                                        const OptimizerConfig& config) {
  return optimize_manifold(spectrum, rounds, AngleSchedule::Mode::single_pair, config);
}

OptimizationResult optimize_full_schedule(const EnergySpectrum& spectrum, int rounds,
                                          const OptimizerConfig& config) {
  return optimize_manifold(spectrum, rounds, AngleSchedule::Mode::per_round, config);
}

OptimizationResult optimize_custom(int n, int rounds, AngleSchedule::Mode mode,
                                   const PairCostFactory& pair_cost,
                                   const ScheduleCost& schedule_cost,
                                   const OptimizerConfig& config) {
  OptimizationResult result =
      search_schedule(n, rounds, mode, pair_cost, schedule_cost, config);
  result.success_probability = std::numeric_limits<double>::quiet_NaN();
  return result;
}

namespace {

// Shared probe state for the round searches.
struct ProbeCache {
  const EnergySpectrum* spectrum;
  Objective objective;
  AngleSchedule::Mode mode;
  const OptimizerConfig* config;
  std::map<int, OptimizationResult> probes;

  const OptimizationResult& at(int rounds) {
    auto it = probes.find(rounds);
    if (it != probes.end()) return it->second;
    OptimizationResult result;
    if (rounds == 0) {
      result.schedule = AngleSchedule::single_pair(0, 0.0, 0.0);
      const ManifoldEvaluator evaluator(*spectrum);
      result.cost = evaluator.uniform_energy();
      result.success_probability = spectrum->min_energy_probability();
      result.converged = true;
    } else {
      result = mode == AngleSchedule::Mode::single_pair
                   ? optimize_single_pair(*spectrum, rounds, *config)
                   : optimize_full_schedule(*spectrum, rounds, *config);
    }
    return probes.emplace(rounds, std::move(result)).first->second;
  }

  double success(int rounds) { return at(rounds).success_probability; }
};

}  // namespace

std::vector<RoundSearchResult> find_min_rounds_targets(const EnergySpectrum& spectrum,
                                                       const std::vector<double>& targets,
                                                       Objective objective,
                                                       AngleSchedule::Mode mode,
                                                       const OptimizerConfig& config) {
  for (const double target : targets)
    if (!(target > 0.0 && target < 1.0))
      throw std::invalid_argument("target success probability must lie in (0, 1)");
  if (objective == Objective::solutions && spectrum.solution_count() == 0)
    throw std::invalid_argument("objective 'solutions' needs a satisfiable formula");

  ProbeCache cache{&spectrum, objective, mode, &config, {}};

  // ascending targets let later searches reuse earlier probes
  std::vector<std::size_t> order(targets.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return targets[a] < targets[b]; });

  std::vector<RoundSearchResult> results(targets.size());
  for (const std::size_t index : order) {
    const double target = targets[index];
    int p_min = -1;
    if (cache.success(0) >= target) {
      p_min = 0;
    } else if (config.linear_scan) {
      for (int p = 1; p <= config.round_cap; ++p) {
        if (cache.success(p) >= target) {
          p_min = p;
          break;
        }
      }
    } else {
      int lo = 0;  // known below target
      int hi = 1;
      while (hi <= config.round_cap && cache.success(hi) < target) {
        lo = hi;
        hi *= 2;
      }
      if (hi <= config.round_cap) {
        while (hi - lo > 1) {
          const int mid = lo + (hi - lo) / 2;
          if (cache.success(mid) >= target)
            hi = mid;
          else
            lo = mid;
        }
        p_min = hi;
      }
    }
    if (p_min < 0)
      throw std::runtime_error("target " + std::to_string(target) +
                               " not reached within the round cap " +
                               std::to_string(config.round_cap));

    RoundSearchResult result;
    result.p_min = p_min;
    result.at_p_min = cache.at(p_min);
    result.target = target;
    result.objective = objective;
    results[index] = std::move(result);
  }

  // probe history snapshot (identical across the targets of one search)
  std::vector<RoundProbe> probes;
  probes.reserve(cache.probes.size());
  for (const auto& [p, result] : cache.probes)
    probes.push_back(RoundProbe{p, result.success_probability});
  for (RoundSearchResult& result : results) result.probes = probes;
  return results;
}

RoundSearchResult find_min_rounds(const EnergySpectrum& spectrum, double target,
                                  Objective objective, AngleSchedule::Mode mode,
                                  const OptimizerConfig& config) {
  return find_min_rounds_targets(spectrum, {target}, objective, mode, config).front();
}

}  // namespace gqaoa
