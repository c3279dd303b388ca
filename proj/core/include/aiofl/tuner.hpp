#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "aiofl/metrics.hpp"
#include "aiofl/presets.hpp"

namespace aiofl {

/// One searched parameter: a config key and its closed bounds.
struct SearchDimension {
  std::string path;
  double lower = 0.0;
  double upper = 1.0;
};

using SearchSpace = std::vector<SearchDimension>;

/// Real-coded GA settings. `budget` caps the number of objective evaluations;
/// `generations` counts evaluated populations, the initial one included.
struct GaConfig {
  std::size_t population = 50;
  std::size_t generations = 1000;
  double crossover_rate = 0.9;
  double mutation_rate = 0.2;
  /// Mutation standard deviation as a fraction of each dimension's range.
  double mutation_scale = 0.1;
  /// Per-generation multiplier on mutation_scale (1 keeps it fixed).
  double mutation_decay = 1.0;
  std::size_t tournament_size = 3;
  std::uint64_t seed = 1;
  std::size_t budget = 5000;
  unsigned threads = 1;

  void validate() const;
};

struct GaResult {
  std::vector<double> best;
  double best_fitness = 0.0;
  /// Best-so-far fitness after each generation.
  std::vector<double> history;
  std::size_t evaluations = 0;
};

using Objective = std::function<double(std::span<const double>)>;

/// Tournament selection, uniform crossover, clipped Gaussian mutation, elitism
/// of one. Objective calls within a generation may run on `threads` workers;
/// all random draws happen on the calling thread, so results depend only on
/// the seed.
GaResult ga_optimize(const Objective& objective, std::span<const SearchDimension> space,
                     const GaConfig& cfg);

/// Penalty fitness for runs that diverge or produce non-finite indices.
inline constexpr double kDivergencePenalty = 1e9;

/// Throws ConfigError if a bound is inverted or a path is not an active key of base.
void validate_space(std::span<const SearchDimension> space, const Preset& base);

/// Applies candidate values to a copy of base.
Preset instantiate(const Preset& base, std::span<const SearchDimension> space,
                   std::span<const double> candidate);

/// OPI of the candidate over base.weights.tf seconds (the tuning horizon).
double evaluate(std::span<const double> candidate, const Preset& base,
                std::span<const SearchDimension> space);

/// Contents of a search-space file: `search.<key> = <lower> <upper>` lines,
/// `ga.<field>` settings, and preset entries (usually `base = <preset>`).
struct TuneJob {
  Preset base;
  SearchSpace space;
  GaConfig ga;
};

/// Throws ConfigError on malformed bounds, unknown ga fields or invalid paths.
TuneJob parse_tune_job(const KeyValueConfig& cfg);

}  // namespace aiofl
