#include "aiofl/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>

#include "aiofl/errors.hpp"

namespace aiofl {

void GaConfig::validate() const {
  if (population < 4) throw ConfigError("ga: population must be at least 4");
  if (generations < 1) throw ConfigError("ga: generations must be at least 1");
  if (budget == 0) throw ConfigError("ga: evaluation budget must be positive");
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!unit(crossover_rate) || !unit(mutation_rate)) {
    throw ConfigError("ga: rates must lie in [0, 1]");
  }
  if (!(mutation_scale >= 0.0) || !(mutation_decay > 0.0)) {
    throw ConfigError("ga: mutation scale must be >= 0 and decay > 0");
  }
  if (tournament_size < 1) throw ConfigError("ga: tournament size must be positive");
  if (threads < 1) throw ConfigError("ga: threads must be positive");
}

namespace {

using Genome = std::vector<double>;

void evaluate_batch(const Objective& objective, const std::vector<Genome>& genomes,
                    std::vector<double>& fitness, std::size_t first, unsigned threads) {
  auto run = [&](std::size_t i) {
    double f = objective(genomes[i]);
    fitness[i] = std::isfinite(f) ? f : kDivergencePenalty;
  };
  const std::size_t count = genomes.size() - first;
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (workers <= 1) {
    for (std::size_t i = first; i < genomes.size(); ++i) run(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = first + w; i < genomes.size(); i += workers) run(i);
    });
  }
}

std::size_t argmin(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::min_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

GaResult ga_optimize(const Objective& objective, std::span<const SearchDimension> space,
                     const GaConfig& cfg) {
  cfg.validate();
  if (space.empty()) throw ConfigError("ga: empty search space");
  for (const auto& d : space) {
    if (!(d.lower < d.upper)) throw ConfigError("ga: lower bound must be below upper for " + d.path);
  }

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::size_t dims = space.size();
  const std::size_t pop = std::min(cfg.population, cfg.budget);

  std::vector<Genome> genomes(pop, Genome(dims));
  for (auto& g : genomes) {
    for (std::size_t j = 0; j < dims; ++j) {
      g[j] = space[j].lower + unit(rng) * (space[j].upper - space[j].lower);
    }
  }
  std::vector<double> fitness(pop);
  evaluate_batch(objective, genomes, fitness, 0, cfg.threads);

  GaResult result;
  result.evaluations = pop;
  result.history.push_back(fitness[argmin(fitness)]);

  auto tournament = [&]() -> const Genome& {
    std::uniform_int_distribution<std::size_t> pick(0, pop - 1);
    std::size_t best = pick(rng);
    for (std::size_t k = 1; k < cfg.tournament_size; ++k) {
      const std::size_t c = pick(rng);
      if (fitness[c] < fitness[best]) best = c;
    }
    return genomes[best];
  };

  double scale = cfg.mutation_scale;
  for (std::size_t gen = 1; gen < cfg.generations; ++gen) {
    if (pop < 2 || result.evaluations + (pop - 1) > cfg.budget) break;
    std::vector<Genome> next;
    next.reserve(pop);
    const std::size_t elite = argmin(fitness);
    next.push_back(genomes[elite]);
    while (next.size() < pop) {
      const Genome& a = tournament();
      const Genome& b = tournament();
      Genome child = a;
      if (unit(rng) < cfg.crossover_rate) {
        for (std::size_t j = 0; j < dims; ++j) {
          if (unit(rng) < 0.5) child[j] = b[j];
        }
      }
      for (std::size_t j = 0; j < dims; ++j) {
        if (unit(rng) < cfg.mutation_rate) {
          const double range = space[j].upper - space[j].lower;
          child[j] = std::clamp(child[j] + scale * range * gauss(rng), space[j].lower,
                                space[j].upper);
        }
      }
      next.push_back(std::move(child));
    }
    std::vector<double> next_fitness(pop);
    next_fitness[0] = fitness[elite];
    evaluate_batch(objective, next, next_fitness, 1, cfg.threads);
    result.evaluations += pop - 1;
    genomes = std::move(next);
    fitness = std::move(next_fitness);
    result.history.push_back(fitness[argmin(fitness)]);
    scale *= cfg.mutation_decay;
  }

  const std::size_t best = argmin(fitness);
  result.best = genomes[best];
  result.best_fitness = fitness[best];
  return result;
}

void validate_space(std::span<const SearchDimension> space, const Preset& base) {
  if (space.empty()) throw ConfigError("search space is empty");
  const KeyValueConfig active = preset_to_config(base);
  for (const auto& d : space) {
    if (!(d.lower < d.upper)) {
      throw ConfigError("search space: lower bound must be below upper for " + d.path);
    }
    if (!active.contains(d.path)) {
      throw ConfigError("search space: '" + d.path + "' is not a parameter of preset " +
                        base.name);
    }
  }
}

Preset instantiate(const Preset& base, std::span<const SearchDimension> space,
                   std::span<const double> candidate) {
  if (candidate.size() != space.size()) {
    throw InvalidInput("candidate dimension does not match the search space");
  }
  KeyValueConfig cfg = preset_to_config(base);
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (!cfg.contains(space[i].path)) {
      throw ConfigError("unresolvable parameter path '" + space[i].path + "'");
    }
    cfg.set(space[i].path, format_number(candidate[i]));
  }
  return preset_from_config(cfg);
}

double evaluate(std::span<const double> candidate, const Preset& base,
                std::span<const SearchDimension> space) {
  if (candidate.size() != space.size()) {
    throw InvalidInput("candidate dimension does not match the search space");
  }
  const KeyValueConfig active = preset_to_config(base);
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (!active.contains(space[i].path)) {
      throw ConfigError("unresolvable parameter path '" + space[i].path + "'");
    }
    if (candidate[i] < space[i].lower || candidate[i] > space[i].upper) {
      throw InvalidInput("candidate outside the search bounds for " + space[i].path);
    }
  }
  try {
    Preset p = instantiate(base, space, candidate);
    p.scenario.tf = p.weights.tf;
    std::erase_if(p.scenario.events,
                  [&](const ScenarioEvent& e) { return e.time > p.scenario.tf; });
    const RunRecord rec = run_closed_loop(p.scenario, p.components);
    const double value = evaluate_metrics(rec, p.weights).opi;
    return std::isfinite(value) ? value : kDivergencePenalty;
  } catch (const DivergenceError&) {
    return kDivergencePenalty;
  } catch (const ConfigError&) {
    // Bounds can admit values that break a component invariant (alpha = 1, ...).
    return kDivergencePenalty;
  }
}

TuneJob parse_tune_job(const KeyValueConfig& cfg) {
  constexpr std::string_view search_prefix = "search.";
  constexpr std::string_view ga_prefix = "ga.";
  TuneJob job;
  KeyValueConfig preset_entries;
  auto count = [](const std::string& key, const std::string& text) -> std::size_t {
    const double v = parse_number(text, key);
    if (v < 0.0 || v != std::floor(v)) throw ConfigError("'" + key + "' must be a nonnegative integer");
    return static_cast<std::size_t>(v);
  };
  for (const auto& [key, value] : cfg.entries()) {
    if (key.starts_with(search_prefix)) {
      std::istringstream in(value);
      std::string lo, hi, extra;
      if (!(in >> lo >> hi) || (in >> extra)) {
        throw ConfigError("'" + key + "': expected '<lower> <upper>'");
      }
      job.space.push_back(
          {key.substr(search_prefix.size()), parse_number(lo, key), parse_number(hi, key)});
    } else if (key.starts_with(ga_prefix)) {
      const std::string field = key.substr(ga_prefix.size());
      GaConfig& ga = job.ga;
      if (field == "population") {
        ga.population = count(key, value);
      } else if (field == "generations") {
        ga.generations = count(key, value);
      } else if (field == "crossover_rate") {
        ga.crossover_rate = parse_number(value, key);
      } else if (field == "mutation_rate") {
        ga.mutation_rate = parse_number(value, key);
      } else if (field == "mutation_scale") {
        ga.mutation_scale = parse_number(value, key);
      } else if (field == "mutation_decay") {
        ga.mutation_decay = parse_number(value, key);
      } else if (field == "tournament_size") {
        ga.tournament_size = count(key, value);
      } else if (field == "seed") {
        ga.seed = count(key, value);
      } else if (field == "budget") {
        ga.budget = count(key, value);
      } else if (field == "threads") {
        ga.threads = static_cast<unsigned>(count(key, value));
      } else {
        throw ConfigError("unknown GA setting '" + key + "'");
      }
    } else {
      preset_entries.set(key, value);
    }
  }
  job.base = preset_from_config(preset_entries);
  validate_space(job.space, job.base);
  job.ga.validate();
  return job;
}

}  // namespace aiofl
