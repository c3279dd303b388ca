#include "commands.hpp"

#include <fstream>
#include <iostream>
#include <thread>

#include <json.hpp>

#include "aiofl/metrics.hpp"
#include "aiofl/presets.hpp"
#include "aiofl/record_io.hpp"
#include "aiofl/tuner.hpp"

namespace aiofl::cli {

namespace {

namespace fs = std::filesystem;

Preset resolve(const std::optional<std::string>& name, const std::optional<fs::path>& file) {
  if (name) return preset(*name);
  if (file) return preset_from_config(KeyValueConfig::load(*file));
  throw ConfigError("one of --preset or --config is required");
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  out << contents;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

void write_record(const fs::path& path, const RunRecord& rec) {
  std::ofstream out(path, std::ios::binary);
  write_csv(rec, out);
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

nlohmann::json metrics_json(const Preset& p, const MetricsReport& m, const OpiWeights& w,
                            std::size_t samples) {
  nlohmann::json j;
  j["preset"] = p.name;
  j["itae"] = m.itae;
  j["isu"] = m.isu;
  j["iau"] = m.iau;
  j["opi"] = m.opi;
  j["horizon"] = w.tf;
  j["samples"] = samples;
  j["weights"] = {{"w1", w.w1}, {"w2", w.w2}, {"w3", w.w3},
                  {"N1", w.N1}, {"N2", w.N2}, {"N3", w.N3}};
  if (p.scenario.noise) j["seed"] = p.scenario.noise->seed;
  return j;
}

void write_plots(const fs::path& dir, const Preset& p, const RunRecord& rec) {
  write_file(dir / "output.svg",
             svg_plot(rec.t,
                      {{{"reference r", "#888888"}, &rec.r},
                       {{"output y", "#1f77b4"}, &rec.y}},
                      "Output response (" + p.name + ")", "y"));
  write_file(dir / "control.svg",
             svg_plot(rec.t, {{{"control u", "#d62728"}, &rec.u}},
                      "Control signal (" + p.name + ")", "u"));
}

}  // namespace

int simulate_command(const SimulateOptions& opts) {
  try {
    Preset p = resolve(opts.preset, opts.config);
    if (opts.dt) p.scenario.dt = *opts.dt;
    if (opts.tf) {
      p.scenario.tf = *opts.tf;
      std::erase_if(p.scenario.events,
                    [&](const ScenarioEvent& e) { return e.time > p.scenario.tf; });
    }
    if (opts.seed && p.scenario.noise) p.scenario.noise->seed = *opts.seed;

    fs::create_directories(opts.out);
    RunRecord rec;
    try {
      rec = run_closed_loop(p.scenario, p.components);
    } catch (const RunDivergedError& err) {
      write_record(opts.out / "record.csv", err.partial());
      std::cerr << "error: " << err.what() << " (partial record written to "
                << (opts.out / "record.csv").string() << ")\n";
      return 2;
    }
    write_record(opts.out / "record.csv", rec);

    OpiWeights w = p.weights;
    w.tf = p.scenario.tf;
    const MetricsReport m = evaluate_metrics(rec, w);
    write_file(opts.out / "metrics.json", metrics_json(p, m, w, rec.size()).dump(2) + "\n");
    if (opts.plots) write_plots(opts.out, p, rec);
    std::cout << metrics_text(m);
    return 0;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
}

int tune_command(const TuneOptions& opts) {
  try {
    TuneJob job = parse_tune_job(KeyValueConfig::load(opts.space));
    if (opts.budget) job.ga.budget = *opts.budget;
    if (opts.seed) job.ga.seed = *opts.seed;
    if (opts.threads) job.ga.threads = *opts.threads;
    job.ga.validate();

    const Objective objective = [&](std::span<const double> candidate) {
      return evaluate(candidate, job.base, job.space);
    };
    const GaResult result = ga_optimize(objective, job.space, job.ga);

    fs::create_directories(opts.out);
    Preset best = instantiate(job.base, job.space, result.best);
    best.name = job.base.name + "-tuned";
    write_file(opts.out / "best.cfg", "# best fitness (OPI) " + format_number(result.best_fitness) +
                                          " after " + std::to_string(result.evaluations) +
                                          " evaluations\n" + preset_to_config(best).to_string());
    std::string history = "generation,best_fitness\n";
    for (std::size_t g = 0; g < result.history.size(); ++g) {
      history += std::to_string(g) + "," + format_number(result.history[g]) + "\n";
    }
    write_file(opts.out / "history.csv", history);
    std::cout << "best_fitness=" << format_number(result.best_fitness) << "\n";
    for (std::size_t i = 0; i < job.space.size(); ++i) {
      std::cout << job.space[i].path << "=" << format_number(result.best[i]) << "\n";
    }
    return 0;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
}

int presets_command(const std::optional<std::string>& show) {
  try {
    if (show) {
      std::cout << preset_to_config(preset(*show)).to_string();
      return 0;
    }
    for (const auto& name : preset_names()) std::cout << name << "\n";
    return 0;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
}

int analyze_command(const AnalyzeOptions& opts) {
  try {
    const Preset p = resolve(opts.preset, opts.config);
    std::vector<Eigen::VectorXd> samples;
    for (int k = 0; k < 16; ++k) {
      samples.push_back(Eigen::Vector4d(0.1 * k - 0.8, 0.05 * k - 0.4, 0.2 * k - 1.5, 1.0 - 0.1 * k));
    }
    const RelativeDegreeReport rd = check_relative_degree(p.components.plant, samples);
    std::cout << "relative_degree=" << rd.rho << "\n";
    std::cout << "input_coefficient=" << format_number(rd.final_coefficient) << "\n";
    std::cout << "b0=" << format_number(p.components.observer.b0) << "\n";

    const auto& a = p.components.observer.a;
    const LyapunovReport ly = lyapunov_validate(a, p.components.observer.omega0);
    std::cout << "observer_hurwitz=" << (ly.hurwitz ? "true" : "false") << "\n";
    const Eigen::VectorXcd eig = error_dynamics_matrix(a).eigenvalues();
    for (Eigen::Index i = 0; i < eig.size(); ++i) {
      std::cout << "scaled_error_eigenvalue_" << i + 1 << "=" << format_number(eig[i].real())
                << (eig[i].imag() < 0 ? "" : "+") << format_number(eig[i].imag()) << "i\n";
    }
    if (ly.hurwitz) {
      std::cout << "lambda_min=" << format_number(ly.lambda_min) << "\n";
      std::cout << "lambda_max=" << format_number(ly.lambda_max) << "\n";
      std::cout << "bound_constant=" << format_number(ly.bound_constant) << "\n";
    }
    return 0;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
}

}  // namespace aiofl::cli
