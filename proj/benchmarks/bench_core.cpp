#include <random>

#include <benchmark/benchmark.h>

#include "aiofl/observer.hpp"
#include "aiofl/plant.hpp"
#include "aiofl/presets.hpp"
#include "aiofl/tuner.hpp"

namespace {

void BM_PlantDynamics(benchmark::State& state) {
  const auto p = aiofl::slfjm_default_params();
  double x[4] = {0.1, 0.2, -0.3, 0.4};
  double dx[4];
  for (auto _ : state) {
    aiofl::slfjm_dynamics_unchecked(x, 0.5, 0.0, p, dx);
    benchmark::DoNotOptimize(dx);
  }
}
BENCHMARK(BM_PlantDynamics);

void BM_ObserverDerivative(benchmark::State& state) {
  const auto p = aiofl::preset(state.range(0) ? "s1-inleso" : "s1-leso");
  const aiofl::ExtendedStateObserver eso(p.components.observer);
  double xi[5] = {0.1, 0.2, 0.3, 0.4, 0.5};
  double out[5];
  for (auto _ : state) {
    eso.derivative(xi, 0.15, 1.0, out);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_ObserverDerivative)->Arg(0)->Arg(1);

void BM_Rk4Step(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const aiofl::OdeFunction f = [](double, const Eigen::VectorXd& x, Eigen::VectorXd& dx) {
    dx = -x;
  };
  aiofl::Rk4Stepper stepper(n);
  Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
  for (auto _ : state) {
    stepper.step(f, 0.0, x, 1e-4);
    benchmark::DoNotOptimize(x.data());
  }
}
BENCHMARK(BM_Rk4Step)->Arg(1)->Arg(11);

// Half a simulated second at dt = 1e-4.
void BM_ClosedLoop(benchmark::State& state) {
  auto p = aiofl::preset(state.range(0) ? "s3-inleso" : "s3-leso");
  p.scenario.tf = 0.5;
  for (auto _ : state) {
    auto rec = aiofl::run_closed_loop(p.scenario, p.components);
    benchmark::DoNotOptimize(rec.y.data());
  }
  state.SetItemsProcessed(state.iterations() * 5000);
}
BENCHMARK(BM_ClosedLoop)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_RelativeDegree(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<Eigen::VectorXd> samples;
  for (int i = 0; i < 100; ++i) samples.push_back(Eigen::Vector4d(d(rng), d(rng), d(rng), d(rng)));
  const auto p = aiofl::slfjm_default_params();
  for (auto _ : state) {
    benchmark::DoNotOptimize(aiofl::check_relative_degree(p, samples).rho);
  }
}
BENCHMARK(BM_RelativeDegree)->Unit(benchmark::kMillisecond);

void BM_LyapunovValidate(benchmark::State& state) {
  Eigen::VectorXd a(5);
  a << 5, 10, 10, 5, 1;
  for (auto _ : state) benchmark::DoNotOptimize(aiofl::lyapunov_validate(a, 50.0).bound_constant);
}
BENCHMARK(BM_LyapunovValidate);

void BM_GaSphere(benchmark::State& state) {
  aiofl::SearchSpace space;
  for (int i = 0; i < 5; ++i) space.push_back({"x" + std::to_string(i), -5.0, 5.0});
  const auto sphere = [](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
  };
  aiofl::GaConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(aiofl::ga_optimize(sphere, space, cfg).best_fitness);
}
BENCHMARK(BM_GaSphere)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
