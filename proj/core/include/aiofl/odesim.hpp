#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "aiofl/controller.hpp"
#include "aiofl/differentiator.hpp"
#include "aiofl/errors.hpp"
#include "aiofl/observer.hpp"
#include "aiofl/plant.hpp"

namespace aiofl {

// ---------------------------------------------------------------------------
// Integrators

/// dxdt = f(t, x); dxdt is pre-sized to x.size().
using OdeFunction =
    std::function<void(double t, const Eigen::VectorXd& x, Eigen::VectorXd& dxdt)>;

/// Classical RK4 stepper that reuses its stage buffers.
class Rk4Stepper {
 public:
  explicit Rk4Stepper(Eigen::Index dimension);

  /// Advances x in place by h. Throws DivergenceError if a stage is non-finite.
  void step(const OdeFunction& f, double t, Eigen::VectorXd& x, double h);

 private:
  Eigen::VectorXd k1_, k2_, k3_, k4_, scratch_;
};

Eigen::VectorXd rk4_step(const OdeFunction& f, double t, const Eigen::VectorXd& x,
                         double h);

struct Rk45Options {
  double rtol = 1e-8;
  double atol = 1e-10;
  double initial_step = 1e-4;
  double min_step = 1e-12;
  double max_step = 1e-2;
  bool operator==(const Rk45Options&) const = default;
};

/// Dormand-Prince 5(4) with error control, integrating from t0 to t1.
Eigen::VectorXd rk45_integrate(const OdeFunction& f, double t0,
                               const Eigen::VectorXd& x0, double t1,
                               const Rk45Options& opts = {});

// ---------------------------------------------------------------------------
// Scenario

struct ReferenceSpec {
  enum class Kind { Sine, Constant };
  Kind kind = Kind::Sine;
  double amplitude = 45.0;  ///< sine amplitude, or the constant value
  double omega = 2.0;       ///< rad/s, sine only

  double value(double t) const noexcept;
  bool operator==(const ReferenceSpec&) const = default;
};

enum class EventKind { DisturbanceStep, InertiaScale };

struct ScenarioEvent {
  double time = 0.0;
  EventKind kind = EventKind::DisturbanceStep;
  /// Torque [N m] for a disturbance step; multiplicative factor on Jl otherwise.
  double value = 0.0;
  bool operator==(const ScenarioEvent&) const = default;
};

struct NoiseSpec {
  double mean = 0.0;
  double variance = 0.0;
  std::uint64_t seed = 1;
  bool operator==(const NoiseSpec&) const = default;
};

enum class IntegratorKind { Rk4, Rk45 };

struct Scenario {
  ReferenceSpec reference;
  double tf = 20.0;
  double dt = 1e-4;
  double sample_dt = 1e-3;
  std::vector<ScenarioEvent> events;
  std::optional<NoiseSpec> noise;
  IntegratorKind integrator = IntegratorKind::Rk4;
  Rk45Options rk45;

  /// Throws ConfigError on 0 < dt <= sample_dt <= tf violations, events outside
  /// [0, tf], negative variance, or adaptive stepping with noise.
  void validate() const;
  bool operator==(const Scenario&) const = default;
};

struct EventOutcome {
  PlantParams params;
  /// Disturbance torque from the event time onward, if the event sets one.
  std::optional<double> disturbance;
};

/// Pure parameter transform. Throws InvalidInput on a non-positive inertia factor.
EventOutcome apply_event(const PlantParams& p, const ScenarioEvent& e);

/// One Gaussian draw; the mean itself when the variance is zero (no draw).
double noise_sample(std::mt19937_64& rng, const NoiseSpec& spec);

// ---------------------------------------------------------------------------
// Closed loop

struct LoopComponents {
  PlantParams plant;
  ObserverConfig observer;
  ControllerConfig controller;
  TdConfig differentiator;

  void validate() const;
};

/// Uniformly sampled closed-loop signals.
struct RunRecord {
  std::vector<double> t, r, r1, r2, y, y_meas, u, v;
  std::array<std::vector<double>, 5> xi;
  std::array<std::vector<double>, 4> x;

  std::size_t size() const noexcept { return t.size(); }
  void reserve(std::size_t n);
  bool operator==(const RunRecord&) const = default;
};

/// Carries the samples logged before the run blew up.
class RunDivergedError : public DivergenceError {
 public:
  RunDivergedError(const std::string& what, double time, RunRecord partial)
      : DivergenceError(what, time), partial_(std::move(partial)) {}

  const RunRecord& partial() const noexcept { return partial_; }

 private:
  RunRecord partial_;
};

/// Any state magnitude beyond this aborts a run.
inline constexpr double kDivergenceThreshold = 1e9;

/// Integrates plant (4) + observer (5) + differentiator (2) as one ODE from
/// zero initial conditions and logs every sample_dt. Measurement noise is drawn
/// once per integration step and held. Throws RunDivergedError with the partial
/// record when the state diverges.
RunRecord run_closed_loop(const Scenario& s, const LoopComponents& c);

}  // namespace aiofl
