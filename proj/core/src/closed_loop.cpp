#include <algorithm>
#include <cmath>
#include <string>

#include "aiofl/odesim.hpp"

namespace aiofl {

double ReferenceSpec::value(double t) const noexcept {
  return kind == Kind::Sine ? amplitude * std::sin(omega * t) : amplitude;
}

namespace {

bool is_multiple(double whole, double part) {
  const double ratio = whole / part;
  return std::abs(ratio - std::round(ratio)) <= 1e-9 * std::max(1.0, ratio);
}

}  // namespace

void Scenario::validate() const {
  if (!(dt > 0.0)) throw ConfigError("scenario: dt must be positive");
  if (!(dt <= sample_dt)) throw ConfigError("scenario: dt must not exceed sample_dt");
  if (!(sample_dt <= tf)) throw ConfigError("scenario: sample_dt must not exceed tf");
  if (!is_multiple(sample_dt, dt)) {
    throw ConfigError("scenario: sample_dt must be an integer multiple of dt");
  }
  if (!is_multiple(tf, sample_dt)) {
    throw ConfigError("scenario: tf must be an integer multiple of sample_dt");
  }
  if (!std::isfinite(reference.amplitude) || !std::isfinite(reference.omega)) {
    throw ConfigError("scenario: reference must be finite");
  }
  for (const auto& e : events) {
    if (!(e.time >= 0.0 && e.time <= tf)) {
      throw ConfigError("scenario: event time outside [0, tf]");
    }
    if (e.kind == EventKind::InertiaScale && !(e.value > 0.0)) {
      throw ConfigError("scenario: inertia scale factor must be positive");
    }
  }
  if (noise) {
    if (!(noise->variance >= 0.0)) throw ConfigError("scenario: noise variance must be >= 0");
    if (integrator == IntegratorKind::Rk45 && noise->variance > 0.0) {
      throw ConfigError("scenario: adaptive RK45 is only available for noise-free runs");
    }
  }
}

EventOutcome apply_event(const PlantParams& p, const ScenarioEvent& e) {
  EventOutcome out{p, std::nullopt};
  switch (e.kind) {
    case EventKind::InertiaScale:
      if (!(e.value > 0.0) || !std::isfinite(e.value)) {
        throw InvalidInput("apply_event: inertia scale factor must be positive");
      }
      out.params.Jl *= e.value;
      break;
    case EventKind::DisturbanceStep:
      out.disturbance = e.value;
      break;
  }
  return out;
}

double noise_sample(std::mt19937_64& rng, const NoiseSpec& spec) {
  if (spec.variance == 0.0) return spec.mean;
  std::normal_distribution<double> dist(spec.mean, std::sqrt(spec.variance));
  return dist(rng);
}

void LoopComponents::validate() const {
  plant.validate();
  observer.validate();
  if (observer.rho != 4) {
    throw ConfigError("closed loop: the manipulator has relative degree 4, observer rho must be 4");
  }
  aiofl::validate(controller);
  aiofl::validate(differentiator);
}

void RunRecord::reserve(std::size_t n) {
  for (auto* col : {&t, &r, &r1, &r2, &y, &y_meas, &u, &v}) col->reserve(n);
  for (auto& col : xi) col.reserve(n);
  for (auto& col : x) col.reserve(n);
}

namespace {

// State layout: plant x[0..3], observer xi_hat[4..8], differentiator r1, r2 at [9], [10].
constexpr Eigen::Index kPlant = 0;
constexpr Eigen::Index kObserver = 4;
constexpr Eigen::Index kTd = 9;
constexpr Eigen::Index kStateSize = 11;

struct LoopSignals {
  double r, y, y_meas, v, u;
};

class ClosedLoop {
 public:
  explicit ClosedLoop(const LoopComponents& c)
      : params_(c.plant), eso_(c.observer), controller_(c.controller), td_(c.differentiator),
        b0_(c.observer.b0) {}

  LoopSignals signals(double t, const Eigen::VectorXd& z) const noexcept {
    LoopSignals s{};
    s.r = reference_->value(t);
    s.y = z[kPlant] + z[kPlant + 1];
    s.y_meas = s.y + noise_;
    // Only the first two estimates enter the feedback.
    const double e1 = z[kTd] - z[kObserver];
    const double e2 = z[kTd + 1] - z[kObserver + 1];
    s.v = virtual_control(e1, e2, controller_);
    s.u = s.v - z[kObserver + 4] / b0_;
    return s;
  }

  void rhs(double t, const Eigen::VectorXd& z, Eigen::VectorXd& dz) const noexcept {
    const LoopSignals s = signals(t, z);
    slfjm_dynamics_unchecked(z.data() + kPlant, s.u, disturbance_, params_, dz.data() + kPlant);
    eso_.derivative(z.data() + kObserver, s.y_meas, s.u, dz.data() + kObserver);
    const TdState rate = differentiator_rate({z[kTd], z[kTd + 1]}, s.r, td_);
    dz[kTd] = rate.r1;
    dz[kTd + 1] = rate.r2;
  }

  void apply(const ScenarioEvent& e) {
    EventOutcome out = apply_event(params_, e);
    params_ = out.params;
    if (out.disturbance) disturbance_ = *out.disturbance;
  }

  void set_reference(const ReferenceSpec* ref) noexcept { reference_ = ref; }
  void set_noise(double n) noexcept { noise_ = n; }

 private:
  PlantParams params_;
  ExtendedStateObserver eso_;
  ControllerConfig controller_;
  TdConfig td_;
  double b0_;
  const ReferenceSpec* reference_ = nullptr;
  double disturbance_ = 0.0;
  double noise_ = 0.0;
};

void log_sample(RunRecord& rec, double t, const Eigen::VectorXd& z, const LoopSignals& s) {
  rec.t.push_back(t);
  rec.r.push_back(s.r);
  rec.r1.push_back(z[kTd]);
  rec.r2.push_back(z[kTd + 1]);
  rec.y.push_back(s.y);
  rec.y_meas.push_back(s.y_meas);
  rec.u.push_back(s.u);
  rec.v.push_back(s.v);
  for (int i = 0; i < 5; ++i) rec.xi[i].push_back(z[kObserver + i]);
  for (int i = 0; i < 4; ++i) rec.x[i].push_back(z[kPlant + i]);
}

bool runaway(const Eigen::VectorXd& z) {
  return !z.allFinite() || z.cwiseAbs().maxCoeff() > kDivergenceThreshold;
}

}  // namespace

RunRecord run_closed_loop(const Scenario& s, const LoopComponents& c) {
  s.validate();
  c.validate();

  ClosedLoop loop(c);
  loop.set_reference(&s.reference);
  const OdeFunction rhs = [&loop](double t, const Eigen::VectorXd& z, Eigen::VectorXd& dz) {
    loop.rhs(t, z, dz);
  };

  std::vector<ScenarioEvent> events = s.events;
  std::stable_sort(events.begin(), events.end(),
                   [](const auto& a, const auto& b) { return a.time < b.time; });
  auto next_event = events.begin();

  std::mt19937_64 rng(s.noise ? s.noise->seed : 0);
  const bool noisy = s.noise.has_value();

  const bool adaptive = s.integrator == IntegratorKind::Rk45;
  const double step = adaptive ? s.sample_dt : s.dt;
  const auto steps = static_cast<long>(std::llround(s.tf / step));
  const auto per_sample = adaptive ? 1L : static_cast<long>(std::llround(s.sample_dt / s.dt));

  RunRecord rec;
  rec.reserve(static_cast<std::size_t>(steps / per_sample + 1));
  Eigen::VectorXd z = Eigen::VectorXd::Zero(kStateSize);
  Rk4Stepper stepper(kStateSize);

  for (long k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * step;
    while (next_event != events.end() && next_event->time <= t + 0.5 * step) {
      loop.apply(*next_event);
      ++next_event;
    }
    loop.set_noise(noisy ? noise_sample(rng, *s.noise) : 0.0);
    if (k % per_sample == 0) log_sample(rec, t, z, loop.signals(t, z));
    if (k == steps) break;
    try {
      if (adaptive) {
        z = rk45_integrate(rhs, t, z, t + step, s.rk45);
      } else {
        stepper.step(rhs, t, z, step);
      }
    } catch (const DivergenceError& err) {
      throw RunDivergedError(err.what(), err.time(), std::move(rec));
    }
    if (runaway(z)) {
      const double when = static_cast<double>(k + 1) * step;
      throw RunDivergedError("closed loop diverged at t=" + std::to_string(when), when,
                             std::move(rec));
    }
  }
  return rec;
}

}  // namespace aiofl
