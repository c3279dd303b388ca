#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "aiofl/errors.hpp"
#include "aiofl/metrics.hpp"
#include "aiofl/odesim.hpp"
#include "aiofl/presets.hpp"

namespace {

const aiofl::OdeFunction kDecay = [](double, const Eigen::VectorXd& x, Eigen::VectorXd& dx) {
  dx = -x;
};

double rk4_decay_error(double h) {
  aiofl::Rk4Stepper stepper(1);
  Eigen::VectorXd x = Eigen::VectorXd::Ones(1);
  const auto n = static_cast<long>(std::llround(1.0 / h));
  for (long k = 0; k < n; ++k) stepper.step(kDecay, k * h, x, h);
  return std::abs(x[0] - std::exp(-1.0));
}

aiofl::Scenario short_scenario(const aiofl::Scenario& base, double tf) {
  aiofl::Scenario s = base;
  s.tf = tf;
  std::erase_if(s.events, [tf](const auto& e) { return e.time > tf; });
  return s;
}

}  // namespace

TEST(Rk4, ZeroFieldLeavesStateUnchanged) {
  const aiofl::OdeFunction zero = [](double, const Eigen::VectorXd&, Eigen::VectorXd& dx) {
    dx.setZero();
  };
  const Eigen::VectorXd x = Eigen::Vector3d(1.5, -2.0, 3.25);
  EXPECT_EQ(aiofl::rk4_step(zero, 0.0, x, 0.1), x);
}

TEST(Rk4, ConstantFieldIsExact) {
  const aiofl::OdeFunction one = [](double, const Eigen::VectorXd&, Eigen::VectorXd& dx) {
    dx.setOnes();
  };
  EXPECT_EQ(aiofl::rk4_step(one, 0.0, Eigen::VectorXd::Zero(1), 0.5)[0], 0.5);
}

TEST(Rk4, ExponentialDecay) {
  EXPECT_LT(rk4_decay_error(1e-3), 1e-10);
  EXPECT_NEAR(0.3678794412, std::exp(-1.0) + rk4_decay_error(1e-3), 1e-9);
}

TEST(Rk4, FourthOrderConvergence) {
  // Coarse steps keep the error well above roundoff.
  for (double h : {0.1, 0.05, 0.02}) {
    EXPECT_GE(rk4_decay_error(h) / rk4_decay_error(h / 2), 14.0) << "h=" << h;
  }
  EXPECT_GE(rk4_decay_error(1e-3) / rk4_decay_error(5e-4), 14.0);
}

TEST(Rk4, NonFiniteStageThrows) {
  const aiofl::OdeFunction blowup = [](double, const Eigen::VectorXd&, Eigen::VectorXd& dx) {
    dx.setConstant(std::numeric_limits<double>::quiet_NaN());
  };
  aiofl::Rk4Stepper stepper(2);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(2);
  try {
    stepper.step(blowup, 1.25, x, 0.1);
    FAIL() << "expected DivergenceError";
  } catch (const aiofl::DivergenceError& e) {
    EXPECT_EQ(e.time(), 1.25);
  }
}

TEST(Rk45, MatchesAnalyticDecay) {
  const Eigen::VectorXd x = aiofl::rk45_integrate(kDecay, 0.0, Eigen::VectorXd::Ones(1), 1.0);
  EXPECT_NEAR(x[0], std::exp(-1.0), 1e-9);
}

TEST(Rk45, Oscillator) {
  const aiofl::OdeFunction osc = [](double, const Eigen::VectorXd& x, Eigen::VectorXd& dx) {
    dx[0] = x[1];
    dx[1] = -x[0];
  };
  const Eigen::VectorXd x =
      aiofl::rk45_integrate(osc, 0.0, Eigen::Vector2d(1.0, 0.0), 2.0 * M_PI);
  EXPECT_NEAR(x[0], 1.0, 1e-7);
  EXPECT_NEAR(x[1], 0.0, 1e-7);
}

TEST(Events, InertiaScale) {
  const auto p = aiofl::slfjm_default_params();
  const auto out = aiofl::apply_event(p, {0.0, aiofl::EventKind::InertiaScale, 1.4});
  EXPECT_NEAR(out.params.Jl, 0.00826, 1e-15);
  EXPECT_FALSE(out.disturbance);
  EXPECT_EQ(aiofl::apply_event(p, {0.0, aiofl::EventKind::InertiaScale, 1.0}).params, p);
}

TEST(Events, InertiaIdempotence) {
  const auto p = aiofl::slfjm_default_params();
  const double f = 1.3;
  const auto twice =
      aiofl::apply_event(aiofl::apply_event(p, {0.0, aiofl::EventKind::InertiaScale, f}).params,
                         {0.0, aiofl::EventKind::InertiaScale, f});
  const auto once = aiofl::apply_event(p, {0.0, aiofl::EventKind::InertiaScale, f * f});
  EXPECT_NEAR(twice.params.Jl, once.params.Jl, 1e-18);
}

TEST(Events, RejectsNonPositiveScale) {
  const auto p = aiofl::slfjm_default_params();
  EXPECT_THROW(aiofl::apply_event(p, {0.0, aiofl::EventKind::InertiaScale, 0.0}),
               aiofl::InvalidInput);
  EXPECT_THROW(aiofl::apply_event(p, {0.0, aiofl::EventKind::InertiaScale, -2.0}),
               aiofl::InvalidInput);
}

TEST(Events, DisturbanceStepHoldsAfterEventTime) {
  const auto out =
      aiofl::apply_event(aiofl::slfjm_default_params(), {10.0, aiofl::EventKind::DisturbanceStep, 0.5});
  ASSERT_TRUE(out.disturbance);
  EXPECT_EQ(*out.disturbance, 0.5);

  // Open-loop effect: with u = 0 and the plant at rest, the hub starts
  // accelerating at 0.5 / Jh exactly when the step fires.
  auto preset = aiofl::preset("s2-leso");
  aiofl::Scenario s = preset.scenario;
  s.reference = {aiofl::ReferenceSpec::Kind::Constant, 0.0, 0.0};
  s.events = {{0.5, aiofl::EventKind::DisturbanceStep, 0.5}};
  s.tf = 0.6;
  const auto rec = aiofl::run_closed_loop(s, preset.components);
  for (std::size_t i = 0; i < rec.size(); ++i) {
    if (rec.t[i] <= 0.5) {
      EXPECT_EQ(rec.x[2][i], 0.0) << rec.t[i];
    } else {
      EXPECT_NE(rec.x[2][i], 0.0) << rec.t[i];
    }
  }
}

TEST(Noise, ZeroVarianceReturnsMean) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(aiofl::noise_sample(rng, {0.25, 0.0, 3}), 0.25);
}

TEST(Noise, SampleVarianceMatches) {
  const aiofl::NoiseSpec spec{0.0, 1e-4, 42};
  std::mt19937_64 rng(spec.seed);
  const int n = 1'000'000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = aiofl::noise_sample(rng, spec);
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / n;
  const double var = (sum_sq - n * mean * mean) / (n - 1);
  EXPECT_NEAR(var / 1e-4, 1.0, 0.03);
  EXPECT_NEAR(mean, 0.0, 5.0 * std::sqrt(1e-4 / n));
}

TEST(Noise, SameSeedSameSequence) {
  std::mt19937_64 a(9), b(9);
  const aiofl::NoiseSpec spec{0.0, 1.0, 9};
  for (int i = 0; i < 100; ++i) EXPECT_EQ(aiofl::noise_sample(a, spec), aiofl::noise_sample(b, spec));
}

TEST(Scenario, ValidationErrors) {
  aiofl::Scenario s;
  EXPECT_NO_THROW(s.validate());
  auto bad = s;
  bad.dt = 0.0;
  EXPECT_THROW(bad.validate(), aiofl::ConfigError);
  bad = s;
  bad.sample_dt = 1.5e-4;
  EXPECT_THROW(bad.validate(), aiofl::ConfigError);
  bad = s;
  bad.events = {{25.0, aiofl::EventKind::DisturbanceStep, 1.0}};
  EXPECT_THROW(bad.validate(), aiofl::ConfigError);
  bad = s;
  bad.noise = aiofl::NoiseSpec{0.0, 1e-4, 1};
  bad.integrator = aiofl::IntegratorKind::Rk45;
  EXPECT_THROW(bad.validate(), aiofl::ConfigError);
}

TEST(ClosedLoop, ZeroEquilibrium) {
  for (const auto& name : aiofl::preset_names()) {
    auto p = aiofl::preset(name);
    aiofl::Scenario s = short_scenario(p.scenario, 2.0);
    s.reference = {aiofl::ReferenceSpec::Kind::Constant, 0.0, 0.0};
    s.noise.reset();
    std::erase_if(s.events, [](const auto& e) { return e.kind == aiofl::EventKind::DisturbanceStep; });
    const auto rec = aiofl::run_closed_loop(s, p.components);
    ASSERT_EQ(rec.size(), 2001u);
    auto all_zero = [](const std::vector<double>& v) {
      return std::all_of(v.begin(), v.end(), [](double d) { return d == 0.0; });
    };
    for (const auto* col : {&rec.r, &rec.r1, &rec.r2, &rec.y, &rec.y_meas, &rec.u, &rec.v}) {
      EXPECT_TRUE(all_zero(*col)) << name;
    }
    for (const auto& col : rec.xi) EXPECT_TRUE(all_zero(col)) << name;
    for (const auto& col : rec.x) EXPECT_TRUE(all_zero(col)) << name;
  }
}

TEST(ClosedLoop, SampleGrid) {
  auto p = aiofl::preset("s1-leso");
  const auto rec = aiofl::run_closed_loop(short_scenario(p.scenario, 0.5), p.components);
  ASSERT_EQ(rec.size(), 501u);
  EXPECT_EQ(rec.t.front(), 0.0);
  EXPECT_DOUBLE_EQ(rec.t.back(), 0.5);
  EXPECT_DOUBLE_EQ(rec.t[1], 1e-3);
  EXPECT_DOUBLE_EQ(rec.r[100], 45.0 * std::sin(2.0 * rec.t[100]));
}

TEST(ClosedLoop, Determinism) {
  auto p = aiofl::preset("s3-leso");
  const auto s = short_scenario(p.scenario, 1.0);
  EXPECT_EQ(aiofl::run_closed_loop(s, p.components), aiofl::run_closed_loop(s, p.components));
}

TEST(ClosedLoop, NoiseIsOnTheMeasurementOnly) {
  auto p = aiofl::preset("s3-leso");
  const auto rec = aiofl::run_closed_loop(short_scenario(p.scenario, 0.2), p.components);
  double max_dev = 0.0;
  for (std::size_t i = 0; i < rec.size(); ++i) {
    EXPECT_EQ(rec.y[i], rec.x[0][i] + rec.x[1][i]);
    max_dev = std::max(max_dev, std::abs(rec.y_meas[i] - rec.y[i]));
  }
  EXPECT_GT(max_dev, 0.0);
  EXPECT_LT(max_dev, 0.1);  // 10 sigma at variance 1e-4

  auto other = p.scenario;
  other.noise->seed = 2;
  EXPECT_NE(aiofl::run_closed_loop(short_scenario(other, 0.2), p.components).y_meas, rec.y_meas);
}

TEST(ClosedLoop, StepHalvingConverges) {
  for (const char* name : {"s1-leso", "s1-inleso"}) {
    auto p = aiofl::preset(name);
    auto s = short_scenario(p.scenario, 1.0);
    std::vector<aiofl::RunRecord> runs;
    for (double dt : {2e-4, 1e-4, 5e-5}) {
      s.dt = dt;
      runs.push_back(aiofl::run_closed_loop(s, p.components));
    }
    auto max_diff = [](const aiofl::RunRecord& a, const aiofl::RunRecord& b) {
      double d = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a.y[i] - b.y[i]));
      return d;
    };
    const double d1 = max_diff(runs[0], runs[1]);
    const double d2 = max_diff(runs[1], runs[2]);
    EXPECT_LT(d2, d1) << name;
    // The classic TD switches on sign() and caps the order; the smooth ITD loop keeps RK4's.
    if (std::string(name) == "s1-inleso") EXPECT_GT(d1 / d2, 10.0);
  }
}

TEST(ClosedLoop, AdaptiveAgreesWithFixedStep) {
  auto p = aiofl::preset("s1-inleso");
  auto fixed = short_scenario(p.scenario, 0.5);
  auto adaptive = fixed;
  adaptive.integrator = aiofl::IntegratorKind::Rk45;
  const auto a = aiofl::run_closed_loop(fixed, p.components);
  const auto b = aiofl::run_closed_loop(adaptive, p.components);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); i += 50) {
    EXPECT_NEAR(a.y[i], b.y[i], 1e-6 * std::max(1.0, std::abs(b.y[i]))) << a.t[i];
  }
}

TEST(ClosedLoop, DivergenceCarriesPartialRecord) {
  // s1-leso runs away partway through the 20 s scenario.
  auto p = aiofl::preset("s1-leso");
  try {
    aiofl::run_closed_loop(p.scenario, p.components);
    FAIL() << "expected divergence";
  } catch (const aiofl::RunDivergedError& e) {
    EXPECT_GT(e.time(), 0.0);
    EXPECT_LT(e.time(), p.scenario.tf);
    ASSERT_GT(e.partial().size(), 0u);
    EXPECT_LE(e.partial().t.back(), e.time());
  }
}

TEST(ClosedLoop, CompletedRunHasFiniteMetrics) {
  auto p = aiofl::preset("s3-leso");
  const auto rec = aiofl::run_closed_loop(p.scenario, p.components);
  ASSERT_EQ(rec.size(), 20001u);
  const auto m = aiofl::evaluate_metrics(rec, {.tf = p.scenario.tf});
  EXPECT_TRUE(std::isfinite(m.itae));
  EXPECT_TRUE(std::isfinite(m.opi));
}

TEST(ClosedLoop, RejectsWrongObserverOrder) {
  auto p = aiofl::preset("s1-leso");
  p.components.observer.rho = 3;
  p.components.observer.a = Eigen::VectorXd::Ones(4);
  EXPECT_THROW(aiofl::run_closed_loop(p.scenario, p.components), aiofl::ConfigError);
}
