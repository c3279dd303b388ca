#include <cmath>
#include <functional>
#include <random>

#include <gtest/gtest.h>

#include "aiofl/differentiator.hpp"
#include "aiofl/errors.hpp"

namespace {

aiofl::TdState integrate(const aiofl::TdConfig& cfg, const std::function<double(double)>& r,
                         aiofl::TdState st, double tf, double dt = 1e-4) {
  auto rate = [&](double t, const aiofl::TdState& s) {
    return aiofl::differentiator_rate(s, r(t), cfg);
  };
  const auto n = static_cast<long>(std::llround(tf / dt));
  for (long k = 0; k < n; ++k) {
    const double t = k * dt;
    const auto k1 = rate(t, st);
    const auto k2 = rate(t + dt / 2, {st.r1 + dt / 2 * k1.r1, st.r2 + dt / 2 * k1.r2});
    const auto k3 = rate(t + dt / 2, {st.r1 + dt / 2 * k2.r1, st.r2 + dt / 2 * k2.r2});
    const auto k4 = rate(t + dt, {st.r1 + dt * k3.r1, st.r2 + dt * k3.r2});
    st.r1 += dt / 6 * (k1.r1 + 2 * k2.r1 + 2 * k3.r1 + k4.r1);
    st.r2 += dt / 6 * (k1.r2 + 2 * k2.r2 + 2 * k3.r2 + k4.r2);
  }
  return st;
}

const aiofl::ImprovedTd kPaperItd{0.9153, 8.7141, 0.0813, 22.89333, true};

}  // namespace

TEST(ClassicTd, Equilibrium) {
  EXPECT_EQ(aiofl::td_derivative({2.5, 0.0}, 2.5, {100.0}), (aiofl::TdState{0.0, 0.0}));
}

TEST(ClassicTd, AcceleratesTowardReference) {
  EXPECT_EQ(aiofl::td_derivative({0.0, 0.0}, 1.0, {100.0}), (aiofl::TdState{0.0, 100.0}));
  EXPECT_EQ(aiofl::td_derivative({0.0, 0.0}, -1.0, {100.0}), (aiofl::TdState{0.0, -100.0}));
}

TEST(ClassicTd, AccelerationBounded) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(-100.0, 100.0);
  const aiofl::ClassicTd cfg{2408.6918};
  for (int i = 0; i < 1000; ++i) {
    EXPECT_LE(std::abs(aiofl::td_derivative({d(rng), d(rng)}, d(rng), cfg).r2), cfg.R);
  }
}

TEST(ClassicTd, ConvergesOnConstant) {
  const aiofl::ClassicTd cfg{100.0};
  for (const aiofl::TdState start : {aiofl::TdState{0, 0}, aiofl::TdState{-2, 5}, aiofl::TdState{3, -1}}) {
    const auto end = integrate(cfg, [](double) { return 1.0; }, start, 5.0);
    EXPECT_NEAR(end.r1, 1.0, 1e-3);
    EXPECT_NEAR(end.r2, 0.0, 2.0 * cfg.R * 1e-4);  // chattering at the step scale
  }
}

TEST(ClassicTd, TracksRampSlope) {
  const aiofl::ClassicTd cfg{100.0};
  const auto end = integrate(cfg, [](double t) { return t; }, {}, 5.0);
  EXPECT_NEAR(end.r2, 1.0, 2.0 * cfg.R * 1e-4);
  // On the switching curve r1 trails the ramp by r2 |r2| / (2R).
  EXPECT_NEAR(end.r1, 5.0 - 1.0 / (2.0 * cfg.R), 1e-3);
}

TEST(ImprovedTd, VerbatimEquilibrium) {
  aiofl::ImprovedTd cfg = kPaperItd;
  cfg.normalized = false;
  const double r = 45.0;
  const double gain = (1.0 - cfg.a) / cfg.b;
  EXPECT_NEAR(gain, 0.00972, 5e-6);
  const auto d = aiofl::itd_derivative({gain * r, 0.0}, r, cfg);
  EXPECT_NEAR(d.r2, 0.0, 1e-9);
  const auto end = integrate(cfg, [r](double) { return r; }, {}, 5.0);
  EXPECT_NEAR(end.r1, gain * r, 1e-6);
}

TEST(ImprovedTd, NormalizedTracksConstants) {
  const double settle = 10.0 / kPaperItd.rho_td * 5.0;
  for (double r : {1.0, -3.0, 0.25}) {
    const auto end = integrate(kPaperItd, [r](double) { return r; }, {}, settle);
    EXPECT_LT(std::abs(end.r1 - r), 0.01 * std::abs(r));
    EXPECT_LT(std::abs(end.r2), 0.01 * std::abs(r));
  }
}

TEST(ImprovedTd, TanhBound) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> d(-50.0, 50.0);
  for (bool normalized : {true, false}) {
    auto cfg = kPaperItd;
    cfg.normalized = normalized;
    const double rho = cfg.rho_td;
    for (int i = 0; i < 1000; ++i) {
      const aiofl::TdState st{d(rng), d(rng)};
      const auto rate = aiofl::itd_derivative(st, d(rng), cfg);
      EXPECT_LE(std::abs(rate.r2 + rho * st.r2), rho * rho * (1.0 + 1e-12));
    }
  }
}

TEST(Td, Validation) {
  EXPECT_THROW(aiofl::validate(aiofl::TdConfig{aiofl::ClassicTd{0.0}}), aiofl::ConfigError);
  auto bad = kPaperItd;
  bad.a = 1.0;
  EXPECT_THROW(aiofl::validate(aiofl::TdConfig{bad}), aiofl::ConfigError);
  bad = kPaperItd;
  bad.c = 0.0;
  EXPECT_THROW(aiofl::validate(aiofl::TdConfig{bad}), aiofl::ConfigError);
  EXPECT_NO_THROW(aiofl::validate(aiofl::TdConfig{kPaperItd}));
}
