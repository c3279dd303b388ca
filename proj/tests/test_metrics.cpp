#include <cmath>
#include <functional>

#include <gtest/gtest.h>

#include "aiofl/errors.hpp"
#include "aiofl/metrics.hpp"

namespace {

// Grid 0, dt, 2dt, ... reaching at least tf.
aiofl::RunRecord synthetic(double tf, double dt, const std::function<double(double)>& err,
                           const std::function<double(double)>& u) {
  aiofl::RunRecord rec;
  const auto n = static_cast<std::size_t>(std::ceil(tf / dt - 1e-9));
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) * dt;
    rec.t.push_back(t);
    rec.r.push_back(1.0);
    rec.y.push_back(1.0 + err(t));
    rec.u.push_back(u(t));
  }
  return rec;
}

auto constant(double c) {
  return [c](double) { return c; };
}

}  // namespace

TEST(Metrics, PerfectTrackingHasZeroItae) {
  const auto rec = synthetic(6.0, 1e-3, constant(0.0), constant(0.0));
  EXPECT_EQ(aiofl::itae(rec, 6.0), 0.0);
  EXPECT_EQ(aiofl::isu(rec, 6.0), 0.0);
  EXPECT_EQ(aiofl::iau(rec, 6.0), 0.0);
}

TEST(Metrics, UnitErrorItae) {
  const auto rec = synthetic(6.0, 1e-3, constant(1.0), constant(0.0));
  EXPECT_NEAR(aiofl::itae(rec, 6.0), 18.0, 1e-9);
}

TEST(Metrics, SineErrorItae) {
  const double T = 2.0 * M_PI;
  const auto rec = synthetic(T, 1e-3, [](double t) { return std::sin(t); }, constant(0.0));
  EXPECT_NEAR(aiofl::itae(rec, T), 4.0 * M_PI, 1e-4);
}

TEST(Metrics, ConstantControl) {
  const auto rec = synthetic(6.0, 1e-3, constant(0.0), constant(2.0));
  EXPECT_NEAR(aiofl::isu(rec, 6.0), 24.0, 1e-9);
  EXPECT_NEAR(aiofl::iau(rec, 6.0), 12.0, 1e-9);
}

TEST(Metrics, SineControl) {
  const double T = 2.0 * M_PI;
  const auto rec = synthetic(T, 1e-3, constant(0.0), [](double t) { return std::sin(t); });
  EXPECT_NEAR(aiofl::isu(rec, T), M_PI, 1e-6);
  EXPECT_NEAR(aiofl::iau(rec, T), 4.0, 1e-4);
}

TEST(Metrics, QuadratureConvergesQuadratically) {
  const double T = 3.0;
  auto err = [](double t) { return std::cos(t) + 2.0; };
  const double exact = 2.0 * T * T / 2.0 + (T * std::sin(T) + std::cos(T) - 1.0);
  const double e1 = std::abs(aiofl::itae(synthetic(T, 1e-2, err, constant(0)), T) - exact);
  const double e2 = std::abs(aiofl::itae(synthetic(T, 5e-3, err, constant(0)), T) - exact);
  EXPECT_NEAR(e1 / e2, 4.0, 0.2);
}

TEST(Metrics, HorizonBeyondRecordThrows) {
  const auto rec = synthetic(6.0, 1e-3, constant(1.0), constant(1.0));
  EXPECT_THROW(aiofl::itae(rec, 7.0), aiofl::InvalidInput);
  EXPECT_THROW(aiofl::isu(rec, 6.5), aiofl::InvalidInput);
}

TEST(Metrics, ShorterHorizonTruncates) {
  const auto rec = synthetic(20.0, 1e-3, constant(1.0), constant(2.0));
  EXPECT_NEAR(aiofl::itae(rec, 6.0), 18.0, 1e-9);
  EXPECT_NEAR(aiofl::iau(rec, 6.0005), 12.001, 1e-9);
}

TEST(Opi, PaperWeights) {
  const aiofl::OpiWeights w;
  EXPECT_EQ(aiofl::opi(0.0, 0.0, 0.0, w), 0.0);
  EXPECT_EQ(aiofl::opi(10.0, 2.0, 2.7, w), 1.4);
}

TEST(Opi, Linear) {
  const aiofl::OpiWeights w;
  const double base = aiofl::opi(3.0, 1.0, 5.0, w);
  EXPECT_DOUBLE_EQ(aiofl::opi(6.0, 1.0, 5.0, w) - base, 0.6 * 3.0 / 10.0);
  EXPECT_DOUBLE_EQ(aiofl::opi(3.0, 3.0, 5.0, w) - base, 0.2 * 2.0 / 2.0);
  aiofl::OpiWeights doubled = w;
  doubled.w1 *= 2.0;
  doubled.w2 *= 2.0;
  doubled.w3 *= 2.0;
  EXPECT_DOUBLE_EQ(aiofl::opi(3.0, 1.0, 5.0, doubled), 2.0 * base);
}

TEST(Opi, EvaluateUsesTuningHorizon) {
  const auto rec = synthetic(20.0, 1e-3, constant(1.0), constant(2.0));
  const auto m = aiofl::evaluate_metrics(rec, aiofl::OpiWeights{});
  EXPECT_NEAR(m.itae, 18.0, 1e-9);
  EXPECT_NEAR(m.isu, 24.0, 1e-9);
  EXPECT_NEAR(m.iau, 12.0, 1e-9);
  EXPECT_DOUBLE_EQ(m.opi, aiofl::opi(m.itae, m.isu, m.iau, aiofl::OpiWeights{}));
}

TEST(Opi, ValidatesNormalizers) {
  aiofl::OpiWeights w;
  w.N2 = 0.0;
  EXPECT_THROW(w.validate(), aiofl::ConfigError);
}
