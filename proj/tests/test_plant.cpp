#include <chrono>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "aiofl/errors.hpp"
#include "aiofl/plant.hpp"

namespace {

using aiofl::PlantState;

std::vector<Eigen::VectorXd> uniform_samples(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<Eigen::VectorXd> out;
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::VectorXd x(4);
    for (int k = 0; k < 4; ++k) x[k] = dist(rng);
    out.push_back(x);
  }
  return out;
}

// Ks Km Kg / (Rm Jh Jl), worked out by hand from the default parameters.
constexpr double kInputCoefficient = 26833.33333333334;

}  // namespace

TEST(Plant, DefaultParameters) {
  const auto p = aiofl::slfjm_default_params();
  EXPECT_EQ(p.Ks, 1.61);
  EXPECT_EQ(p.Rm, 2.6);
  EXPECT_EQ(p.Jl, 0.0059);
  EXPECT_EQ(p.Jh, 0.0021);
  EXPECT_EQ(p.Kg, 70.0);
  EXPECT_NO_THROW(p.validate());
}

TEST(Plant, OriginIsEquilibrium) {
  const auto dx = aiofl::slfjm_dynamics(PlantState::Zero(), 0.0, 0.0,
                                        aiofl::slfjm_default_params());
  EXPECT_EQ(dx, Eigen::Vector4d::Zero());
}

TEST(Plant, HandComputedDrift) {
  const auto dx = aiofl::slfjm_dynamics(PlantState(0.1, 0.2, 0.0, 0.0), 0.0, 0.0,
                                        aiofl::slfjm_default_params());
  EXPECT_EQ(dx[0], 0.0);
  EXPECT_EQ(dx[1], 0.0);
  EXPECT_NEAR(dx[2], 153.33333333333334, 1e-10);
  EXPECT_NEAR(dx[3], -219.7908091023619, 1e-10);
}

TEST(Plant, KinematicChain) {
  const auto p = aiofl::slfjm_default_params();
  for (const auto& x : uniform_samples(20, 3)) {
    const auto dx = aiofl::slfjm_dynamics(x, 0.7, -0.2, p);
    EXPECT_EQ(dx[0], x[2]);
    EXPECT_EQ(dx[1], x[3]);
  }
}

TEST(Plant, AffineInInput) {
  const auto p = aiofl::slfjm_default_params();
  const auto b = aiofl::slfjm_input_vector(p);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  for (const auto& x : uniform_samples(50, 5)) {
    const double u1 = dist(rng), u2 = dist(rng), tau = dist(rng);
    const Eigen::Vector4d diff = aiofl::slfjm_dynamics(x, u1, tau, p) -
                                 aiofl::slfjm_dynamics(x, u2, tau, p);
    EXPECT_LT((diff - b * (u1 - u2)).norm(), 1e-9 * (1.0 + b.norm() * 10.0));
  }
}

TEST(Plant, DisturbanceEntersThroughHub) {
  const auto p = aiofl::slfjm_default_params();
  const Eigen::Vector4d diff = aiofl::slfjm_dynamics(PlantState::Zero(), 0.0, 1.0, p) -
                               aiofl::slfjm_dynamics(PlantState::Zero(), 0.0, 0.0, p);
  EXPECT_NEAR((diff - aiofl::slfjm_disturbance_vector(p)).norm(), 0.0, 1e-12);
}

TEST(Plant, RejectsNonFiniteInput) {
  const auto p = aiofl::slfjm_default_params();
  PlantState x = PlantState::Zero();
  x[2] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(aiofl::slfjm_dynamics(x, 0.0, 0.0, p), aiofl::InvalidInput);
  EXPECT_THROW(aiofl::slfjm_dynamics(PlantState::Zero(), INFINITY, 0.0, p),
               aiofl::InvalidInput);
}

TEST(Plant, Output) {
  EXPECT_EQ(aiofl::output(PlantState::Zero()), 0.0);
  EXPECT_EQ(aiofl::output(PlantState(0.3, 0.2, 5.0, -5.0)), 0.5);
  EXPECT_EQ(aiofl::output(PlantState(1.0, -1.0, 0.0, 0.0)), 0.0);
}

TEST(RelativeDegree, SlfjmIsFour) {
  const auto samples = uniform_samples(100, 7);
  const auto t0 = std::chrono::steady_clock::now();
  const auto rep = aiofl::check_relative_degree(aiofl::slfjm_default_params(), samples);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_EQ(rep.rho, 4);
  ASSERT_EQ(rep.residuals.size(), 4u);
  EXPECT_EQ(rep.residuals[0], 0.0);
  for (int i = 0; i < 3; ++i) EXPECT_LT(rep.residuals[i], 1e-6) << "order " << i;
  EXPECT_NEAR(rep.final_coefficient / kInputCoefficient, 1.0, 1e-6);
  EXPECT_LT(secs, 1.0);
}

TEST(RelativeDegree, CoefficientIsStateIndependent) {
  const auto plant = aiofl::slfjm_affine_plant(aiofl::slfjm_default_params());
  for (const auto& x : uniform_samples(25, 19)) {
    EXPECT_NEAR(aiofl::lie_derivative_gf(plant, x, 3) / kInputCoefficient, 1.0, 1e-6);
  }
}

TEST(RelativeDegree, FirstLieDerivativesAreVelocities) {
  const auto plant = aiofl::slfjm_affine_plant(aiofl::slfjm_default_params());
  for (const auto& x : uniform_samples(10, 23)) {
    EXPECT_EQ(aiofl::lie_derivative_f(plant, x, 0), x[0] + x[1]);
    EXPECT_NEAR(aiofl::lie_derivative_f(plant, x, 1), x[2] + x[3], 1e-9);
  }
}

TEST(RelativeDegree, DirectFeedthroughIsDegreeOne) {
  aiofl::AffinePlant plant;
  plant.dimension = 2;
  plant.drift = [](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return Eigen::Vector2d(-x[0] + x[1] * x[1], -x[1]);
  };
  plant.input = [](const Eigen::VectorXd&) -> Eigen::VectorXd {
    return Eigen::Vector2d(2.0, 0.0);
  };
  plant.output = [](const Eigen::VectorXd& x) { return x[0]; };
  std::vector<Eigen::VectorXd> samples{Eigen::Vector2d(0.5, -0.3)};
  const auto rep = aiofl::check_relative_degree(plant, samples);
  EXPECT_EQ(rep.rho, 1);
  EXPECT_NEAR(rep.final_coefficient, 2.0, 1e-9);
}

TEST(RelativeDegree, UndefinedDegreeIsAnError) {
  aiofl::AffinePlant plant;
  plant.dimension = 2;
  plant.drift = [](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return Eigen::Vector2d(-x[0], -x[1]);
  };
  plant.input = [](const Eigen::VectorXd&) -> Eigen::VectorXd {
    return Eigen::Vector2d(0.0, 1.0);
  };
  plant.output = [](const Eigen::VectorXd& x) { return x[0]; };
  std::vector<Eigen::VectorXd> samples{Eigen::Vector2d(0.5, -0.3)};
  EXPECT_THROW(aiofl::check_relative_degree(plant, samples), aiofl::NumericError);
}

TEST(RelativeDegree, RejectsBadArguments) {
  const auto p = aiofl::slfjm_default_params();
  EXPECT_THROW(aiofl::check_relative_degree(p, {}), aiofl::InvalidInput);
  const auto samples = uniform_samples(2, 1);
  EXPECT_THROW(aiofl::check_relative_degree(p, samples, 0.0), aiofl::InvalidInput);
  aiofl::LieDerivativeOptions tiny;
  tiny.step = 1e-300;
  tiny.inner_step_ratio = 1e-10;
  EXPECT_THROW(aiofl::check_relative_degree(p, samples, 1e-6, tiny), aiofl::NumericError);
}
