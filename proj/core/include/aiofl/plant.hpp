#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace aiofl {

/// Physical constants of the single-link flexible-joint manipulator.
struct PlantParams {
  double Ks;  ///< link stiffness [N m/rad]
  double Jh;  ///< hub inertia [kg m^2]
  double m;   ///< link mass [kg]
  double g;   ///< gravity [m/s^2]
  double h;   ///< hub height [m]
  double Km;  ///< motor constant
  double Kg;  ///< gear ratio
  double Jl;  ///< load inertia [kg m^2]
  double Rm;  ///< motor resistance [Ohm]

  /// Throws ConfigError unless every denominator of the dynamics is positive.
  void validate() const;

  bool operator==(const PlantParams&) const = default;
};

/// (theta, alpha, theta_dot, alpha_dot): hub angle, link deflection and their rates.
using PlantState = Eigen::Vector4d;

PlantParams slfjm_default_params();

/// Drift vector field f(x).
Eigen::Vector4d slfjm_drift(const PlantState& x, const PlantParams& p);

/// Input direction b (state independent).
Eigen::Vector4d slfjm_input_vector(const PlantParams& p);

/// Disturbance-torque direction b_d.
Eigen::Vector4d slfjm_disturbance_vector(const PlantParams& p);

/// x_dot = f(x) + b u + b_d tau_d. Throws InvalidInput on non-finite arguments.
Eigen::Vector4d slfjm_dynamics(const PlantState& x, double u, double tau_d,
                               const PlantParams& p);

/// Unchecked variant of slfjm_dynamics for the integrator inner loop.
void slfjm_dynamics_unchecked(const double* x, double u, double tau_d,
                              const PlantParams& p, double* dxdt) noexcept;

/// y = x1 + x2 (tip angle).
double output(const PlantState& x) noexcept;

/// Affine-in-input SISO plant x_dot = f(x) + g(x) u, y = h(x).
struct AffinePlant {
  int dimension = 0;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> drift;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> input;
  std::function<double(const Eigen::VectorXd&)> output;
};

AffinePlant slfjm_affine_plant(const PlantParams& p);

struct RelativeDegreeReport {
  int rho = 0;
  /// residuals[i] = max over samples of |L_g L_f^i h|, for i = 0 .. rho-1.
  std::vector<double> residuals;
  /// L_g L_f^(rho-1) h at the first sample.
  double final_coefficient = 0.0;
};

struct LieDerivativeOptions {
  /// Displacement length of the outermost central difference. Nesting four
  /// levels amplifies roundoff like step^-4, so small steps are useless here;
  /// extrapolation takes care of the truncation error instead.
  double step = 4.0;
  /// Inner differences use step * inner_step_ratio^depth.
  double inner_step_ratio = 1.0;
  /// Richardson extrapolation levels per differentiation (0 = plain central
  /// difference, 1 combines s and s/2, 2 adds s/4).
  int richardson_levels = 2;
};

/// L_f^order h at x, by nested central differences along f.
double lie_derivative_f(const AffinePlant& plant, const Eigen::VectorXd& x,
                        int order, const LieDerivativeOptions& opts = {});

/// L_g L_f^order h at x.
double lie_derivative_gf(const AffinePlant& plant, const Eigen::VectorXd& x,
                         int order, const LieDerivativeOptions& opts = {});

/// Smallest rho with max_samples |L_g L_f^(rho-1) h| > tol. Throws InvalidInput on
/// empty samples or tol <= 0, NumericError on step underflow or when no order up
/// to the state dimension qualifies.
RelativeDegreeReport check_relative_degree(
    const AffinePlant& plant, std::span<const Eigen::VectorXd> samples,
    double tol = 1e-6, const LieDerivativeOptions& opts = {});

RelativeDegreeReport check_relative_degree(
    const PlantParams& p, std::span<const Eigen::VectorXd> samples,
    double tol = 1e-6, const LieDerivativeOptions& opts = {});

}  // namespace aiofl
