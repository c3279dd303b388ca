#include "aiofl/plant.hpp"

#include <array>
#include <cmath>
#include <string>

#include "aiofl/errors.hpp"

namespace aiofl {

void PlantParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ConfigError(std::string("plant parameter ") + name + " must be positive");
    }
  };
  positive(Jh, "Jh");
  positive(Jl, "Jl");
  positive(Rm, "Rm");
  positive(Kg, "Kg");
  for (double v : {Ks, m, g, h, Km}) {
    if (!std::isfinite(v)) throw ConfigError("plant parameters must be finite");
  }
}

PlantParams slfjm_default_params() {
  return PlantParams{.Ks = 1.61,
                     .Jh = 0.0021,
                     .m = 0.403,
                     .g = -9.81,
                     .h = 0.06,
                     .Km = 0.00767,
                     .Kg = 70.0,
                     .Jl = 0.0059,
                     .Rm = 2.6};
}

void slfjm_dynamics_unchecked(const double* x, double u, double tau_d,
                              const PlantParams& p, double* dxdt) noexcept {
  const double back_emf = p.Km * p.Km * p.Kg * p.Kg / (p.Rm * p.Jh);
  const double drive = p.Km * p.Kg / (p.Rm * p.Jh) * u + tau_d / p.Jh;
  const double hub_spring = p.Ks / p.Jh * x[1];
  dxdt[0] = x[2];
  dxdt[1] = x[3];
  dxdt[2] = hub_spring - back_emf * x[2] + drive;
  dxdt[3] = -hub_spring - p.Ks / p.Jl * x[1] + back_emf * x[2] +
            p.m * p.g * p.h / p.Jl * std::sin(x[0] + x[1]) - drive;
}

Eigen::Vector4d slfjm_drift(const PlantState& x, const PlantParams& p) {
  Eigen::Vector4d dx;
  slfjm_dynamics_unchecked(x.data(), 0.0, 0.0, p, dx.data());
  return dx;
}

Eigen::Vector4d slfjm_input_vector(const PlantParams& p) {
  const double b = p.Km * p.Kg / (p.Rm * p.Jh);
  return {0.0, 0.0, b, -b};
}

Eigen::Vector4d slfjm_disturbance_vector(const PlantParams& p) {
  return {0.0, 0.0, 1.0 / p.Jh, -1.0 / p.Jh};
}

Eigen::Vector4d slfjm_dynamics(const PlantState& x, double u, double tau_d,
                               const PlantParams& p) {
  if (!x.allFinite() || !std::isfinite(u) || !std::isfinite(tau_d)) {
    throw InvalidInput("slfjm_dynamics: non-finite state or input");
  }
  Eigen::Vector4d dx;
  slfjm_dynamics_unchecked(x.data(), u, tau_d, p, dx.data());
  return dx;
}

double output(const PlantState& x) noexcept { return x[0] + x[1]; }

AffinePlant slfjm_affine_plant(const PlantParams& p) {
  AffinePlant plant;
  plant.dimension = 4;
  plant.drift = [p](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return slfjm_drift(PlantState(x), p);
  };
  plant.input = [p](const Eigen::VectorXd&) -> Eigen::VectorXd {
    return slfjm_input_vector(p);
  };
  plant.output = [](const Eigen::VectorXd& x) { return x[0] + x[1]; };
  return plant;
}

namespace {

using ScalarField = std::function<double(const Eigen::VectorXd&)>;

double central_difference(const ScalarField& phi, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& unit, double s) {
  const Eigen::VectorXd forward = x + s * unit;
  const Eigen::VectorXd backward = x - s * unit;
  if (forward == x && backward == x) {
    throw NumericError("Lie derivative: finite-difference step underflows the state");
  }
  return (phi(forward) - phi(backward)) / (2.0 * s);
}

// Derivative of phi along direction at x, Richardson-extrapolated over s, s/2, ...
double directional_derivative(const ScalarField& phi, const Eigen::VectorXd& x,
                              const Eigen::VectorXd& direction, double s, int levels) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw NumericError("Lie derivative: step must be positive and finite");
  }
  if (levels < 0 || levels > 4) throw InvalidInput("Lie derivative: richardson levels must be 0..4");
  const double norm = direction.norm();
  if (norm == 0.0) return 0.0;
  if (!std::isfinite(norm)) throw NumericError("Lie derivative: non-finite vector field");
  const Eigen::VectorXd unit = direction / norm;

  std::array<double, 5> table{};
  for (int i = 0; i <= levels; ++i) {
    table[i] = central_difference(phi, x, unit, s / static_cast<double>(1 << i));
  }
  // Central differences have even error expansions: eliminate s^2, s^4, ...
  double factor = 4.0;
  for (int k = 1; k <= levels; ++k, factor *= 4.0) {
    for (int i = 0; i + k <= levels; ++i) {
      table[i] = (factor * table[i + 1] - table[i]) / (factor - 1.0);
    }
  }
  return norm * table[0];
}

double lie_f_at_depth(const AffinePlant& plant, const Eigen::VectorXd& x,
                      int order, int depth, const LieDerivativeOptions& opts) {
  if (order == 0) return plant.output(x);
  const ScalarField inner = [&](const Eigen::VectorXd& z) {
    return lie_f_at_depth(plant, z, order - 1, depth + 1, opts);
  };
  const double s = opts.step * std::pow(opts.inner_step_ratio, depth);
  return directional_derivative(inner, x, plant.drift(x), s, opts.richardson_levels);
}

}  // namespace

double lie_derivative_f(const AffinePlant& plant, const Eigen::VectorXd& x,
                        int order, const LieDerivativeOptions& opts) {
  if (order < 0) throw InvalidInput("Lie derivative order must be nonnegative");
  return lie_f_at_depth(plant, x, order, 0, opts);
}

double lie_derivative_gf(const AffinePlant& plant, const Eigen::VectorXd& x,
                         int order, const LieDerivativeOptions& opts) {
  if (order < 0) throw InvalidInput("Lie derivative order must be nonnegative");
  const ScalarField inner = [&](const Eigen::VectorXd& z) {
    return lie_f_at_depth(plant, z, order, 1, opts);
  };
  return directional_derivative(inner, x, plant.input(x), opts.step,
                                opts.richardson_levels);
}

RelativeDegreeReport check_relative_degree(
    const AffinePlant& plant, std::span<const Eigen::VectorXd> samples,
    double tol, const LieDerivativeOptions& opts) {
  if (samples.empty()) throw InvalidInput("check_relative_degree: no samples");
  if (!(tol > 0.0)) throw InvalidInput("check_relative_degree: tol must be positive");

  RelativeDegreeReport report;
  for (int order = 0; order < plant.dimension; ++order) {
    double worst = 0.0;
    double first = 0.0;
    for (std::size_t k = 0; k < samples.size(); ++k) {
      const double value = lie_derivative_gf(plant, samples[k], order, opts);
      if (!std::isfinite(value)) {
        throw NumericError("check_relative_degree: non-finite Lie derivative");
      }
      if (k == 0) first = value;
      worst = std::max(worst, std::abs(value));
    }
    report.residuals.push_back(worst);
    if (worst > tol) {
      report.rho = order + 1;
      report.final_coefficient = first;
      return report;
    }
  }
  throw NumericError("check_relative_degree: input never reaches the output");
}

RelativeDegreeReport check_relative_degree(
    const PlantParams& p, std::span<const Eigen::VectorXd> samples, double tol,
    const LieDerivativeOptions& opts) {
  p.validate();
  return check_relative_degree(slfjm_affine_plant(p), samples, tol, opts);
}

}  // namespace aiofl
