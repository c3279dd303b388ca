#pragma once

#include <variant>

namespace aiofl {

/// v = kp fal(e1, alpha1, delta1) + kd fal(e2, alpha2, delta2).
struct NlsefConfig {
  double alpha1 = 0.5;
  double alpha2 = 0.5;
  double delta1 = 1.0;
  double delta2 = 1.0;
  double kp = 1.0;
  double kd = 1.0;
  bool operator==(const NlsefConfig&) const = default;
};

/// Sigmoid-scheduled power-law feedback saturated by delta tanh(. / delta).
struct InlsefConfig {
  double k11 = 1.0;
  double k12 = 0.0;
  double k21 = 1.0;
  double k22 = 0.0;
  double mu1 = 0.0;
  double mu2 = 0.0;
  double alpha1 = 1.0;
  double alpha2 = 1.0;
  double delta = 1.0;
  bool operator==(const InlsefConfig&) const = default;
};

using ControllerConfig = std::variant<NlsefConfig, InlsefConfig>;

void validate(const ControllerConfig& cfg);

/// Linear inside |e| <= delta (slope delta^(alpha-1)), |e|^alpha sign(e) outside.
double fal(double e, double alpha, double delta) noexcept;

double nlsef(double e1, double e2, const NlsefConfig& cfg) noexcept;

double inlsef(double e1, double e2, const InlsefConfig& cfg) noexcept;

/// Dispatches on the controller variant.
double virtual_control(double e1, double e2, const ControllerConfig& cfg) noexcept;

/// u = v - disturbance_estimate / b0. Throws ConfigError when b0 == 0.
double aiofl_law(double v, double disturbance_estimate, double b0);

}  // namespace aiofl
