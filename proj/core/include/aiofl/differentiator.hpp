#pragma once

#include <variant>

namespace aiofl {

/// Time-optimal second-order tracking differentiator with acceleration limit R.
struct ClassicTd {
  double R = 100.0;
  bool operator==(const ClassicTd&) const = default;
};

/// tanh-shaped tracking differentiator. In normalized mode the switching
/// argument is (r1 - r) / c, so constants are tracked with unit gain; otherwise
/// (b r1 - (1 - a) r) / c, whose equilibrium is r1 = (1 - a) r / b.
struct ImprovedTd {
  double a = 0.5;
  double b = 1.0;
  double c = 1.0;
  double rho_td = 1.0;
  bool normalized = true;
  bool operator==(const ImprovedTd&) const = default;
};

using TdConfig = std::variant<ClassicTd, ImprovedTd>;

struct TdState {
  double r1 = 0.0;  ///< tracked reference
  double r2 = 0.0;  ///< derivative estimate
  bool operator==(const TdState&) const = default;
};

/// Throws ConfigError when the variant's parameter ranges are violated.
void validate(const TdConfig& cfg);

/// r1_dot = r2, r2_dot = -R sign(r1 - r + r2 |r2| / (2R)).
TdState td_derivative(const TdState& st, double r, const ClassicTd& cfg) noexcept;

/// r1_dot = r2, r2_dot = -rho^2 tanh(arg / c) - rho r2.
TdState itd_derivative(const TdState& st, double r, const ImprovedTd& cfg) noexcept;

TdState differentiator_rate(const TdState& st, double r, const TdConfig& cfg) noexcept;

}  // namespace aiofl
