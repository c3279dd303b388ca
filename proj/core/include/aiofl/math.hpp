#pragma once

#include <cmath>

namespace aiofl {

// sign(0) = 0 everywhere in this library.
constexpr double sign(double x) noexcept {
  return static_cast<double>((x > 0.0) - (x < 0.0));
}

/// |x|^p * sign(x), the odd power map shared by fal, G and the INLSEF terms.
inline double signed_power(double x, double p) noexcept {
  return x == 0.0 ? 0.0 : std::pow(std::abs(x), p) * sign(x);
}

}  // namespace aiofl
