#include "aiofl/controller.hpp"

#include <cmath>

#include "aiofl/errors.hpp"
#include "aiofl/math.hpp"

namespace aiofl {

void validate(const ControllerConfig& cfg) {
  if (const auto* n = std::get_if<NlsefConfig>(&cfg)) {
    if (!(n->alpha1 > 0.0 && n->alpha1 <= 1.0) || !(n->alpha2 > 0.0 && n->alpha2 <= 1.0)) {
      throw ConfigError("nlsef: fal exponents must lie in (0, 1]");
    }
    if (!(n->delta1 > 0.0) || !(n->delta2 > 0.0)) {
      throw ConfigError("nlsef: thresholds must be positive");
    }
    return;
  }
  const auto& c = std::get<InlsefConfig>(cfg);
  if (c.k11 < 0.0 || c.k12 < 0.0 || c.k21 < 0.0 || c.k22 < 0.0) {
    throw ConfigError("inlsef: gains must be nonnegative");
  }
  if (c.mu1 < 0.0 || c.mu2 < 0.0) throw ConfigError("inlsef: mu must be nonnegative");
  if (!(c.alpha1 > 0.0) || !(c.alpha2 > 0.0)) {
    throw ConfigError("inlsef: exponents must be positive");
  }
  if (!(c.delta > 0.0)) throw ConfigError("inlsef: delta must be positive");
}

double fal(double e, double alpha, double delta) noexcept {
  if (std::abs(e) <= delta) return e / std::pow(delta, 1.0 - alpha);
  return signed_power(e, alpha);
}

double nlsef(double e1, double e2, const NlsefConfig& cfg) noexcept {
  return cfg.kp * fal(e1, cfg.alpha1, cfg.delta1) + cfg.kd * fal(e2, cfg.alpha2, cfg.delta2);
}

namespace {

// exp overflow to +inf drives the scheduled term to zero, which is the limit.
double scheduled_term(double e, double k_static, double k_peak, double mu,
                      double alpha) noexcept {
  const double gain = k_static + k_peak / (1.0 + std::exp(mu * e * e));
  return gain * signed_power(e, alpha);
}

}  // namespace

double inlsef(double e1, double e2, const InlsefConfig& cfg) noexcept {
  const double v1 = scheduled_term(e1, cfg.k11, cfg.k12, cfg.mu1, cfg.alpha1);
  const double v2 = scheduled_term(e2, cfg.k21, cfg.k22, cfg.mu2, cfg.alpha2);
  return cfg.delta * std::tanh((v1 + v2) / cfg.delta);
}

double virtual_control(double e1, double e2, const ControllerConfig& cfg) noexcept {
  if (const auto* n = std::get_if<NlsefConfig>(&cfg)) return nlsef(e1, e2, *n);
  return inlsef(e1, e2, std::get<InlsefConfig>(cfg));
}

double aiofl_law(double v, double disturbance_estimate, double b0) {
  if (b0 == 0.0) throw ConfigError("aiofl_law: b0 must be nonzero");
  return v - disturbance_estimate / b0;
}

}  // namespace aiofl
