#include "aiofl/differentiator.hpp"

#include <cmath>

#include "aiofl/errors.hpp"
#include "aiofl/math.hpp"

namespace aiofl {

void validate(const TdConfig& cfg) {
  if (const auto* classic = std::get_if<ClassicTd>(&cfg)) {
    if (!(classic->R > 0.0)) throw ConfigError("td: R must be positive");
    return;
  }
  const auto& itd = std::get<ImprovedTd>(cfg);
  if (!(itd.a > 0.0 && itd.a < 1.0)) throw ConfigError("td: a must lie in (0, 1)");
  if (!(itd.b > 0.0)) throw ConfigError("td: b must be positive");
  if (!(itd.c > 0.0)) throw ConfigError("td: c must be positive");
  if (!(itd.rho_td > 0.0)) throw ConfigError("td: rho_td must be positive");
}

TdState td_derivative(const TdState& st, double r, const ClassicTd& cfg) noexcept {
  const double switching = st.r1 - r + st.r2 * std::abs(st.r2) / (2.0 * cfg.R);
  return {st.r2, -cfg.R * sign(switching)};
}

TdState itd_derivative(const TdState& st, double r, const ImprovedTd& cfg) noexcept {
  const double argument = cfg.normalized ? (st.r1 - r)
                                         : (cfg.b * st.r1 - (1.0 - cfg.a) * r);
  const double rho = cfg.rho_td;
  return {st.r2, -rho * rho * std::tanh(argument / cfg.c) - rho * st.r2};
}

TdState differentiator_rate(const TdState& st, double r, const TdConfig& cfg) noexcept {
  if (const auto* classic = std::get_if<ClassicTd>(&cfg)) {
    return td_derivative(st, r, *classic);
  }
  return itd_derivative(st, r, std::get<ImprovedTd>(cfg));
}

}  // namespace aiofl
