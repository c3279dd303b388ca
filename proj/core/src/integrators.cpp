#include <algorithm>
#include <cmath>
#include <string>

#include "aiofl/odesim.hpp"

namespace aiofl {

namespace {

void require_finite(const Eigen::VectorXd& v, double t) {
  if (!v.allFinite()) {
    throw DivergenceError("integrator: non-finite stage value at t=" + std::to_string(t), t);
  }
}

}  // namespace

Rk4Stepper::Rk4Stepper(Eigen::Index dimension)
    : k1_(dimension), k2_(dimension), k3_(dimension), k4_(dimension), scratch_(dimension) {}

void Rk4Stepper::step(const OdeFunction& f, double t, Eigen::VectorXd& x, double h) {
  const double half = 0.5 * h;
  f(t, x, k1_);
  require_finite(k1_, t);
  scratch_ = x + half * k1_;
  f(t + half, scratch_, k2_);
  require_finite(k2_, t);
  scratch_ = x + half * k2_;
  f(t + half, scratch_, k3_);
  require_finite(k3_, t);
  scratch_ = x + h * k3_;
  f(t + h, scratch_, k4_);
  require_finite(k4_, t);
  x += (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
}

Eigen::VectorXd rk4_step(const OdeFunction& f, double t, const Eigen::VectorXd& x,
                         double h) {
  if (!(h > 0.0)) throw InvalidInput("rk4_step: step must be positive");
  Rk4Stepper stepper(x.size());
  Eigen::VectorXd next = x;
  stepper.step(f, t, next, h);
  return next;
}

Eigen::VectorXd rk45_integrate(const OdeFunction& f, double t0,
                               const Eigen::VectorXd& x0, double t1,
                               const Rk45Options& opts) {
  if (!(t1 >= t0)) throw InvalidInput("rk45_integrate: t1 must not precede t0");
  // Dormand-Prince tableau.
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                   b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  const Eigen::Index n = x0.size();
  Eigen::VectorXd x = x0, k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), y(n), err(n);
  double t = t0;
  double h = std::clamp(opts.initial_step, opts.min_step, opts.max_step);
  f(t, x, k1);
  require_finite(k1, t);
  while (t < t1) {
    const bool last = h >= t1 - t;
    if (last) h = t1 - t;
    f(t + c2 * h, x + h * a21 * k1, k2);
    f(t + c3 * h, x + h * (a31 * k1 + a32 * k2), k3);
    f(t + c4 * h, x + h * (a41 * k1 + a42 * k2 + a43 * k3), k4);
    f(t + c5 * h, x + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4), k5);
    f(t + h, x + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5), k6);
    y = x + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    f(t + h, y, k7);
    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double norm = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double scale = opts.atol + opts.rtol * std::max(std::abs(x[i]), std::abs(y[i]));
      norm = std::max(norm, std::abs(err[i]) / scale);
    }
    if (!std::isfinite(norm)) {
      if (h <= opts.min_step) throw DivergenceError("rk45: non-finite state", t);
      h = std::max(0.25 * h, opts.min_step);
      continue;
    }
    // Steps at the floor are accepted so switching surfaces cannot stall progress.
    if (norm <= 1.0 || h <= opts.min_step) {
      t = last ? t1 : t + h;
      x = y;
      k1 = k7;
      require_finite(x, t);
    }
    const double factor = norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(norm, -0.2), 0.2, 5.0);
    h = std::clamp(h * factor, opts.min_step, opts.max_step);
  }
  return x;
}

}  // namespace aiofl
