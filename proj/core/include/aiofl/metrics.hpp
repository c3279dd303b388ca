#pragma once

#include <span>

#include "aiofl/odesim.hpp"

namespace aiofl {

/// Weighted, normalized objective. Weights are taken as given (no renormalization).
struct OpiWeights {
  double w1 = 0.6, w2 = 0.2, w3 = 0.6;
  double N1 = 10.0, N2 = 2.0, N3 = 2.7;
  double tf = 6.0;

  void validate() const;
  bool operator==(const OpiWeights&) const = default;
};

struct MetricsReport {
  double itae = 0.0;
  double isu = 0.0;
  double iau = 0.0;
  double opi = 0.0;
};

/// Trapezoidal integral of samples over t in [t.front(), horizon]; a horizon
/// that falls between samples is reached by linear interpolation.
double trapezoid(std::span<const double> t, std::span<const double> f, double horizon);

/// Integral of t |y - r| on the logged grid. Throws InvalidInput if the record
/// does not reach the horizon.
double itae(const RunRecord& rec, double horizon);
/// Integral of u^2.
double isu(const RunRecord& rec, double horizon);
/// Integral of |u|.
double iau(const RunRecord& rec, double horizon);

double opi(double itae, double isu, double iau, const OpiWeights& w);

/// All four indices over w.tf.
MetricsReport evaluate_metrics(const RunRecord& rec, const OpiWeights& w);

}  // namespace aiofl
