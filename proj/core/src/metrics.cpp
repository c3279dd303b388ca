#include "aiofl/metrics.hpp"

#include <cmath>
#include <vector>

namespace aiofl {

void OpiWeights::validate() const {
  if (!(N1 > 0.0 && N2 > 0.0 && N3 > 0.0)) throw ConfigError("opi: normalizers must be positive");
  if (!(tf > 0.0)) throw ConfigError("opi: horizon must be positive");
}

double trapezoid(std::span<const double> t, std::span<const double> f, double horizon) {
  if (t.size() != f.size()) throw InvalidInput("trapezoid: length mismatch");
  if (t.empty()) throw InvalidInput("trapezoid: empty series");
  const double slack = 1e-9 * std::max(1.0, std::abs(horizon));
  if (horizon > t.back() + slack) throw InvalidInput("metrics: horizon exceeds the record");
  if (horizon < t.front()) throw InvalidInput("metrics: horizon precedes the record");

  double sum = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (t[i] <= horizon + slack) {
      sum += 0.5 * (t[i] - t[i - 1]) * (f[i] + f[i - 1]);
      continue;
    }
    const double w = (horizon - t[i - 1]) / (t[i] - t[i - 1]);
    const double f_end = f[i - 1] + w * (f[i] - f[i - 1]);
    sum += 0.5 * (horizon - t[i - 1]) * (f[i - 1] + f_end);
    break;
  }
  return sum;
}

double itae(const RunRecord& rec, double horizon) {
  std::vector<double> integrand(rec.size());
  for (std::size_t i = 0; i < rec.size(); ++i) {
    integrand[i] = rec.t[i] * std::abs(rec.y[i] - rec.r[i]);
  }
  return trapezoid(rec.t, integrand, horizon);
}

double isu(const RunRecord& rec, double horizon) {
  std::vector<double> integrand(rec.size());
  for (std::size_t i = 0; i < rec.size(); ++i) integrand[i] = rec.u[i] * rec.u[i];
  return trapezoid(rec.t, integrand, horizon);
}

double iau(const RunRecord& rec, double horizon) {
  std::vector<double> integrand(rec.size());
  for (std::size_t i = 0; i < rec.size(); ++i) integrand[i] = std::abs(rec.u[i]);
  return trapezoid(rec.t, integrand, horizon);
}

double opi(double itae, double isu, double iau, const OpiWeights& w) {
  return w.w1 * (itae / w.N1) + w.w2 * (isu / w.N2) + w.w3 * (iau / w.N3);
}

MetricsReport evaluate_metrics(const RunRecord& rec, const OpiWeights& w) {
  w.validate();
  MetricsReport m;
  m.itae = itae(rec, w.tf);
  m.isu = isu(rec, w.tf);
  m.iau = iau(rec, w.tf);
  m.opi = opi(m.itae, m.isu, m.iau, w);
  return m;
}

}  // namespace aiofl
