#include "aiofl/observer.hpp"

#include <cmath>

#include "aiofl/errors.hpp"
#include "aiofl/math.hpp"

namespace aiofl {

void ObserverConfig::validate() const {
  if (rho < 1) throw ConfigError("observer: rho must be at least 1");
  if (!(omega0 > 0.0) || !std::isfinite(omega0)) {
    throw ConfigError("observer: omega0 must be positive");
  }
  if (b0 == 0.0 || !std::isfinite(b0)) throw ConfigError("observer: b0 must be nonzero");
  if (a.size() != rho + 1) throw ConfigError("observer: need rho + 1 coefficients");
  if (!a.allFinite()) throw ConfigError("observer: coefficients must be finite");
  if (const auto* nl = std::get_if<ImprovedNonlinearEso>(&variant)) {
    if (!(nl->alpha > 0.0 && nl->alpha < 1.0)) {
      throw ConfigError("observer: alpha must lie in (0, 1)");
    }
    if (nl->beta < 0.0 || nl->k_alpha < 0.0 || nl->k_beta < 0.0) {
      throw ConfigError("observer: beta, k_alpha and k_beta must be nonnegative");
    }
  }
}

Eigen::VectorXd ObserverConfig::gains() const { return gains_from_bandwidth(a, omega0); }

Eigen::VectorXd gains_from_bandwidth(const Eigen::VectorXd& a, double omega0) {
  if (!(omega0 > 0.0)) throw InvalidInput("gains_from_bandwidth: omega0 must be positive");
  Eigen::VectorXd beta(a.size());
  double power = 1.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    power *= omega0;
    beta[i] = a[i] * power;
  }
  return beta;
}

double g_function(double e, double k_alpha, double k_beta, double alpha,
                  double beta) noexcept {
  if (e == 0.0) return 0.0;
  return k_alpha * signed_power(e, alpha) + k_beta * std::pow(std::abs(e), beta) * e;
}

ExtendedStateObserver::ExtendedStateObserver(const ObserverConfig& cfg)
    : cfg_(cfg), gains_(gains_from_bandwidth(cfg.a, cfg.omega0)) {
  cfg_.validate();
}

double ExtendedStateObserver::shaped_innovation(double e) const noexcept {
  if (const auto* nl = std::get_if<ImprovedNonlinearEso>(&cfg_.variant)) {
    return g_function(e, nl->k_alpha, nl->k_beta, nl->alpha, nl->beta);
  }
  return e;
}

void ExtendedStateObserver::derivative(const double* xi_hat, double y, double u,
                                       double* out) const noexcept {
  const int n = dimension();
  const double innovation = shaped_innovation(y - xi_hat[0]);
  for (int i = 0; i + 1 < n; ++i) out[i] = xi_hat[i + 1] + gains_[i] * innovation;
  out[n - 1] = gains_[n - 1] * innovation;
  out[cfg_.rho - 1] += cfg_.b0 * u;
}

namespace {

Eigen::VectorXd observer_rate(const Eigen::VectorXd& xi_hat, double y, double u,
                              const ObserverConfig& cfg) {
  const ExtendedStateObserver eso(cfg);
  if (xi_hat.size() != eso.dimension()) {
    throw InvalidInput("observer: state dimension must be rho + 1");
  }
  Eigen::VectorXd out(eso.dimension());
  eso.derivative(xi_hat.data(), y, u, out.data());
  return out;
}

}  // namespace

Eigen::VectorXd leso_derivative(const Eigen::VectorXd& xi_hat, double y, double u,
                                const ObserverConfig& cfg) {
  if (!std::holds_alternative<LinearEso>(cfg.variant)) {
    throw ConfigError("leso_derivative: observer variant is not linear");
  }
  return observer_rate(xi_hat, y, u, cfg);
}

Eigen::VectorXd inleso_derivative(const Eigen::VectorXd& xi_hat, double y, double u,
                                  const ObserverConfig& cfg) {
  if (!std::holds_alternative<ImprovedNonlinearEso>(cfg.variant)) {
    throw ConfigError("inleso_derivative: observer variant is not improved-nonlinear");
  }
  return observer_rate(xi_hat, y, u, cfg);
}

Eigen::MatrixXd error_dynamics_matrix(const Eigen::VectorXd& a) {
  const Eigen::Index n = a.size();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  A.col(0) = -a;
  for (Eigen::Index i = 0; i + 1 < n; ++i) A(i, i + 1) = 1.0;
  return A;
}

Eigen::MatrixXd solve_continuous_lyapunov(const Eigen::MatrixXd& A,
                                          const Eigen::MatrixXd& Q) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n || Q.rows() != n || Q.cols() != n) {
    throw InvalidInput("solve_continuous_lyapunov: A and Q must be square and equal size");
  }
  // vec(A^T P + P A) = (I kron A^T + A^T kron I) vec(P), column-major vec.
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd At = A.transpose();
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      K.block(i * n, j * n, n, n) += I(i, j) * At;
      K.block(i * n, j * n, n, n) += At(i, j) * I;
    }
  }
  const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(Q.data(), n * n);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(K);
  if (!lu.isInvertible()) {
    throw NumericError("solve_continuous_lyapunov: solution is not unique");
  }
  const Eigen::VectorXd p = lu.solve(rhs);
  Eigen::MatrixXd P = Eigen::Map<const Eigen::MatrixXd>(p.data(), n, n);
  return 0.5 * (P + P.transpose());
}

LyapunovReport lyapunov_validate(const Eigen::VectorXd& a, double omega0, double M) {
  if (a.size() < 2) throw InvalidInput("lyapunov_validate: need rho + 1 >= 2 coefficients");
  if (!(omega0 > 0.0)) throw InvalidInput("lyapunov_validate: omega0 must be positive");
  const Eigen::MatrixXd A = error_dynamics_matrix(a);

  LyapunovReport report;
  const Eigen::VectorXcd eig = A.eigenvalues();
  report.hurwitz = (eig.real().array() < 0.0).all();
  if (!report.hurwitz) return report;

  const Eigen::MatrixXd P =
      solve_continuous_lyapunov(A, Eigen::MatrixXd::Identity(a.size(), a.size()));
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> spectrum(P);
  report.lambda_min = spectrum.eigenvalues().minCoeff();
  report.lambda_max = spectrum.eigenvalues().maxCoeff();
  report.P = P;
  report.bound_constant =
      2.0 * M * report.lambda_max * report.lambda_max / (omega0 * report.lambda_min);
  return report;
}

}  // namespace aiofl
