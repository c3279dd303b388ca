#pragma once

#include <optional>
#include <variant>

#include <Eigen/Dense>

namespace aiofl {

/// Linear innovation: every channel sees beta_i * (y - xi_1).
struct LinearEso {
  bool operator==(const LinearEso&) const = default;
};

/// Innovation shaped by G(e) = k_alpha |e|^alpha sign(e) + k_beta |e|^beta e.
struct ImprovedNonlinearEso {
  double k_alpha = 0.0;
  double k_beta = 0.0;
  double alpha = 0.5;
  double beta = 0.0;
  bool operator==(const ImprovedNonlinearEso&) const = default;
};

using EsoVariant = std::variant<LinearEso, ImprovedNonlinearEso>;

struct ObserverConfig {
  int rho = 4;
  double omega0 = 1.0;
  /// Bandwidth coefficients a_1 .. a_(rho+1).
  Eigen::VectorXd a = Eigen::VectorXd::Ones(5);
  double b0 = 1.0;
  EsoVariant variant = LinearEso{};

  /// Throws ConfigError on omega0 <= 0, b0 == 0, a size mismatch or bad G exponents.
  void validate() const;
  /// beta_i = a_i omega0^i.
  Eigen::VectorXd gains() const;
};

Eigen::VectorXd gains_from_bandwidth(const Eigen::VectorXd& a, double omega0);

/// G(e); odd, continuous, with sign(0) = 0.
double g_function(double e, double k_alpha, double k_beta, double alpha,
                  double beta) noexcept;

/// Precomputed observer; the derivative evaluation does not allocate.
class ExtendedStateObserver {
 public:
  explicit ExtendedStateObserver(const ObserverConfig& cfg);

  int dimension() const noexcept { return static_cast<int>(gains_.size()); }
  const ObserverConfig& config() const noexcept { return cfg_; }
  const Eigen::VectorXd& gains() const noexcept { return gains_; }

  /// Innovation after the variant's shaping (identity for the linear ESO).
  double shaped_innovation(double e) const noexcept;

  void derivative(const double* xi_hat, double y, double u, double* out) const noexcept;

 private:
  ObserverConfig cfg_;
  Eigen::VectorXd gains_;
};

/// Linear ESO right-hand side. Throws ConfigError if cfg is not the linear variant.
Eigen::VectorXd leso_derivative(const Eigen::VectorXd& xi_hat, double y, double u,
                                const ObserverConfig& cfg);

/// Improved nonlinear ESO right-hand side. Throws ConfigError on the wrong variant.
Eigen::VectorXd inleso_derivative(const Eigen::VectorXd& xi_hat, double y, double u,
                                  const ObserverConfig& cfg);

struct LyapunovReport {
  bool hurwitz = false;
  /// Solution of A^T P + P A = -I; empty when the error matrix is not Hurwitz.
  std::optional<Eigen::MatrixXd> P;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  /// 2 M lambda_max^2 / (omega0 lambda_min): ultimate bound on the scaled error.
  double bound_constant = 0.0;
};

/// Scaled estimation-error matrix: first column -a, ones on the superdiagonal.
Eigen::MatrixXd error_dynamics_matrix(const Eigen::VectorXd& a);

/// Solves A^T P + P A = -Q by Kronecker vectorisation.
Eigen::MatrixXd solve_continuous_lyapunov(const Eigen::MatrixXd& A,
                                          const Eigen::MatrixXd& Q);

LyapunovReport lyapunov_validate(const Eigen::VectorXd& a, double omega0,
                                 double M = 1.0);

}  // namespace aiofl
