#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "bfholes/sampling.hpp"

namespace bfholes {

using Complex = std::complex<double>;

struct EvaluationPoint {
  std::vector<Complex> coordinates;

  static EvaluationPoint real(std::span<const double> x);
  static EvaluationPoint real(double x) { return {{Complex(x, 0.0)}}; }
  static EvaluationPoint complex(Complex z) { return {{z}}; }

  int dimension() const noexcept { return static_cast<int>(coordinates.size()); }
  bool is_real() const noexcept;
  double norm() const noexcept;
};

/// psi = mantissa * e^{log_scale}. log_scale is 0 unless the log-space path was taken.
struct FieldValue {
  Complex mantissa{0.0, 0.0};
  double log_scale = 0.0;
  bool certified = true;  // point inside the plan radius

  Complex value() const { return mantissa * std::exp(log_scale); }
  double log_abs() const { return std::log(std::abs(mantissa)) + log_scale; }
};

FieldValue evaluate(const CoefficientDraw& draw, const EvaluationPoint& p);

/// Plain-precision evaluation at a real point (no certification flag, no log path).
double evaluate_real(const CoefficientDraw& draw, std::span<const double> x);

/// e^{-|x|^2/2} psi(x): the unit-variance weighted field.
double evaluate_weighted(const CoefficientDraw& draw, std::span<const double> x);

/// e^{x . y}
double kernel(std::span<const double> x, std::span<const double> y);

/// |e^{-|s|^2/2} e^{-|t|^2/2} e^{s.t} - e^{-|s-t|^2/2}|
double kernel_identity_residual(std::span<const double> s, std::span<const double> t);

/// beta with psi_alpha(x) = e^{-|y|^2/2 + y.x} psi_beta(x - y), one axis at a time.
/// The returned plan has radius plan.radius - |y|.
CoefficientDraw recenter_coefficients(const CoefficientDraw& draw, std::span<const double> y);

struct RotatedExpansion {
  CoefficientDraw beta;
  std::vector<double> phases;   // theta_j = -sum_k j_k arg(zeta_k), canonical order
  std::vector<Complex> zeta;
  std::vector<double> moduli;   // y_k
  std::vector<double> angles;   // arg(zeta_k)
};

/// Writes zeta_k = y_k e^{i phi_k} (y_k = zeta_k, phi_k = 0 when zeta_k is real).
RotatedExpansion rotate_recenter_coefficients(const CoefficientDraw& draw, std::span<const Complex> zeta);

/// e^{-|zeta|^2/2 + x.y} sum_j beta_j e^{i theta_j} prod_k (x_k e^{i phi_k} - zeta_k)^{j_k} / sqrt(j!)
Complex evaluate_rotated_expansion(const RotatedExpansion& e, std::span<const double> x);

enum class GrowthKind { max_log_modulus, sphere_average_log, weighted_value };
const char* to_string(GrowthKind kind);

struct GrowthStatistic {
  double radius = 0.0;
  double value = 0.0;
  GrowthKind kind = GrowthKind::max_log_modulus;
  std::string resolution;
  int nodes = 0;
  double error_bound = 0.0;     // certified (max) or estimated (average) discretization error
  double standard_error = 0.0;  // Monte Carlo directions only
  int excluded_nodes = 0;
  bool certified = true;
};

struct NetOptions {
  int initial_nodes = 0;  // 0: 4 ceil(r^2) + 64 per circle
  double tolerance = 0.01;  // target error / r^2
  long long max_nodes = 1 << 22;
};

/// max log|psi| over B(0, r). m = 1: circle nodes (maximum principle). m >= 2: torus net
/// on the polydisk of radius r / sqrt(m), which lies in the ball.
GrowthStatistic max_log_modulus(const CoefficientDraw& draw, double r, NetOptions options = {});

/// Average of log|psi| over the sphere of radius r. m = 1: trapezoid rule; m >= 2:
/// normalized Gaussian directions from the quadrature stream. nodes = 0 picks the default.
GrowthStatistic sphere_average_log(const CoefficientDraw& draw, double r, int nodes = 0);

int default_sphere_nodes(int m, double r);

/// max over a real grid of log|e^{-|x|^2/2} psi(x)| on [-r, r] (m = 1).
GrowthStatistic max_log_weighted_real(const CoefficientDraw& draw, double r, double step = 0.01);

/// log sum_j |alpha_j| d^order(X^{|j|}) / sqrt(j!) for order 0..2: bounds sup of |psi| and
/// of its radial derivatives on the polydisk of radius X per coordinate.
double log_abs_series(const CoefficientDraw& draw, double x, int order);

}  // namespace bfholes
