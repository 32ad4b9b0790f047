#pragma once

#include <vector>

#include "bfholes/sampling.hpp"

namespace bfholes {

/// The box center + [-half_width, half_width]^m. grid_step = 0 picks the default.
struct BoxSpec {
  int m = 1;
  double half_width = 0.0;
  double grid_step = 0.0;
  std::vector<double> center;  // empty means the origin

  static BoxSpec interval(double r, double grid_step = 0.0) { return {1, r, grid_step, {}}; }
};

enum class CensusVerdict { hole, zero_found, uncertain };
const char* to_string(CensusVerdict v);

struct CensusResult {
  int count = 0;
  bool count_is_lower_bound = false;
  CensusVerdict verdict = CensusVerdict::hole;
  int refinement_depth = 0;
  int uncertain_cells = 0;
  std::vector<double> zeros;    // m = 1: located roots; m >= 2: one witness point
  double witness_value = 0.0;   // |psi_N| at the first witness
};

/// min(0.05, 1 / (4 sqrt(N)))
double default_grid_step(int degree);

/// m = 1: every zero in the box, certified cell by cell (quadratic Taylor certificate
/// with coefficient-envelope bounds and the plan's tail bounds) and bisected to 1e-12.
/// m >= 2: sign inspection on the grid plus a gradient-envelope certificate; the count is
/// then 0 or a lower bound of 1.
CensusResult real_zero_count(const CoefficientDraw& draw, const BoxSpec& box);

/// Same certificate, stopping at the first certified zero.
CensusResult real_hole_census(const CoefficientDraw& draw, const BoxSpec& box);
CensusVerdict real_hole_indicator(const CoefficientDraw& draw, const BoxSpec& box);

struct WindingResult {
  int count = 0;
  double radius_used = 0.0;
  int perturbations = 0;
  int steps = 0;
};

/// Zeros of psi in the disc |z| < r (m = 1) by the argument principle. Only the upper
/// half circle is tracked; conjugate symmetry doubles it. Each accepted step is certified
/// to keep psi inside a disc that excludes 0, so the argument increment is below pi/2.
/// A zero too close to the circle moves r by +1e-9 r, at most 5 times, then throws.
WindingResult winding_count_detailed(const CoefficientDraw& draw, double r);
int winding_count(const CoefficientDraw& draw, double r);

/// Moduli of the zeros in the disc of radius r, with multiplicity, refined to 1e-9
/// relative accuracy by bisection on the counting function.
std::vector<double> zero_moduli(const CoefficientDraw& draw, double r, int shells = 16);

struct JensenAudit {
  double r = 0.0;
  double zero_side = 0.0;     // sum log(r / rho_k) (+ k log r for a zero of order k at 0)
  double average_side = 0.0;  // circle average of log|psi| - log|c_k|
  double residual = 0.0;
  int zeros = 0;
  int nodes = 0;
  int origin_order = 0;  // nonzero: psi(0) = 0 was flagged and the order-k formula used
};

JensenAudit jensen_audit(const CoefficientDraw& draw, double r, int shells = 16);

}  // namespace bfholes
