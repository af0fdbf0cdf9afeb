#pragma once

#include <vector>

namespace deepspline {

enum class Side { left, right };

/// Learnable continuous piecewise-linear activation: a weighted sum of
/// shifted ReLUs plus an affine term,
///
///   sigma(x) = sum_k coeffs[k] * max(x - knots[k], 0) + b1 * x + b2.
///
/// Knots are strictly increasing and fixed during training; coeffs[k] is the
/// slope jump at knots[k], and (b1, b2) are the affine (null-space)
/// coefficients that the slope jumps cannot express.
struct DeepSpline {
  std::vector<double> knots;
  std::vector<double> coeffs;
  double b1 = 0.0;
  double b2 = 0.0;
};

/// Gradient (or subgradient) with respect to the spline parameters.
struct SplineGrad {
  std::vector<double> coeffs;
  double b1 = 0.0;
  double b2 = 0.0;
};

/// Uniform grid on [lo, hi] with k knots. Endpoints and interior points are
/// computed as exact affine combinations so that grids like 21 knots on
/// [-1, 1] contain 0 and +-0.5 exactly. k == 1 places the single knot at the
/// midpoint.
std::vector<double> uniform_knots(double lo, double hi, int k);

/// Throws std::invalid_argument if knots are not strictly increasing, sizes
/// disagree, the spline is empty, or any entry is non-finite.
void validate(const DeepSpline& s);

double eval(const DeepSpline& s, double x);

/// One-sided slope at x. The right slope counts every knot at or below x,
/// the left slope only knots strictly below.
double one_sided_derivative(const DeepSpline& s, double x, Side side);

/// d eval(s, x) / d (coeffs, b1, b2) at fixed x.
SplineGrad param_gradients(const DeepSpline& s, double x);

/// Second-order total variation: the l1 norm of the ReLU coefficients.
double tv2(const DeepSpline& s);

/// tv2(s) + |s(1)| + |s(0)|.
double bv2_norm(const DeepSpline& s);

/// Subgradient of bv2_norm in the parameters; sign(0) = 0, so coefficients
/// that are exactly zero stay at rest under l1 descent.
SplineGrad bv2_subgradient(const DeepSpline& s);

/// Absolute value on the given grid: slope jump 2 at the knot nearest 0,
/// b1 = -1. Exact |x| whenever 0 is on the grid.
DeepSpline init_abs(std::vector<double> knot_grid);

/// Soft threshold with dead zone (-1/2, 1/2): jumps -1 and +1 at the knots
/// nearest -1/2 and +1/2, b1 = 1, b2 = 1/2.
DeepSpline init_soft(std::vector<double> knot_grid);

}  // namespace deepspline
