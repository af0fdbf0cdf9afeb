#include "deepspline/spline.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace deepspline {
namespace {

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

std::size_t nearest_knot(const std::vector<double>& knots, double target) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (std::abs(knots[i] - target) < std::abs(knots[best] - target)) best = i;
  }
  return best;
}

void check_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("spline init: knot grid needs at least one knot");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) throw std::invalid_argument("spline init: non-finite knot");
    if (i > 0 && !(grid[i - 1] < grid[i]))
      throw std::invalid_argument("spline init: knots must be strictly increasing");
  }
}

}  // namespace

std::vector<double> uniform_knots(double lo, double hi, int k) {
  if (k < 1) throw std::invalid_argument("uniform_knots: need at least one knot");
  if (!(lo < hi)) throw std::invalid_argument("uniform_knots: lo must be below hi");
  std::vector<double> grid(static_cast<std::size_t>(k));
  if (k == 1) {
    grid[0] = 0.5 * (lo + hi);
    return grid;
  }
  for (int i = 0; i < k; ++i) grid[i] = (lo * (k - 1 - i) + hi * i) / (k - 1);
  return grid;
}

void validate(const DeepSpline& s) {
  if (s.knots.empty()) throw std::invalid_argument("DeepSpline: needs at least one knot");
  if (s.knots.size() != s.coeffs.size())
    throw std::invalid_argument("DeepSpline: knots and coeffs sizes differ");
  for (std::size_t i = 0; i < s.knots.size(); ++i) {
    if (!std::isfinite(s.knots[i]) || !std::isfinite(s.coeffs[i]))
      throw std::invalid_argument("DeepSpline: non-finite entry");
    if (i > 0 && !(s.knots[i - 1] < s.knots[i]))
      throw std::invalid_argument("DeepSpline: knots must be strictly increasing");
  }
  if (!std::isfinite(s.b1) || !std::isfinite(s.b2))
    throw std::invalid_argument("DeepSpline: non-finite affine term");
}

double eval(const DeepSpline& s, double x) {
  double acc = 0.0;
  for (std::size_t k = 0; k < s.knots.size(); ++k) {
    const double t = x - s.knots[k];
    if (t > 0.0) acc += s.coeffs[k] * t;
  }
  return acc + s.b1 * x + s.b2;
}

double one_sided_derivative(const DeepSpline& s, double x, Side side) {
  double slope = s.b1;
  for (std::size_t k = 0; k < s.knots.size(); ++k) {
    const bool active = side == Side::right ? s.knots[k] <= x : s.knots[k] < x;
    if (active) slope += s.coeffs[k];
  }
  return slope;
}

SplineGrad param_gradients(const DeepSpline& s, double x) {
  SplineGrad g;
  g.coeffs.resize(s.knots.size());
  for (std::size_t k = 0; k < s.knots.size(); ++k) {
    const double t = x - s.knots[k];
    g.coeffs[k] = t > 0.0 ? t : 0.0;
  }
  g.b1 = x;
  g.b2 = 1.0;
  return g;
}

double tv2(const DeepSpline& s) {
  double acc = 0.0;
  for (double a : s.coeffs) acc += std::abs(a);
  return acc;
}

double bv2_norm(const DeepSpline& s) {
  return tv2(s) + std::abs(eval(s, 1.0)) + std::abs(eval(s, 0.0));
}

SplineGrad bv2_subgradient(const DeepSpline& s) {
  const double s1 = sign(eval(s, 1.0));
  const double s0 = sign(eval(s, 0.0));
  SplineGrad g;
  g.coeffs.resize(s.knots.size());
  for (std::size_t k = 0; k < s.knots.size(); ++k) {
    const double r1 = 1.0 - s.knots[k];
    const double r0 = -s.knots[k];
    g.coeffs[k] = sign(s.coeffs[k]) + s1 * (r1 > 0.0 ? r1 : 0.0) + s0 * (r0 > 0.0 ? r0 : 0.0);
  }
  g.b1 = s1;
  g.b2 = s1 + s0;
  return g;
}

DeepSpline init_abs(std::vector<double> knot_grid) {
  check_grid(knot_grid);
  DeepSpline s;
  s.coeffs.assign(knot_grid.size(), 0.0);
  s.coeffs[nearest_knot(knot_grid, 0.0)] += 2.0;
  s.knots = std::move(knot_grid);
  s.b1 = -1.0;
  s.b2 = 0.0;
  return s;
}

DeepSpline init_soft(std::vector<double> knot_grid) {
  check_grid(knot_grid);
  DeepSpline s;
  s.coeffs.assign(knot_grid.size(), 0.0);
  s.coeffs[nearest_knot(knot_grid, -0.5)] += -1.0;
  s.coeffs[nearest_knot(knot_grid, 0.5)] += 1.0;
  s.knots = std::move(knot_grid);
  s.b1 = 1.0;
  s.b2 = 0.5;
  return s;
}

}  // namespace deepspline
