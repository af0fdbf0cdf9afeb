#include "deepspline/activation.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace deepspline {

Activation Activation::make_spline(DeepSpline s) {
  Activation a;
  a.kind = ActivationKind::spline;
  a.spline = std::move(s);
  return a;
}

Activation Activation::make_relu() {
  Activation a;
  a.kind = ActivationKind::relu;
  return a;
}

Activation Activation::make_leaky_relu(double slope) {
  Activation a;
  a.kind = ActivationKind::leaky_relu;
  a.slope = slope;
  return a;
}

Activation Activation::make_prelu(double slope) {
  Activation a;
  a.kind = ActivationKind::prelu;
  a.slope = slope;
  return a;
}

Activation Activation::make_sigmoid() {
  Activation a;
  a.kind = ActivationKind::sigmoid;
  return a;
}

void validate(const Activation& a) {
  switch (a.kind) {
    case ActivationKind::spline:
      validate(a.spline);
      break;
    case ActivationKind::leaky_relu:
      if (!(a.slope > 0.0 && a.slope < 1.0))
        throw std::invalid_argument("LeakyReLU slope must be in (0, 1)");
      break;
    case ActivationKind::prelu:
      if (!std::isfinite(a.slope)) throw std::invalid_argument("PReLU slope must be finite");
      break;
    default:
      break;
  }
}

double activate(const Activation& a, double x) {
  switch (a.kind) {
    case ActivationKind::spline:
      return eval(a.spline, x);
    case ActivationKind::relu:
      return x > 0.0 ? x : 0.0;
    case ActivationKind::leaky_relu:
    case ActivationKind::prelu:
      return x >= 0.0 ? x : a.slope * x;
    case ActivationKind::sigmoid:
      return 1.0 / (1.0 + std::exp(-x));
  }
  return 0.0;
}

double activation_derivative(const Activation& a, double x) {
  switch (a.kind) {
    case ActivationKind::spline:
      return one_sided_derivative(a.spline, x, Side::right);
    case ActivationKind::relu:
      return x >= 0.0 ? 1.0 : 0.0;
    case ActivationKind::leaky_relu:
    case ActivationKind::prelu:
      return x >= 0.0 ? 1.0 : a.slope;
    case ActivationKind::sigmoid: {
      const double y = 1.0 / (1.0 + std::exp(-x));
      return y * (1.0 - y);
    }
  }
  return 0.0;
}

double activation_bv2_norm(const Activation& a) {
  switch (a.kind) {
    case ActivationKind::spline:
      return bv2_norm(a.spline);
    case ActivationKind::relu:
      return 2.0;
    case ActivationKind::leaky_relu:
      return 2.0 - a.slope;
    case ActivationKind::prelu:
      return std::abs(1.0 - a.slope) + 1.0;
    case ActivationKind::sigmoid:
      // TV2 = 1/2, |sigma(0)| = 1/2, |sigma(1)| = 1/(1 + e^-1).
      return 0.5 + 0.5 + 1.0 / (1.0 + std::exp(-1.0));
  }
  return 0.0;
}

}  // namespace deepspline
