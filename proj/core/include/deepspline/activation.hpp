#pragma once

#include "deepspline/spline.hpp"

namespace deepspline {

enum class ActivationKind { spline, relu, leaky_relu, prelu, sigmoid };

/// Per-neuron activation descriptor. Fixed kinds keep a closed-form shape
/// (PReLU additionally learns its negative slope); the spline kind carries
/// its own trainable parameters.
struct Activation {
  ActivationKind kind = ActivationKind::relu;
  DeepSpline spline;   // kind == spline only
  double slope = 0.0;  // leaky_relu (fixed) and prelu (learnable)

  static Activation make_spline(DeepSpline s);
  static Activation make_relu();
  static Activation make_leaky_relu(double slope = 0.01);
  static Activation make_prelu(double slope = 0.25);
  static Activation make_sigmoid();
};

void validate(const Activation& a);

double activate(const Activation& a, double x);

/// Right derivative in x; kinks take the right-hand slope.
double activation_derivative(const Activation& a, double x);

/// BV2 norm of the activation. Splines use bv2_norm; the fixed kinds use
/// their closed forms: ReLU 2, LeakyReLU(a) 2 - a, PReLU(a) |1 - a| + 1,
/// Sigmoid 1/2 + 1/2 + 1/(1 + e^-1).
double activation_bv2_norm(const Activation& a);

inline bool is_spline(const Activation& a) { return a.kind == ActivationKind::spline; }

}  // namespace deepspline
