#pragma once

#include <optional>
#include <vector>

#include "deepspline/activation.hpp"
#include "deepspline/data.hpp"
#include "deepspline/linalg.hpp"

namespace deepspline {

/// Aggregation of per-neuron norms within one layer.
enum class OuterNorm { l1, l2 };

/// One fully connected layer. Rows of W are the per-neuron weight vectors.
/// Layers whose activations are all splines carry no bias: the spline offset
/// b2 plays that role and the knots absorb input shifts. Layers with fixed
/// activations carry one bias per neuron.
struct DenseLayer {
  Mat W;
  std::optional<Vec> bias;
  std::vector<Activation> activations;  // one per row of W

  int out_dim() const { return W.rows; }
  int in_dim() const { return W.cols; }
};

DenseLayer make_layer(Mat w, std::optional<Vec> bias, std::vector<Activation> activations);

/// Same activation replicated across every neuron of the layer.
DenseLayer make_layer(Mat w, std::optional<Vec> bias, const Activation& shared);

struct Network {
  std::vector<DenseLayer> layers;

  std::vector<int> descriptor() const;  // (N0, ..., NL)
  int input_dim() const;
  int output_dim() const;
};

/// Checks dimension chaining, the bias rule, and per-activation validity.
void validate(const Network& net);

struct ForwardCache {
  Vec input;
  std::vector<Vec> pre;   // s_l = W_l z_{l-1} (+ bias)
  std::vector<Vec> post;  // z_l = sigma_l(s_l)
};

Vec forward(const Network& net, const Vec& x);
Vec forward(const Network& net, const Vec& x, ForwardCache& cache);

struct LayerGrad {
  Mat dW;
  std::optional<Vec> dbias;
  std::vector<SplineGrad> dspline;  // per neuron; empty on non-spline neurons
  Vec dslope;                       // per neuron; used by prelu only
};

struct Gradients {
  std::vector<LayerGrad> layers;
};

Gradients zero_gradients(const Network& net);
void accumulate(Gradients& into, const Gradients& g, double scale = 1.0);

/// Reverse-mode gradients of a scalar loss with respect to every trainable
/// parameter, given dL/dy at the output. Spline and baseline slopes at kinks
/// use the right derivative. The cache must come from forward on this net.
Gradients backward(const Network& net, const ForwardCache& cache, const Vec& dl_dy);

/// Binary cross-entropy, with yhat clamped to [1e-12, 1 - 1e-12].
double bce_loss(int label, double yhat);
/// d bce_loss / d yhat under the same clamping.
double bce_grad(int label, double yhat);

/// Full training objective: sum of BCE terms, plus mu_l * ||W_l||_F^2 per
/// layer, plus lambda_l times the outer-norm aggregation of the per-neuron
/// BV2 norms (fixed activations enter through their closed forms).
double regularized_cost(const Network& net, const Dataset& ds, const std::vector<double>& mu,
                        const std::vector<double>& lambda, OuterNorm outer);
double regularized_cost(const Network& net, const Dataset& ds, double mu, double lambda,
                        OuterNorm outer);

/// Subgradient of the regularization terms alone, shaped like backward's
/// output so the two can be accumulated.
Gradients regularization_gradient(const Network& net, const std::vector<double>& mu,
                                  const std::vector<double>& lambda, OuterNorm outer);

/// Parameters that represent the learned function: every weight entry, every
/// bias entry, plus per activation: nonzero spline coefficients and the two
/// affine terms, or the prelu slope.
long param_count(const Network& net);

/// Total count of nonzero spline ReLU coefficients.
long nonzero_coefficients(const Network& net);

/// Copy of net with spline coefficients zeroed greedily in ascending |a|
/// order, re-evaluating the training error rate after each removal; a
/// removal that would push the cumulative relative increase past rel_budget
/// is rolled back.
Network sparsify(const Network& net, const Dataset& train_set, double rel_budget = 0.01);

/// Flat views over the trainable parameters in a fixed order: per layer, W
/// entries row-major, then bias entries, then per neuron either the spline
/// coefficients followed by b1 and b2, or the prelu slope. flatten_gradients
/// emits the matching order.
std::vector<double*> parameter_pointers(Network& net);
std::vector<double> flatten_parameters(const Network& net);
std::vector<double> flatten_gradients(const Network& net, const Gradients& g);
void assign_parameters(Network& net, const std::vector<double>& flat);

}  // namespace deepspline
