#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "deepspline/data.hpp"
#include "deepspline/network.hpp"
#include "deepspline/rng.hpp"

namespace deepspline {

enum class Optimizer { sgd, adam };

/// Defaults reproduce the reference circle run. The knot grid spans the
/// pre-activation range rather than the input range: trained first-layer
/// weights reach norms near 2.5, and knots the pre-activations never cross
/// keep zero coefficients, which is what lets the sparsification pass trim
/// the spline down.
struct TrainConfig {
  Optimizer optimizer = Optimizer::adam;
  double learning_rate = 1e-3;
  int epochs = 3000;
  int batch_size = 32;
  double mu = 1e-4;
  std::optional<double> lambda;  // empty selects the balance-tuned value
  int knots = 21;                // K
  double knot_lo = -6.0;
  double knot_hi = 6.0;
  OuterNorm outer_norm = OuterNorm::l1;
  std::uint64_t seed = 1;
  double sparsify_budget = 0.01;
};

void validate(const TrainConfig& cfg);

struct EpochStats {
  double objective;        // full regularized cost over the training set
  double data_loss;        // mean BCE over the training set
  double error_rate;       // percent, training set
  double lipschitz_bound;  // euclidean bound, l1 outer, final activation included
  long nnz_coeffs;
};

struct TrainHistory {
  std::vector<EpochStats> epochs;

  /// header: epoch,objective,loss,error_rate,lipschitz_bound,nnz_coeffs
  std::string to_csv() const;
};

/// Thrown when the objective turns non-finite during training.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// fan_out x fan_in matrix of i.i.d. zero-mean Gaussians with variance
/// 2 / (fan_in + fan_out).
Mat xavier_init(int fan_in, int fan_out, Rng& rng);

/// lambda = 16 mu / (11 (2 width + 1)): the value that balances the spline
/// penalty of a freshly initialized (2, 2*width, 1) network against the
/// expected weight decay of its output layer.
double auto_lambda(double mu, int width);

/// Resolves cfg.lambda; the auto rule takes the width from the first hidden
/// layer, which must have an even neuron count.
double resolve_lambda(const TrainConfig& cfg, const Network& net);

struct AdamState {
  std::vector<double> m, v;
  long t = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

void sgd_step(std::vector<double>& params, const std::vector<double>& grads, double lr);
void adam_step(std::vector<double>& params, const std::vector<double>& grads, AdamState& state,
               double lr);

/// Fresh deep-spline network: Xavier weights, no hidden bias, half of each
/// hidden layer initialized to the absolute value and half to the soft
/// threshold (odd counts give the extra neuron to abs), sigmoid output with
/// a zero bias.
Network make_spline_network(const std::vector<int>& descriptor, int knots, double knot_lo,
                            double knot_hi, Rng& rng);

/// Fixed-activation baseline: Xavier weights, zero biases, the given hidden
/// kind, sigmoid output.
Network make_baseline_network(const std::vector<int>& descriptor, ActivationKind kind, Rng& rng);

/// Mini-batch first-order training of the regularized objective followed by
/// a sparsification pass. Each step combines the batch-mean data gradient
/// with the full regularizer subgradient (mean-loss convention, so mu and
/// lambda act at face value against a per-sample loss). Deterministic given
/// the same config and rng stream; throws NumericalError if the objective
/// turns non-finite.
std::pair<Network, TrainHistory> train(Network net, const Dataset& train_set,
                                       const TrainConfig& cfg, Rng& rng);

}  // namespace deepspline
