#include "deepspline/optim.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "deepspline/lipschitz.hpp"

namespace deepspline {
namespace {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void fisher_yates(std::vector<std::size_t>& order, Rng& rng) {
  for (std::size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[rng.next_below(i)]);
}

}  // namespace

void validate(const TrainConfig& cfg) {
  if (!(cfg.learning_rate > 0.0)) throw std::invalid_argument("TrainConfig: learning_rate must be positive");
  if (cfg.epochs < 0) throw std::invalid_argument("TrainConfig: epochs must be nonnegative");
  if (cfg.batch_size < 1) throw std::invalid_argument("TrainConfig: batch_size must be at least 1");
  if (!(cfg.mu >= 0.0)) throw std::invalid_argument("TrainConfig: mu must be nonnegative");
  if (cfg.lambda && !(*cfg.lambda >= 0.0))
    throw std::invalid_argument("TrainConfig: lambda must be nonnegative");
  if (cfg.knots < 1) throw std::invalid_argument("TrainConfig: need at least one knot");
  if (!(cfg.knot_lo < cfg.knot_hi)) throw std::invalid_argument("TrainConfig: bad knot range");
  if (!(cfg.sparsify_budget >= 0.0))
    throw std::invalid_argument("TrainConfig: sparsify_budget must be nonnegative");
}

std::string TrainHistory::to_csv() const {
  std::string out = "epoch,objective,loss,error_rate,lipschitz_bound,nnz_coeffs\n";
  for (std::size_t e = 0; e < epochs.size(); ++e) {
    const EpochStats& s = epochs[e];
    out += std::to_string(e + 1);
    out += ',';
    out += format_double(s.objective);
    out += ',';
    out += format_double(s.data_loss);
    out += ',';
    out += format_double(s.error_rate);
    out += ',';
    out += format_double(s.lipschitz_bound);
    out += ',';
    out += std::to_string(s.nnz_coeffs);
    out += '\n';
  }
  return out;
}

Mat xavier_init(int fan_in, int fan_out, Rng& rng) {
  if (fan_in < 1 || fan_out < 1) throw std::invalid_argument("xavier_init: fans must be positive");
  const double stddev = std::sqrt(2.0 / (fan_in + fan_out));
  Mat w(fan_out, fan_in);
  for (double& v : w.data) v = stddev * rng.next_gaussian();
  return w;
}

double auto_lambda(double mu, int width) {
  if (!(mu >= 0.0)) throw std::invalid_argument("auto_lambda: mu must be nonnegative");
  if (width < 1) throw std::invalid_argument("auto_lambda: width must be at least 1");
  return 16.0 * mu / (11.0 * (2.0 * width + 1.0));
}

double resolve_lambda(const TrainConfig& cfg, const Network& net) {
  if (cfg.lambda) return *cfg.lambda;
  const std::vector<int> d = net.descriptor();
  if (d.size() < 2 || d[1] % 2 != 0 || d[1] < 2)
    throw std::invalid_argument("auto lambda needs an even first hidden width");
  return auto_lambda(cfg.mu, d[1] / 2);
}

void sgd_step(std::vector<double>& params, const std::vector<double>& grads, double lr) {
  if (params.size() != grads.size()) throw std::invalid_argument("sgd_step: size mismatch");
  for (std::size_t i = 0; i < params.size(); ++i) params[i] -= lr * grads[i];
}

void adam_step(std::vector<double>& params, const std::vector<double>& grads, AdamState& state,
               double lr) {
  if (params.size() != grads.size()) throw std::invalid_argument("adam_step: size mismatch");
  if (state.m.empty()) {
    state.m.assign(params.size(), 0.0);
    state.v.assign(params.size(), 0.0);
  }
  if (state.m.size() != params.size()) throw std::invalid_argument("adam_step: stale state");
  ++state.t;
  const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
  const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
  for (std::size_t i = 0; i < params.size(); ++i) {
    state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * grads[i];
    state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * grads[i] * grads[i];
    const double mhat = state.m[i] / c1;
    const double vhat = state.v[i] / c2;
    params[i] -= lr * mhat / (std::sqrt(vhat) + state.eps);
  }
}

Network make_spline_network(const std::vector<int>& descriptor, int knots, double knot_lo,
                            double knot_hi, Rng& rng) {
  if (descriptor.size() < 2) throw std::invalid_argument("descriptor needs at least two entries");
  const std::vector<double> grid = uniform_knots(knot_lo, knot_hi, knots);
  Network net;
  for (std::size_t l = 0; l + 1 < descriptor.size(); ++l) {
    const int fan_in = descriptor[l];
    const int fan_out = descriptor[l + 1];
    Mat w = xavier_init(fan_in, fan_out, rng);
    const bool last = l + 2 == descriptor.size();
    if (last) {
      net.layers.push_back(
          make_layer(std::move(w), Vec(static_cast<std::size_t>(fan_out), 0.0),
                     Activation::make_sigmoid()));
    } else {
      std::vector<Activation> acts;
      acts.reserve(static_cast<std::size_t>(fan_out));
      const int abs_count = fan_out - fan_out / 2;  // odd counts favour abs
      for (int n = 0; n < fan_out; ++n)
        acts.push_back(Activation::make_spline(n < abs_count ? init_abs(grid) : init_soft(grid)));
      net.layers.push_back(make_layer(std::move(w), std::nullopt, std::move(acts)));
    }
  }
  validate(net);
  return net;
}

Network make_baseline_network(const std::vector<int>& descriptor, ActivationKind kind, Rng& rng) {
  if (descriptor.size() < 2) throw std::invalid_argument("descriptor needs at least two entries");
  Activation hidden;
  switch (kind) {
    case ActivationKind::relu:
      hidden = Activation::make_relu();
      break;
    case ActivationKind::leaky_relu:
      hidden = Activation::make_leaky_relu();
      break;
    case ActivationKind::prelu:
      hidden = Activation::make_prelu();
      break;
    default:
      throw std::invalid_argument("baseline network: hidden kind must be relu, leaky_relu or prelu");
  }
  Network net;
  for (std::size_t l = 0; l + 1 < descriptor.size(); ++l) {
    const int fan_in = descriptor[l];
    const int fan_out = descriptor[l + 1];
    Mat w = xavier_init(fan_in, fan_out, rng);
    const bool last = l + 2 == descriptor.size();
    net.layers.push_back(make_layer(std::move(w), Vec(static_cast<std::size_t>(fan_out), 0.0),
                                    last ? Activation::make_sigmoid() : hidden));
  }
  validate(net);
  return net;
}

std::pair<Network, TrainHistory> train(Network net, const Dataset& train_set,
                                       const TrainConfig& cfg, Rng& rng) {
  validate(cfg);
  validate(net);
  if (train_set.size() == 0) throw std::invalid_argument("train: empty dataset");
  if (net.input_dim() != static_cast<int>(train_set.inputs.front().size()))
    throw std::invalid_argument("train: descriptor does not match data dimension");
  if (net.output_dim() != 1) throw std::invalid_argument("train: scalar output required");

  const double lambda = resolve_lambda(cfg, net);
  const std::vector<double> mus(net.layers.size(), cfg.mu);
  const std::vector<double> lambdas(net.layers.size(), lambda);
  const double sample_count = static_cast<double>(train_set.size());

  AdamState adam;
  TrainHistory history;
  history.epochs.reserve(static_cast<std::size_t>(cfg.epochs));
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    fisher_yates(order, rng);
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
      const double batch_n = static_cast<double>(stop - start);

      // Step direction: batch-mean data gradient plus the regularizer
      // subgradient at full strength, the usual mean-loss convention.
      Gradients batch = zero_gradients(net);
      for (std::size_t i = start; i < stop; ++i) {
        const std::size_t m = order[i];
        ForwardCache cache;
        const Vec y = forward(net, train_set.inputs[m], cache);
        const Vec dl_dy{bce_grad(train_set.labels[m], y[0])};
        accumulate(batch, backward(net, cache, dl_dy), 1.0 / batch_n);
      }
      accumulate(batch, regularization_gradient(net, mus, lambdas, cfg.outer_norm), 1.0);

      std::vector<double> params = flatten_parameters(net);
      const std::vector<double> grads = flatten_gradients(net, batch);
      if (cfg.optimizer == Optimizer::adam)
        adam_step(params, grads, adam, cfg.learning_rate);
      else
        sgd_step(params, grads, cfg.learning_rate);
      assign_parameters(net, params);
    }

    EpochStats stats{};
    stats.objective = regularized_cost(net, train_set, mus, lambdas, cfg.outer_norm);
    if (!std::isfinite(stats.objective))
      throw NumericalError("train: non-finite objective at epoch " + std::to_string(epoch + 1));
    double loss = 0.0;
    for (std::size_t m = 0; m < train_set.size(); ++m)
      loss += bce_loss(train_set.labels[m], forward(net, train_set.inputs[m])[0]);
    stats.data_loss = loss / sample_count;
    stats.error_rate = error_rate(net, train_set);
    stats.lipschitz_bound = bound_euclidean(net, OuterNorm::l1).bound;
    stats.nnz_coeffs = nonzero_coefficients(net);
    history.epochs.push_back(stats);
  }

  net = sparsify(net, train_set, cfg.sparsify_budget);
  return {std::move(net), std::move(history)};
}

}  // namespace deepspline
