#include "deepspline/lipschitz.hpp"

#include <cmath>
#include <stdexcept>

namespace deepspline {
namespace {

void check_exponent(double p) {
  if (std::isnan(p) || p < 1.0) throw std::invalid_argument("norm exponent must be in [1, inf]");
}

double conjugate_exponent(double p) {
  if (p == 1.0) return kInf;
  if (p == kInf) return 1.0;
  return p / (p - 1.0);
}

/// (sum v_i^p)^(1/p) over nonnegative entries, factoring out the max so that
/// large p stays stable; p = inf is the max itself.
double power_mean(const std::vector<double>& values, double p) {
  double vmax = 0.0;
  for (double v : values) vmax = std::max(vmax, v);
  if (vmax == 0.0 || p == kInf) return vmax;
  double acc = 0.0;
  for (double v : values) acc += std::pow(v / vmax, p);
  return vmax * std::pow(acc, 1.0 / p);
}

double product(const std::vector<double>& values, std::size_t count) {
  double acc = 1.0;
  for (std::size_t i = 0; i < count; ++i) acc *= values[i];
  return acc;
}

}  // namespace

Box Box::centered(int dim, double half_width) {
  Box b;
  b.lo.assign(static_cast<std::size_t>(dim), -half_width);
  b.hi.assign(static_cast<std::size_t>(dim), half_width);
  return b;
}

double mixed_norm(const Mat& w, double q) {
  check_exponent(q);
  double best = 0.0;
  for (int r = 0; r < w.rows; ++r) {
    std::vector<double> row(static_cast<std::size_t>(w.cols));
    for (int c = 0; c < w.cols; ++c) row[static_cast<std::size_t>(c)] = std::abs(w(r, c));
    best = std::max(best, power_mean(row, q));
  }
  return best;
}

double layer_activation_norm(const DenseLayer& layer, double p) {
  check_exponent(p);
  std::vector<double> norms(layer.activations.size());
  for (std::size_t n = 0; n < layer.activations.size(); ++n)
    norms[n] = activation_bv2_norm(layer.activations[n]);
  return power_mean(norms, p);
}

BoundReport bound_general(const Network& net, double p, bool include_final_activation) {
  check_exponent(p);
  BoundReport report;
  report.p = p;
  report.q = conjugate_exponent(p);
  report.euclidean = false;
  report.includes_final_activation = include_final_activation;
  for (const DenseLayer& layer : net.layers) {
    report.weight_norms.push_back(mixed_norm(layer.W, report.q));
    report.activation_norms.push_back(layer_activation_norm(layer, p));
  }
  const std::size_t act_count =
      include_final_activation ? net.layers.size() : net.layers.size() - 1;
  report.bound = product(report.weight_norms, report.weight_norms.size()) *
                 product(report.activation_norms, act_count);
  return report;
}

BoundReport bound_euclidean(const Network& net, OuterNorm outer, bool include_final_activation) {
  BoundReport report;
  report.p = outer == OuterNorm::l1 ? 1.0 : 2.0;
  report.q = 2.0;
  report.euclidean = true;
  report.outer = outer;
  report.includes_final_activation = include_final_activation;
  for (const DenseLayer& layer : net.layers) {
    report.weight_norms.push_back(std::sqrt(frobenius_sq(layer.W)));
    report.activation_norms.push_back(layer_activation_norm(layer, report.p));
  }
  const std::size_t act_count =
      include_final_activation ? net.layers.size() : net.layers.size() - 1;
  report.bound = product(report.weight_norms, report.weight_norms.size()) *
                 product(report.activation_norms, act_count);
  return report;
}

double empirical_lipschitz(const Network& net, int n_pairs, Rng& rng, const Box& box,
                           bool include_final_activation) {
  if (n_pairs < 1) throw std::invalid_argument("empirical_lipschitz: need at least one pair");
  const std::size_t dim = box.lo.size();
  if (box.hi.size() != dim || static_cast<int>(dim) != net.input_dim())
    throw std::invalid_argument("empirical_lipschitz: box does not match input dimension");

  auto sample_point = [&]() {
    Vec x(dim);
    for (std::size_t d = 0; d < dim; ++d) x[d] = rng.next_uniform(box.lo[d], box.hi[d]);
    return x;
  };
  auto eval_map = [&](const Vec& x) {
    ForwardCache cache;
    forward(net, x, cache);
    return include_final_activation ? cache.post.back() : cache.pre.back();
  };

  double best = 0.0;
  for (int i = 0; i < n_pairs; ++i) {
    Vec x1 = sample_point();
    Vec x2;
    if (i % 2 == 0) {
      x2 = sample_point();
    } else {
      // Close pair: x2 = x1 + delta with ||delta||_2 = 1e-4.
      Vec delta(dim);
      double norm = 0.0;
      while (norm == 0.0) {
        for (std::size_t d = 0; d < dim; ++d) delta[d] = rng.next_gaussian();
        norm = norm2(delta);
      }
      x2 = x1;
      for (std::size_t d = 0; d < dim; ++d) x2[d] += 1e-4 * delta[d] / norm;
    }
    Vec diff_in(dim);
    for (std::size_t d = 0; d < dim; ++d) diff_in[d] = x1[d] - x2[d];
    const double denom = norm2(diff_in);
    if (denom == 0.0) continue;
    const Vec y1 = eval_map(x1);
    const Vec y2 = eval_map(x2);
    Vec diff_out(y1.size());
    for (std::size_t d = 0; d < y1.size(); ++d) diff_out[d] = y1[d] - y2[d];
    best = std::max(best, norm2(diff_out) / denom);
  }
  return best;
}

std::vector<double> balance_ratios(const Network& net, const std::vector<double>& mu,
                                 const std::vector<double>& lambda) {
  const std::size_t depth = net.layers.size();
  if (depth < 2) throw std::invalid_argument("balance_ratios: need at least two layers");
  if (mu.size() != depth || lambda.size() != depth)
    throw std::invalid_argument("balance_ratios: need one mu and one lambda per layer");

  std::vector<double> ratios(depth - 1);
  for (std::size_t l = 0; l + 1 < depth; ++l) {
    const double numer = lambda[l] * layer_activation_norm(net.layers[l], 1.0);
    const double denom = 2.0 * mu[l + 1] * frobenius_sq(net.layers[l + 1].W);
    ratios[l] = denom == 0.0 ? kInf : numer / denom;
  }
  return ratios;
}

}  // namespace deepspline
