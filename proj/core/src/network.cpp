#include "deepspline/network.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>
#include <utility>

namespace deepspline {
namespace {

constexpr double kBceEps = 1e-12;

double clamp_prob(double yhat) { return std::min(std::max(yhat, kBceEps), 1.0 - kBceEps); }

void check_label(int label) {
  if (label != 0 && label != 1) throw std::invalid_argument("bce: label must be 0 or 1");
}

void check_reg_sizes(const Network& net, const std::vector<double>& mu,
                     const std::vector<double>& lambda) {
  if (mu.size() != net.layers.size() || lambda.size() != net.layers.size())
    throw std::invalid_argument("regularization: need one mu and one lambda per layer");
}

/// Per-neuron multipliers for the activation-norm term of one layer.
/// l1 outer: lambda for every neuron. l2 outer: lambda * norm_n / ||norms||_2
/// (zero when the whole layer has zero norm).
std::vector<double> outer_norm_factors(const DenseLayer& layer, double lambda, OuterNorm outer) {
  std::vector<double> factors(layer.activations.size(), lambda);
  if (outer == OuterNorm::l2) {
    double sq = 0.0;
    std::vector<double> norms(layer.activations.size());
    for (std::size_t n = 0; n < layer.activations.size(); ++n) {
      norms[n] = activation_bv2_norm(layer.activations[n]);
      sq += norms[n] * norms[n];
    }
    const double l2 = std::sqrt(sq);
    for (std::size_t n = 0; n < factors.size(); ++n)
      factors[n] = l2 > 0.0 ? lambda * norms[n] / l2 : 0.0;
  }
  return factors;
}

}  // namespace

DenseLayer make_layer(Mat w, std::optional<Vec> bias, std::vector<Activation> activations) {
  DenseLayer layer;
  layer.W = std::move(w);
  layer.bias = std::move(bias);
  layer.activations = std::move(activations);
  return layer;
}

DenseLayer make_layer(Mat w, std::optional<Vec> bias, const Activation& shared) {
  std::vector<Activation> acts(static_cast<std::size_t>(w.rows), shared);
  return make_layer(std::move(w), std::move(bias), std::move(acts));
}

std::vector<int> Network::descriptor() const {
  std::vector<int> d;
  d.reserve(layers.size() + 1);
  d.push_back(layers.empty() ? 0 : layers.front().in_dim());
  for (const auto& layer : layers) d.push_back(layer.out_dim());
  return d;
}

int Network::input_dim() const { return layers.empty() ? 0 : layers.front().in_dim(); }
int Network::output_dim() const { return layers.empty() ? 0 : layers.back().out_dim(); }

void validate(const Network& net) {
  if (net.layers.empty()) throw std::invalid_argument("Network: needs at least one layer");
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const DenseLayer& layer = net.layers[l];
    if (layer.W.rows <= 0 || layer.W.cols <= 0)
      throw std::invalid_argument("Network: empty weight matrix");
    if (l > 0 && layer.in_dim() != net.layers[l - 1].out_dim())
      throw std::invalid_argument("Network: layer dimensions do not chain");
    if (static_cast<int>(layer.activations.size()) != layer.out_dim())
      throw std::invalid_argument("Network: one activation per neuron required");
    const bool has_spline =
        std::any_of(layer.activations.begin(), layer.activations.end(),
                    [](const Activation& a) { return is_spline(a); });
    if (has_spline && layer.bias.has_value())
      throw std::invalid_argument("Network: spline layers must not carry a bias");
    if (!has_spline && !layer.bias.has_value())
      throw std::invalid_argument("Network: non-spline layers must carry a bias");
    if (layer.bias && static_cast<int>(layer.bias->size()) != layer.out_dim())
      throw std::invalid_argument("Network: bias length mismatch");
    for (double v : layer.W.data)
      if (!std::isfinite(v)) throw std::invalid_argument("Network: non-finite weight");
    if (layer.bias)
      for (double v : *layer.bias)
        if (!std::isfinite(v)) throw std::invalid_argument("Network: non-finite bias");
    for (const Activation& a : layer.activations) deepspline::validate(a);
  }
}

Vec forward(const Network& net, const Vec& x, ForwardCache& cache) {
  if (static_cast<int>(x.size()) != net.input_dim())
    throw std::invalid_argument("forward: input dimension mismatch");
  cache.input = x;
  cache.pre.assign(net.layers.size(), {});
  cache.post.assign(net.layers.size(), {});
  const Vec* z = &cache.input;
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const DenseLayer& layer = net.layers[l];
    Vec s = matvec(layer.W, *z);
    if (layer.bias)
      for (std::size_t n = 0; n < s.size(); ++n) s[n] += (*layer.bias)[n];
    Vec out(s.size());
    for (std::size_t n = 0; n < s.size(); ++n) out[n] = activate(layer.activations[n], s[n]);
    cache.pre[l] = std::move(s);
    cache.post[l] = std::move(out);
    z = &cache.post[l];
  }
  return cache.post.back();
}

Vec forward(const Network& net, const Vec& x) {
  ForwardCache cache;
  return forward(net, x, cache);
}

Gradients zero_gradients(const Network& net) {
  Gradients g;
  g.layers.resize(net.layers.size());
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const DenseLayer& layer = net.layers[l];
    LayerGrad& lg = g.layers[l];
    lg.dW = Mat(layer.W.rows, layer.W.cols);
    if (layer.bias) lg.dbias = Vec(layer.bias->size(), 0.0);
    lg.dspline.resize(layer.activations.size());
    lg.dslope.assign(layer.activations.size(), 0.0);
    for (std::size_t n = 0; n < layer.activations.size(); ++n)
      if (is_spline(layer.activations[n]))
        lg.dspline[n].coeffs.assign(layer.activations[n].spline.coeffs.size(), 0.0);
  }
  return g;
}

void accumulate(Gradients& into, const Gradients& g, double scale) {
  if (into.layers.size() != g.layers.size())
    throw std::invalid_argument("accumulate: gradient shapes differ");
  for (std::size_t l = 0; l < g.layers.size(); ++l) {
    LayerGrad& a = into.layers[l];
    const LayerGrad& b = g.layers[l];
    if (a.dW.data.size() != b.dW.data.size())
      throw std::invalid_argument("accumulate: gradient shapes differ");
    for (std::size_t i = 0; i < a.dW.data.size(); ++i) a.dW.data[i] += scale * b.dW.data[i];
    if (a.dbias)
      for (std::size_t i = 0; i < a.dbias->size(); ++i) (*a.dbias)[i] += scale * (*b.dbias)[i];
    for (std::size_t n = 0; n < a.dspline.size(); ++n) {
      for (std::size_t k = 0; k < a.dspline[n].coeffs.size(); ++k)
        a.dspline[n].coeffs[k] += scale * b.dspline[n].coeffs[k];
      a.dspline[n].b1 += scale * b.dspline[n].b1;
      a.dspline[n].b2 += scale * b.dspline[n].b2;
    }
    for (std::size_t n = 0; n < a.dslope.size(); ++n) a.dslope[n] += scale * b.dslope[n];
  }
}

Gradients backward(const Network& net, const ForwardCache& cache, const Vec& dl_dy) {
  const std::size_t depth = net.layers.size();
  if (cache.pre.size() != depth || cache.post.size() != depth ||
      static_cast<int>(cache.input.size()) != net.input_dim())
    throw std::invalid_argument("backward: cache does not match network");
  for (std::size_t l = 0; l < depth; ++l)
    if (static_cast<int>(cache.pre[l].size()) != net.layers[l].out_dim())
      throw std::invalid_argument("backward: cache does not match network");
  if (static_cast<int>(dl_dy.size()) != net.output_dim())
    throw std::invalid_argument("backward: output gradient dimension mismatch");

  Gradients g = zero_gradients(net);
  Vec delta = dl_dy;  // dL/dz_l, starting at the output
  for (std::size_t li = depth; li-- > 0;) {
    const DenseLayer& layer = net.layers[li];
    const Vec& s = cache.pre[li];
    const Vec& zprev = li > 0 ? cache.post[li - 1] : cache.input;
    LayerGrad& lg = g.layers[li];

    Vec ds(s.size());
    for (std::size_t n = 0; n < s.size(); ++n) {
      const Activation& act = layer.activations[n];
      const double dz = delta[n];
      if (is_spline(act)) {
        const DeepSpline& sp = act.spline;
        SplineGrad& dsp = lg.dspline[n];
        for (std::size_t k = 0; k < sp.knots.size(); ++k) {
          const double t = s[n] - sp.knots[k];
          if (t > 0.0) dsp.coeffs[k] += dz * t;
        }
        dsp.b1 += dz * s[n];
        dsp.b2 += dz;
      } else if (act.kind == ActivationKind::prelu && s[n] < 0.0) {
        lg.dslope[n] += dz * s[n];
      }
      ds[n] = dz * activation_derivative(act, s[n]);
    }

    for (int r = 0; r < layer.W.rows; ++r)
      for (int c = 0; c < layer.W.cols; ++c) lg.dW(r, c) += ds[r] * zprev[c];
    if (lg.dbias)
      for (std::size_t n = 0; n < ds.size(); ++n) (*lg.dbias)[n] += ds[n];
    if (li > 0) delta = matvec_transpose(layer.W, ds);
  }
  return g;
}

double bce_loss(int label, double yhat) {
  check_label(label);
  const double p = clamp_prob(yhat);
  return label == 1 ? -std::log(p) : -std::log(1.0 - p);
}

double bce_grad(int label, double yhat) {
  check_label(label);
  const double p = clamp_prob(yhat);
  return label == 1 ? -1.0 / p : 1.0 / (1.0 - p);
}

double regularized_cost(const Network& net, const Dataset& ds, const std::vector<double>& mu,
                        const std::vector<double>& lambda, OuterNorm outer) {
  check_reg_sizes(net, mu, lambda);
  if (ds.size() > 0 && net.output_dim() != 1)
    throw std::invalid_argument("regularized_cost: scalar output required");

  double cost = 0.0;
  for (std::size_t m = 0; m < ds.size(); ++m)
    cost += bce_loss(ds.labels[m], forward(net, ds.inputs[m])[0]);

  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const DenseLayer& layer = net.layers[l];
    cost += mu[l] * frobenius_sq(layer.W);
    double layer_term = 0.0;
    for (const Activation& a : layer.activations) {
      const double norm = activation_bv2_norm(a);
      layer_term += outer == OuterNorm::l1 ? norm : norm * norm;
    }
    if (outer == OuterNorm::l2) layer_term = std::sqrt(layer_term);
    cost += lambda[l] * layer_term;
  }
  return cost;
}

double regularized_cost(const Network& net, const Dataset& ds, double mu, double lambda,
                        OuterNorm outer) {
  const std::vector<double> mus(net.layers.size(), mu);
  const std::vector<double> lambdas(net.layers.size(), lambda);
  return regularized_cost(net, ds, mus, lambdas, outer);
}

Gradients regularization_gradient(const Network& net, const std::vector<double>& mu,
                                  const std::vector<double>& lambda, OuterNorm outer) {
  check_reg_sizes(net, mu, lambda);
  Gradients g = zero_gradients(net);
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const DenseLayer& layer = net.layers[l];
    LayerGrad& lg = g.layers[l];
    for (std::size_t i = 0; i < layer.W.data.size(); ++i)
      lg.dW.data[i] = 2.0 * mu[l] * layer.W.data[i];

    const std::vector<double> factors = outer_norm_factors(layer, lambda[l], outer);
    for (std::size_t n = 0; n < layer.activations.size(); ++n) {
      const Activation& a = layer.activations[n];
      if (is_spline(a)) {
        const SplineGrad sub = bv2_subgradient(a.spline);
        for (std::size_t k = 0; k < sub.coeffs.size(); ++k)
          lg.dspline[n].coeffs[k] = factors[n] * sub.coeffs[k];
        lg.dspline[n].b1 = factors[n] * sub.b1;
        lg.dspline[n].b2 = factors[n] * sub.b2;
      } else if (a.kind == ActivationKind::prelu) {
        // d(|1 - slope| + 1)/d slope, with sign(0) = 0.
        const double d = a.slope > 1.0 ? 1.0 : (a.slope < 1.0 ? -1.0 : 0.0);
        lg.dslope[n] = factors[n] * d;
      }
    }
  }
  return g;
}

long param_count(const Network& net) {
  long total = 0;
  for (const DenseLayer& layer : net.layers) {
    total += static_cast<long>(layer.W.rows) * layer.W.cols;
    if (layer.bias) total += static_cast<long>(layer.bias->size());
    for (const Activation& a : layer.activations) {
      if (is_spline(a)) {
        for (double c : a.spline.coeffs)
          if (c != 0.0) ++total;
        total += 2;  // b1, b2
      } else if (a.kind == ActivationKind::prelu) {
        total += 1;  // learnable slope
      }
    }
  }
  return total;
}

long nonzero_coefficients(const Network& net) {
  long total = 0;
  for (const DenseLayer& layer : net.layers)
    for (const Activation& a : layer.activations)
      if (is_spline(a))
        for (double c : a.spline.coeffs)
          if (c != 0.0) ++total;
  return total;
}

Network sparsify(const Network& net, const Dataset& train_set, double rel_budget) {
  if (train_set.size() == 0) throw std::invalid_argument("sparsify: empty training set");
  if (rel_budget < 0.0) throw std::invalid_argument("sparsify: negative budget");

  Network out = net;
  const double base = error_rate(out, train_set);
  const double limit = base * (1.0 + rel_budget);

  struct Candidate {
    double magnitude;
    std::size_t layer, neuron, knot;
  };
  std::vector<Candidate> candidates;
  for (std::size_t l = 0; l < out.layers.size(); ++l)
    for (std::size_t n = 0; n < out.layers[l].activations.size(); ++n)
      if (is_spline(out.layers[l].activations[n])) {
        const auto& coeffs = out.layers[l].activations[n].spline.coeffs;
        for (std::size_t k = 0; k < coeffs.size(); ++k)
          if (coeffs[k] != 0.0) candidates.push_back({std::abs(coeffs[k]), l, n, k});
      }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(a.magnitude, a.layer, a.neuron, a.knot) <
           std::tie(b.magnitude, b.layer, b.neuron, b.knot);
  });

  // Candidates whose removal would push the cumulative error past the budget
  // are restored and the scan moves on; impact is not monotone in |a|.
  for (const Candidate& c : candidates) {
    double& coeff = out.layers[c.layer].activations[c.neuron].spline.coeffs[c.knot];
    const double saved = coeff;
    coeff = 0.0;
    if (error_rate(out, train_set) > limit) coeff = saved;
  }
  return out;
}

std::vector<double*> parameter_pointers(Network& net) {
  std::vector<double*> params;
  for (DenseLayer& layer : net.layers) {
    for (double& v : layer.W.data) params.push_back(&v);
    if (layer.bias)
      for (double& v : *layer.bias) params.push_back(&v);
    for (Activation& a : layer.activations) {
      if (is_spline(a)) {
        for (double& v : a.spline.coeffs) params.push_back(&v);
        params.push_back(&a.spline.b1);
        params.push_back(&a.spline.b2);
      } else if (a.kind == ActivationKind::prelu) {
        params.push_back(&a.slope);
      }
    }
  }
  return params;
}

std::vector<double> flatten_parameters(const Network& net) {
  std::vector<double*> ptrs = parameter_pointers(const_cast<Network&>(net));
  std::vector<double> flat(ptrs.size());
  for (std::size_t i = 0; i < ptrs.size(); ++i) flat[i] = *ptrs[i];
  return flat;
}

std::vector<double> flatten_gradients(const Network& net, const Gradients& g) {
  if (g.layers.size() != net.layers.size())
    throw std::invalid_argument("flatten_gradients: gradient shapes differ");
  std::vector<double> flat;
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const DenseLayer& layer = net.layers[l];
    const LayerGrad& lg = g.layers[l];
    flat.insert(flat.end(), lg.dW.data.begin(), lg.dW.data.end());
    if (layer.bias) flat.insert(flat.end(), lg.dbias->begin(), lg.dbias->end());
    for (std::size_t n = 0; n < layer.activations.size(); ++n) {
      const Activation& a = layer.activations[n];
      if (is_spline(a)) {
        const SplineGrad& dsp = lg.dspline[n];
        flat.insert(flat.end(), dsp.coeffs.begin(), dsp.coeffs.end());
        flat.push_back(dsp.b1);
        flat.push_back(dsp.b2);
      } else if (a.kind == ActivationKind::prelu) {
        flat.push_back(lg.dslope[n]);
      }
    }
  }
  return flat;
}

void assign_parameters(Network& net, const std::vector<double>& flat) {
  std::vector<double*> ptrs = parameter_pointers(net);
  if (ptrs.size() != flat.size())
    throw std::invalid_argument("assign_parameters: size mismatch");
  for (std::size_t i = 0; i < ptrs.size(); ++i) *ptrs[i] = flat[i];
}

}  // namespace deepspline
