#include <doctest.h>

#include <cmath>

#include "deepspline/lipschitz.hpp"
#include "deepspline/optim.hpp"
#include "support/random_net.hpp"

using namespace deepspline;
namespace dt = deepspline::testing;

namespace {

Activation identity_spline() {
  return Activation::make_spline(DeepSpline{{0.0}, {0.0}, 1.0, 0.0});
}

Activation abs_activation() {
  return Activation::make_spline(DeepSpline{{0.0}, {2.0}, -1.0, 0.0});
}

Activation soft_activation() {
  return Activation::make_spline(DeepSpline{{-0.5, 0.5}, {-1.0, 1.0}, 1.0, 0.5});
}

Network abs_net(double weight = 1.0) {
  Network net;
  net.layers.push_back(make_layer(Mat::from_rows({{weight}}), std::nullopt, abs_activation()));
  return net;
}

}  // namespace

TEST_CASE("mixed matrix norms") {
  const Mat w = Mat::from_rows({{3.0, 4.0}, {1.0, 0.0}});
  CHECK(mixed_norm(w, 2.0) == doctest::Approx(5.0));
  CHECK(mixed_norm(w, 1.0) == doctest::Approx(7.0));
  CHECK(mixed_norm(w, kInf) == 4.0);
  CHECK_THROWS_AS(mixed_norm(w, 0.5), std::invalid_argument);
}

TEST_CASE("layer activation norms aggregate per-neuron BV2 norms") {
  const DenseLayer layer = make_layer(Mat::from_rows({{1.0}, {1.0}}), std::nullopt,
                                      std::vector<Activation>{abs_activation(), soft_activation()});
  CHECK(layer_activation_norm(layer, 1.0) == doctest::Approx(5.5));
  CHECK(layer_activation_norm(layer, 2.0) == doctest::Approx(std::sqrt(15.25)));
  CHECK(layer_activation_norm(layer, kInf) == doctest::Approx(3.0));

  const DenseLayer relu_layer =
      make_layer(Mat::from_rows({{1.0}}), Vec{0.0}, Activation::make_relu());
  for (double p : {1.0, 2.0, kInf}) CHECK(layer_activation_norm(relu_layer, p) == 2.0);
}

TEST_CASE("general product bound") {
  Network net = abs_net(2.0);
  CHECK(bound_general(net, 1.0).bound == doctest::Approx(6.0));  // q = inf

  Network chain;
  for (int l = 0; l < 3; ++l)
    chain.layers.push_back(make_layer(Mat::from_rows({{1.0}}), std::nullopt, identity_spline()));
  CHECK(bound_general(chain, 2.0).bound == 1.0);

  // Scaling one layer scales the bound by the same factor.
  const double base = bound_general(net, 2.0).bound;
  Network scaled = net;
  for (double& v : scaled.layers[0].W.data) v *= 2.0;
  CHECK(bound_general(scaled, 2.0).bound == 2.0 * base);
}

TEST_CASE("euclidean product bound and the outer-norm ordering") {
  Network net;
  net.layers.push_back(make_layer(Mat::from_rows({{3.0, 4.0}}), std::nullopt, abs_activation()));
  const BoundReport r = bound_euclidean(net, OuterNorm::l1);
  CHECK(r.bound == doctest::Approx(15.0));
  CHECK(r.weight_norms[0] == doctest::Approx(5.0));

  Rng rng(41, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const Network random = dt::random_net(rng);
    CHECK(bound_euclidean(random, OuterNorm::l2).bound <=
          bound_euclidean(random, OuterNorm::l1).bound * (1.0 + 1e-12));
  }

  // Single neuron, single row: Frobenius equals the row l2 norm.
  CHECK(bound_euclidean(net, OuterNorm::l1).bound ==
        doctest::Approx(bound_general(net, 2.0).bound));
}

TEST_CASE("excluding the final activation certifies the logit map") {
  Rng rng(43, 0);
  const Network net = make_spline_network({2, 3, 1}, 11, -1.0, 1.0, rng);
  const BoundReport with = bound_general(net, 2.0, true);
  const BoundReport without = bound_general(net, 2.0, false);
  const double sigmoid_norm = activation_bv2_norm(Activation::make_sigmoid());
  CHECK(with.bound == doctest::Approx(without.bound * sigmoid_norm));
  CHECK(without.includes_final_activation == false);
}

TEST_CASE("empirical estimate of known Lipschitz constants") {
  Rng rng(47, 0);
  const Box box = Box::centered(1, 1.0);

  // |x| has Lipschitz constant 1; the certified bound is 3.
  const Network net_abs = abs_net();
  const double est = empirical_lipschitz(net_abs, 4000, rng, box);
  CHECK(est == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(bound_general(net_abs, 2.0).bound == doctest::Approx(3.0));
  CHECK(est <= bound_general(net_abs, 2.0).bound);

  // f(x) = 2x: the close-pair ratio is exact.
  Network linear;
  linear.layers.push_back(make_layer(Mat::from_rows({{2.0}}), std::nullopt, identity_spline()));
  CHECK(empirical_lipschitz(linear, 100, rng, box) == 2.0);
}

TEST_CASE("the empirical estimator can target the logit map") {
  Network net;
  net.layers.push_back(
      make_layer(Mat::from_rows({{2.0}}), Vec{0.0}, Activation::make_sigmoid()));
  Rng rng(48, 0);
  const Box box = Box::centered(1, 1.0);
  // Logit map is x -> 2x; the full map's slope tops out at 2 * sigma'(0) = 0.5.
  CHECK(empirical_lipschitz(net, 200, rng, box, false) == 2.0);
  const double full = empirical_lipschitz(net, 4000, rng, box, true);
  CHECK(full == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(full <= bound_general(net, 2.0, false).bound);
}

TEST_CASE("bounds dominate the empirical estimate on random nets") {
  Rng rng(53, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const Network net = dt::random_net(rng);
    Rng sample_rng(54, static_cast<std::uint64_t>(trial));
    const Box box = Box::centered(net.input_dim(), 1.0);
    const double est = empirical_lipschitz(net, 1000, sample_rng, box);
    for (double p : {1.0, 2.0, kInf}) CHECK(est <= bound_general(net, p).bound);
    CHECK(est <= bound_euclidean(net, OuterNorm::l1).bound);
    CHECK(est <= bound_euclidean(net, OuterNorm::l2).bound);
  }
}

TEST_CASE("appending a norm-1 identity layer keeps the general bound") {
  Network net = abs_net(1.5);
  const double before = bound_general(net, 2.0).bound;
  net.layers.push_back(make_layer(Mat::from_rows({{1.0}}), std::nullopt, identity_spline()));
  CHECK(bound_general(net, 2.0).bound == before);
}

TEST_CASE("balance ratios at a constructed equilibrium") {
  // lambda_1 ||sigma_1|| = 2 mu_2 ||W_2||_F^2 by construction: 3 = 2 * 1.5 * 1.
  Network net;
  net.layers.push_back(make_layer(Mat::from_rows({{1.0}}), std::nullopt, abs_activation()));
  net.layers.push_back(
      make_layer(Mat::from_rows({{1.0}}), Vec{0.0}, Activation::make_sigmoid()));
  const auto ratios = balance_ratios(net, {0.0, 1.5}, {1.0, 1.0});
  REQUIRE(ratios.size() == 1);
  CHECK(ratios[0] == 1.0);

  // Zero denominator reports +inf.
  Network degenerate = net;
  degenerate.layers[1].W(0, 0) = 0.0;
  CHECK(balance_ratios(degenerate, {0.0, 1.5}, {1.0, 1.0})[0] == kInf);

  CHECK_THROWS_AS(balance_ratios(abs_net(), {0.0}, {1.0}), std::invalid_argument);
}

TEST_CASE("auto lambda balances fresh abs/soft nets over many seeds") {
  // Harmonic mean of the per-seed ratios, i.e. the deterministic numerator
  // over the seed-averaged denominator.
  const double mu = 1e-4;
  for (int width : {1, 2, 5}) {
    const double lambda = auto_lambda(mu, width);
    double numer = 0.0;
    double denom_sum = 0.0;
    const int seeds = 100;
    for (int s = 0; s < seeds; ++s) {
      Rng rng(1000 + s, 0);
      const Network net =
          make_spline_network({2, 2 * width, 1}, 21, -1.0, 1.0, rng);
      const auto ratios = balance_ratios(net, {mu, mu}, {lambda, lambda});
      REQUIRE(ratios.size() == 1);
      numer = lambda * layer_activation_norm(net.layers[0], 1.0);
      denom_sum += 2.0 * mu * frobenius_sq(net.layers[1].W);
    }
    const double mean_ratio = numer / (denom_sum / seeds);
    CHECK(mean_ratio > 0.9);
    CHECK(mean_ratio < 1.1);
  }
}

TEST_CASE("balance ratios settle near 1 after a long full-batch run") {
  // Exact balance holds only at exact local minima; a long tame run should
  // land inside the diagnostic window [0.5, 2].
  Rng data_rng(90, 0);
  const Dataset ds = gen_circle(200, data_rng);
  TrainConfig cfg;
  cfg.batch_size = 200;  // full batch
  cfg.learning_rate = 1e-3;
  cfg.epochs = 12000;
  cfg.lambda = 1e-3;
  cfg.sparsify_budget = 0.0;
  Rng init(91, 0);
  Network net = make_spline_network({2, 2, 1}, 21, -6.0, 6.0, init);
  Rng loop(92, 0);
  const auto [out, hist] = train(std::move(net), ds, cfg, loop);
  const auto ratios = balance_ratios(out, {cfg.mu, cfg.mu}, {*cfg.lambda, *cfg.lambda});
  REQUIRE(ratios.size() == 1);
  CHECK(ratios[0] >= 0.5);
  CHECK(ratios[0] <= 2.0);
}

TEST_CASE("forward differences never exceed the certified bound") {
  Rng rng(59, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const Network net = dt::random_net(rng);
    const int dim = net.input_dim();
    for (double p : {1.0, 2.0, kInf}) {
      const double bound = bound_general(net, p).bound;
      for (int i = 0; i < 50; ++i) {
        Vec x1(static_cast<std::size_t>(dim)), x2(static_cast<std::size_t>(dim));
        for (int d = 0; d < dim; ++d) {
          x1[static_cast<std::size_t>(d)] = rng.next_uniform(-1.0, 1.0);
          x2[static_cast<std::size_t>(d)] = rng.next_uniform(-1.0, 1.0);
        }
        const Vec y1 = forward(net, x1);
        const Vec y2 = forward(net, x2);
        auto lp = [&](const Vec& a, const Vec& b) {
          double acc = 0.0;
          for (std::size_t d = 0; d < a.size(); ++d) {
            const double diff = std::abs(a[d] - b[d]);
            if (p == kInf)
              acc = std::max(acc, diff);
            else
              acc += std::pow(diff, p);
          }
          return p == kInf ? acc : std::pow(acc, 1.0 / p);
        };
        CHECK(lp(y1, y2) <= bound * lp(x1, x2) * (1.0 + 1e-12) + 1e-12);
      }
    }
  }
}
