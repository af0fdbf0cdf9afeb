#pragma once

#include <limits>
#include <vector>

#include "deepspline/network.hpp"
#include "deepspline/rng.hpp"

namespace deepspline {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Axis-aligned input box for empirical sampling.
struct Box {
  Vec lo, hi;
  static Box centered(int dim, double half_width);
};

/// Certified Lipschitz upper bound and its per-layer factors. The bound is
/// the product of one norm per linear layer and one norm per nonlinear
/// layer; empirical_lower and balance_ratios are filled in by callers that run
/// the corresponding diagnostics.
struct BoundReport {
  double p = 2.0;                    // topology exponent (general bound)
  double q = 2.0;                    // conjugate exponent of the mixed norms
  bool euclidean = false;            // built by bound_euclidean
  OuterNorm outer = OuterNorm::l1;   // outer norm of the euclidean variant
  bool includes_final_activation = true;
  std::vector<double> weight_norms;      // mixed (q,inf) norms, or Frobenius
  std::vector<double> activation_norms;  // per-layer (BV2, p) norms
  double bound = 0.0;                    // the product
  double empirical_lower = 0.0;
  std::vector<double> balance_ratios;
};

/// Max over rows of the lq row norm; q in [1, inf].
double mixed_norm(const Mat& w, double q);

/// lp aggregation of the per-neuron BV2 norms of one layer; p = inf is max.
double layer_activation_norm(const DenseLayer& layer, double p);

/// Product bound under the lp input/output topology: the mixed (q, inf)
/// weight norms times the (BV2, p) activation norms, with 1/p + 1/q = 1.
/// include_final_activation = false certifies the pre-activation (logit)
/// output of the last layer instead.
BoundReport bound_general(const Network& net, double p, bool include_final_activation = true);

/// Euclidean-topology bound: Frobenius weight norms times (BV2, 1) layer
/// norms, or the tighter (BV2, 2) variant when outer is l2.
BoundReport bound_euclidean(const Network& net, OuterNorm outer,
                            bool include_final_activation = true);

/// Empirical lower bound on the Lipschitz constant: the largest l2 slope
/// over sampled pairs, mixing far pairs (both uniform in the box) and close
/// pairs at distance 1e-4. include_final_activation = false samples the
/// pre-activation (logit) output instead, matching the bounds' flag.
double empirical_lipschitz(const Network& net, int n_pairs, Rng& rng, const Box& box,
                           bool include_final_activation = true);

/// Per-boundary ratios lambda_l ||sigma_l||_{BV2,1} / (2 mu_{l+1}
/// ||W_{l+1}||_F^2) for l = 1..L-1; a zero denominator reports +inf. At any
/// exact local minimum of the regularized objective every ratio is 1.
std::vector<double> balance_ratios(const Network& net, const std::vector<double>& mu,
                                 const std::vector<double>& lambda);

}  // namespace deepspline
