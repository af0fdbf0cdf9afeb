#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "deepspline/network.hpp"
#include "deepspline/optim.hpp"

namespace deepspline::cli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One training run, fully described. Loaded from a JSON document where every
/// field has a default and unknown fields are rejected.
struct RunConfig {
  std::string activation = "spline";  // spline | relu | leaky_relu | prelu
  std::vector<int> descriptor = {2, 2, 1};
  std::string optimizer = "adam";  // adam | sgd
  double learning_rate = 1e-3;
  int epochs = 3000;
  int batch_size = 32;
  double mu = 1e-4;
  std::optional<double> lambda;  // unset: balance rule for splines, 0 for baselines
  int knots = 21;
  double knot_lo = -6.0;
  double knot_hi = 6.0;
  std::string outer_norm = "l1";  // l1 | l2
  std::uint64_t seed = 1;
  double sparsify_budget = 0.01;
  int train_size = 1000;
  int test_size = 10000;
  bool include_sigmoid_in_bound = true;
};

RunConfig config_from_json_text(const std::string& text);
RunConfig load_config(const std::string& path);

/// Resolved echo of the configuration, suitable for report.json.
std::string config_to_json(const RunConfig& cfg, int indent = 2);

/// Throws ConfigError if names, sizes or ranges are inconsistent.
void validate_config(const RunConfig& cfg);

TrainConfig to_train_config(const RunConfig& cfg);
OuterNorm outer_norm_from_name(const std::string& name);
ActivationKind baseline_kind(const std::string& name);

}  // namespace deepspline::cli
