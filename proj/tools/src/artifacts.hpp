#pragma once

#include <string>

#include "deepspline/lipschitz.hpp"
#include "deepspline/network.hpp"
#include "deepspline/optim.hpp"
#include "run_config.hpp"

namespace deepspline::cli {

/// RNG stream ids derived from the run seed. Sweep rows shift the model
/// streams by kRowStride * (row + 1) so every row owns independent streams
/// while all rows share the same train and test data.
struct Streams {
  static constexpr std::uint64_t kTrainData = 0;
  static constexpr std::uint64_t kTestData = 1;
  static constexpr std::uint64_t kWeightInit = 2;
  static constexpr std::uint64_t kTrainLoop = 3;
  static constexpr std::uint64_t kEmpirical = 4;
  static constexpr std::uint64_t kRowStride = 16;
};

struct RunArtifacts {
  Network model;
  TrainHistory history;
  double resolved_lambda = 0.0;
  double train_error = 0.0;  // percent
  double test_error = 0.0;   // percent
  long params = 0;
  long nnz = 0;
  double bound_general_p1 = 0.0;
  double bound_general_p2 = 0.0;
  double bound_general_pinf = 0.0;
  double bound_euclidean_l1 = 0.0;
  double bound_euclidean_l2 = 0.0;
  double empirical_lower = 0.0;
  double wall_clock_sec = 0.0;
};

/// Builds the network, generates the circle data, trains, sparsifies and
/// certifies. row >= 0 selects per-row model streams for sweeps;
/// with_empirical controls the 10^4-pair sampling pass.
RunArtifacts run_training(const RunConfig& cfg, long row = -1, bool with_empirical = true);

std::string report_json(const RunConfig& cfg, const RunArtifacts& art);

std::string format_double(double v);
std::string descriptor_label(const std::vector<int>& descriptor);  // e.g. 2x10x1

void write_text_file(const std::string& path, const std::string& body);

}  // namespace deepspline::cli
