#include "artifacts.hpp"

#include <charconv>
#include <chrono>
#include <fstream>

#include <json.hpp>

#include "deepspline/data.hpp"

namespace deepspline::cli {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string descriptor_label(const std::vector<int>& descriptor) {
  std::string label;
  for (std::size_t i = 0; i < descriptor.size(); ++i) {
    if (i > 0) label += 'x';
    label += std::to_string(descriptor[i]);
  }
  return label;
}

void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << body;
}

RunArtifacts run_training(const RunConfig& cfg, long row, bool with_empirical) {
  validate_config(cfg);
  const auto started = std::chrono::steady_clock::now();

  Rng data_rng(cfg.seed, Streams::kTrainData);
  Rng test_rng(cfg.seed, Streams::kTestData);
  const std::uint64_t shift =
      row < 0 ? 0 : Streams::kRowStride * (static_cast<std::uint64_t>(row) + 1);
  Rng init_rng(cfg.seed, Streams::kWeightInit + shift);
  Rng loop_rng(cfg.seed, Streams::kTrainLoop + shift);

  const Dataset train_set = gen_circle(cfg.train_size, data_rng, "train");
  const Dataset test_set = gen_circle(cfg.test_size, test_rng, "test");

  Network net = cfg.activation == "spline"
                    ? make_spline_network(cfg.descriptor, cfg.knots, cfg.knot_lo, cfg.knot_hi,
                                          init_rng)
                    : make_baseline_network(cfg.descriptor, baseline_kind(cfg.activation),
                                            init_rng);
  const TrainConfig tc = to_train_config(cfg);

  RunArtifacts art;
  art.resolved_lambda = resolve_lambda(tc, net);
  auto [trained, history] = train(std::move(net), train_set, tc, loop_rng);
  art.model = std::move(trained);
  art.history = std::move(history);

  art.train_error = error_rate(art.model, train_set);
  art.test_error = error_rate(art.model, test_set);
  art.params = param_count(art.model);
  art.nnz = nonzero_coefficients(art.model);

  const bool sig = cfg.include_sigmoid_in_bound;
  art.bound_general_p1 = bound_general(art.model, 1.0, sig).bound;
  art.bound_general_p2 = bound_general(art.model, 2.0, sig).bound;
  art.bound_general_pinf = bound_general(art.model, kInf, sig).bound;
  art.bound_euclidean_l1 = bound_euclidean(art.model, OuterNorm::l1, sig).bound;
  art.bound_euclidean_l2 = bound_euclidean(art.model, OuterNorm::l2, sig).bound;

  if (with_empirical) {
    Rng emp_rng(cfg.seed, Streams::kEmpirical + shift);
    art.empirical_lower = empirical_lipschitz(art.model, 10000, emp_rng,
                                              Box::centered(art.model.input_dim(), 1.0));
  }

  art.wall_clock_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return art;
}

std::string report_json(const RunConfig& cfg, const RunArtifacts& art) {
  nlohmann::json j;
  j["config"] = nlohmann::json::parse(config_to_json(cfg));
  j["resolved_lambda"] = art.resolved_lambda;
  j["seed"] = cfg.seed;
  j["train_error_rate"] = art.train_error;
  j["test_error_rate"] = art.test_error;
  j["train_accuracy"] = 100.0 - art.train_error;
  j["test_accuracy"] = 100.0 - art.test_error;
  j["param_count"] = art.params;
  j["nnz_coeffs"] = art.nnz;
  j["bounds"]["include_sigmoid"] = cfg.include_sigmoid_in_bound;
  j["bounds"]["general"]["p1"] = art.bound_general_p1;
  j["bounds"]["general"]["p2"] = art.bound_general_p2;
  j["bounds"]["general"]["pinf"] = art.bound_general_pinf;
  j["bounds"]["euclidean"]["l1"] = art.bound_euclidean_l1;
  j["bounds"]["euclidean"]["l2"] = art.bound_euclidean_l2;
  j["empirical_lower"] = art.empirical_lower;
  j["wall_clock_sec"] = art.wall_clock_sec;
  return j.dump(2);
}

}  // namespace deepspline::cli
