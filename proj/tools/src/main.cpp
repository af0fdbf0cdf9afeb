#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "artifacts.hpp"
#include "deepspline/data.hpp"
#include "deepspline/lipschitz.hpp"
#include "deepspline/model_io.hpp"
#include "run_config.hpp"

namespace fs = std::filesystem;
using namespace deepspline;
using namespace deepspline::cli;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

double parse_topology_exponent(const std::string& p) {
  if (p == "1") return 1.0;
  if (p == "2") return 2.0;
  if (p == "inf") return kInf;
  throw ConfigError("certify: --p must be 1, 2 or inf");
}

int cmd_train(const std::string& config_path, const std::string& out_dir,
              const std::optional<std::uint64_t>& seed) {
  RunConfig cfg = load_config(config_path);
  if (seed) cfg.seed = *seed;
  fs::create_directories(out_dir);

  const RunArtifacts art = run_training(cfg);
  save_model(art.model, (fs::path(out_dir) / "model.json").string());
  write_text_file((fs::path(out_dir) / "history.csv").string(), art.history.to_csv());
  write_text_file((fs::path(out_dir) / "report.json").string(), report_json(cfg, art) + "\n");

  std::printf("trained %s %s: train error %.2f%%, test error %.2f%%, %ld params, "
              "euclidean bound %.4g (%.1fs)\n",
              cfg.activation.c_str(), descriptor_label(cfg.descriptor).c_str(), art.train_error,
              art.test_error, art.params, art.bound_euclidean_l1, art.wall_clock_sec);
  std::printf("artifacts written to %s (model.json, history.csv, report.json)\n",
              out_dir.c_str());
  return kExitOk;
}

int cmd_certify(const std::string& model_path, const std::string& p_str,
                const std::string& outer_str, bool include_sigmoid, std::uint64_t seed,
                const std::string& out_path, const std::optional<double>& mu,
                const std::optional<double>& lambda) {
  const Network net = load_model(model_path);
  const double p = parse_topology_exponent(p_str);
  const OuterNorm outer = outer_norm_from_name(outer_str);

  const BoundReport general = bound_general(net, p, include_sigmoid);
  const BoundReport euclidean = bound_euclidean(net, outer, include_sigmoid);

  Rng rng(seed, Streams::kEmpirical);
  const double empirical = empirical_lipschitz(net, 10000, rng,
                                               Box::centered(net.input_dim(), 1.0),
                                               include_sigmoid);

  nlohmann::json j;
  j["model"] = model_path;
  j["p"] = p_str;
  j["q"] = general.q == kInf ? nlohmann::json("inf") : nlohmann::json(general.q);
  j["outer"] = outer_str;
  j["include_sigmoid"] = include_sigmoid;
  j["mixed_weight_norms"] = general.weight_norms;
  j["activation_norms_p"] = general.activation_norms;
  j["frobenius_weight_norms"] = euclidean.weight_norms;
  j["activation_norms_outer"] = euclidean.activation_norms;
  j["bound_general"] = general.bound;
  j["bound_euclidean"] = euclidean.bound;
  j["empirical_lower"] = empirical;
  if (mu && lambda) {
    const std::vector<double> mus(net.layers.size(), *mu);
    const std::vector<double> lambdas(net.layers.size(), *lambda);
    j["balance_ratios"] = balance_ratios(net, mus, lambdas);
  }
  const bool dominance_ok = empirical <= general.bound && empirical <= euclidean.bound;
  j["dominance_ok"] = dominance_ok;

  const std::string text = j.dump(2);
  std::cout << text << '\n';
  if (!out_path.empty()) write_text_file(out_path, text + "\n");

  if (!dominance_ok) {
    std::cerr << "certify: empirical estimate exceeds a certified bound; "
                 "this indicates an implementation bug\n";
    return kExitNumerical;
  }
  return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& param,
              const std::vector<double>& values, const std::string& out_dir,
              const std::optional<std::uint64_t>& seed) {
  if (param != "lambda" && param != "K") throw ConfigError("sweep: --param must be lambda or K");
  if (values.size() < 2) throw ConfigError("sweep: need at least two --values");

  RunConfig base = load_config(config_path);
  if (seed) base.seed = *seed;

  std::vector<RunConfig> rows;
  for (double v : values) {
    RunConfig cfg = base;
    if (param == "lambda") {
      if (!(v >= 0.0)) throw ConfigError("sweep: lambda values must be nonnegative");
      cfg.lambda = v;
    } else {
      const int k = static_cast<int>(v);
      if (k < 1 || static_cast<double>(k) != v)
        throw ConfigError("sweep: K values must be positive integers");
      cfg.knots = k;
    }
    validate_config(cfg);
    rows.push_back(std::move(cfg));
  }

  // Rows are independent; each owns streams derived from (seed, row).
  std::vector<std::future<RunArtifacts>> futures;
  futures.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    futures.push_back(std::async(std::launch::async, [&rows, r] {
      return run_training(rows[r], static_cast<long>(r), false);
    }));

  std::string csv = "value,test_error,bound,nnz_coeffs,param_count\n";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const RunArtifacts art = futures[r].get();
    csv += format_double(values[r]);
    csv += ',';
    csv += format_double(art.test_error);
    csv += ',';
    csv += format_double(art.bound_euclidean_l1);
    csv += ',';
    csv += std::to_string(art.nnz);
    csv += ',';
    csv += std::to_string(art.params);
    csv += '\n';
  }

  fs::create_directories(out_dir);
  const std::string path = (fs::path(out_dir) / "sweep.csv").string();
  write_text_file(path, csv);
  std::cout << csv;
  std::printf("sweep over %s written to %s\n", param.c_str(), path.c_str());
  return kExitOk;
}

int cmd_compare(const std::string& out_dir, const std::optional<std::uint64_t>& seed,
                const std::optional<int>& epochs) {
  struct Row {
    std::string scheme;
    RunConfig cfg;
  };
  std::vector<Row> rows;
  auto base = [&](const std::string& activation, std::vector<int> descriptor) {
    RunConfig cfg;
    cfg.activation = activation;
    cfg.descriptor = std::move(descriptor);
    if (activation != "spline") cfg.lambda = 0.0;
    if (seed) cfg.seed = *seed;
    if (epochs) cfg.epochs = *epochs;
    return cfg;
  };
  rows.push_back({"relu", base("relu", {2, 10, 1})});
  rows.push_back({"leaky_relu", base("leaky_relu", {2, 10, 1})});
  rows.push_back({"prelu", base("prelu", {2, 10, 1})});
  rows.push_back({"deep_spline", base("spline", {2, 2, 1})});
  rows.push_back({"deep_spline_l1", base("spline", {2, 10, 1})});
  {
    RunConfig l2 = base("spline", {2, 10, 1});
    l2.outer_norm = "l2";
    rows.push_back({"deep_spline_l2", std::move(l2)});
  }

  std::vector<std::future<RunArtifacts>> futures;
  futures.reserve(rows.size());
  for (const Row& row : rows)
    futures.push_back(std::async(std::launch::async,
                                 [&row] { return run_training(row.cfg, -1, false); }));

  std::string csv = "scheme,architecture,param_count,performance\n";
  nlohmann::json meta;
  meta["label"] = "reimplementation";
  meta["rows"] = nlohmann::json::array();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const RunArtifacts art = futures[r].get();
    csv += rows[r].scheme;
    csv += ',';
    csv += descriptor_label(rows[r].cfg.descriptor);
    csv += ',';
    csv += std::to_string(art.params);
    csv += ',';
    csv += format_double(100.0 - art.test_error);
    csv += '\n';
    nlohmann::json jr;
    jr["scheme"] = rows[r].scheme;
    jr["config"] = nlohmann::json::parse(config_to_json(rows[r].cfg));
    jr["train_error_rate"] = art.train_error;
    jr["test_error_rate"] = art.test_error;
    jr["nnz_coeffs"] = art.nnz;
    jr["wall_clock_sec"] = art.wall_clock_sec;
    meta["rows"].push_back(std::move(jr));
  }

  fs::create_directories(out_dir);
  write_text_file((fs::path(out_dir) / "compare.csv").string(), csv);
  write_text_file((fs::path(out_dir) / "compare_meta.json").string(), meta.dump(2) + "\n");
  std::cout << csv;
  std::printf("comparison written to %s (compare.csv, compare_meta.json)\n", out_dir.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deep-spline networks: training, Lipschitz certification, sweeps"};
  app.require_subcommand(1);

  std::string config_path, out_dir, model_path, out_path;
  std::string p_str = "2", outer_str = "l1", param;
  bool include_sigmoid = true;
  std::uint64_t certify_seed = 1;
  std::optional<std::uint64_t> seed;
  std::optional<int> epochs;
  std::optional<double> mu, lambda;
  std::vector<double> values;

  CLI::App* train_cmd = app.add_subcommand("train", "train a network per the config file");
  train_cmd->add_option("--config", config_path, "JSON run configuration")->required();
  train_cmd->add_option("--out", out_dir, "output directory")->required();
  train_cmd->add_option("--seed", seed, "override the config seed");

  CLI::App* certify_cmd = app.add_subcommand("certify", "certify Lipschitz bounds of a model");
  certify_cmd->add_option("--model", model_path, "model.json path")->required();
  certify_cmd->add_option("--p", p_str, "topology exponent: 1, 2 or inf");
  certify_cmd->add_option("--outer", outer_str, "outer norm of the euclidean bound: l1 or l2");
  certify_cmd->add_option("--include-sigmoid", include_sigmoid,
                          "include the final activation in the bounds");
  certify_cmd->add_option("--seed", certify_seed, "seed for the empirical sampler");
  certify_cmd->add_option("--out", out_path, "also write the report to this file");
  certify_cmd->add_option("--mu", mu, "emit balance ratios for this mu");
  certify_cmd->add_option("--lambda", lambda, "emit balance ratios for this lambda");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "retrain across lambda or K values");
  sweep_cmd->add_option("--config", config_path, "JSON run configuration")->required();
  sweep_cmd->add_option("--param", param, "swept parameter: lambda or K")->required();
  sweep_cmd->add_option("--values", values, "swept values")->required()->expected(-1);
  sweep_cmd->add_option("--out", out_dir, "output directory")->required();
  sweep_cmd->add_option("--seed", seed, "override the config seed");

  CLI::App* compare_cmd =
      app.add_subcommand("compare", "baseline-vs-spline table on the circle task");
  compare_cmd->add_option("--out", out_dir, "output directory")->required();
  compare_cmd->add_option("--seed", seed, "seed shared by every row");
  compare_cmd->add_option("--epochs", epochs, "override the per-row epoch budget");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (train_cmd->parsed()) return cmd_train(config_path, out_dir, seed);
    if (certify_cmd->parsed())
      return cmd_certify(model_path, p_str, outer_str, include_sigmoid, certify_seed, out_path,
                         mu, lambda);
    if (sweep_cmd->parsed()) return cmd_sweep(config_path, param, values, out_dir, seed);
    if (compare_cmd->parsed()) return cmd_compare(out_dir, seed, epochs);
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
