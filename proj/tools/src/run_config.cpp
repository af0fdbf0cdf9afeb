#include "run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace deepspline::cli {
namespace {

using nlohmann::json;

const std::set<std::string> kKnownFields = {
    "activation",  "descriptor", "optimizer",       "learning_rate",
    "epochs",      "batch_size", "mu",              "lambda",
    "knots",       "knot_range", "outer_norm",      "seed",
    "sparsify_budget", "train_size", "test_size",   "include_sigmoid_in_bound"};

}  // namespace

RunConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  for (const auto& item : j.items())
    if (!kKnownFields.contains(item.key()))
      throw ConfigError("config: unknown field \"" + item.key() + "\"");

  RunConfig cfg;
  try {
    if (j.contains("activation")) cfg.activation = j["activation"].get<std::string>();
    if (j.contains("descriptor")) cfg.descriptor = j["descriptor"].get<std::vector<int>>();
    if (j.contains("optimizer")) cfg.optimizer = j["optimizer"].get<std::string>();
    if (j.contains("learning_rate")) cfg.learning_rate = j["learning_rate"].get<double>();
    if (j.contains("epochs")) cfg.epochs = j["epochs"].get<int>();
    if (j.contains("batch_size")) cfg.batch_size = j["batch_size"].get<int>();
    if (j.contains("mu")) cfg.mu = j["mu"].get<double>();
    if (j.contains("lambda")) {
      const json& jl = j["lambda"];
      if (jl.is_string()) {
        if (jl.get<std::string>() != "auto")
          throw ConfigError("config: lambda must be a number or \"auto\"");
      } else if (jl.is_number()) {
        cfg.lambda = jl.get<double>();
      } else if (!jl.is_null()) {
        throw ConfigError("config: lambda must be a number or \"auto\"");
      }
    }
    if (j.contains("knots")) cfg.knots = j["knots"].get<int>();
    if (j.contains("knot_range")) {
      const auto range = j["knot_range"].get<std::vector<double>>();
      if (range.size() != 2) throw ConfigError("config: knot_range must be [lo, hi]");
      cfg.knot_lo = range[0];
      cfg.knot_hi = range[1];
    }
    if (j.contains("outer_norm")) cfg.outer_norm = j["outer_norm"].get<std::string>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("sparsify_budget")) cfg.sparsify_budget = j["sparsify_budget"].get<double>();
    if (j.contains("train_size")) cfg.train_size = j["train_size"].get<int>();
    if (j.contains("test_size")) cfg.test_size = j["test_size"].get<int>();
    if (j.contains("include_sigmoid_in_bound"))
      cfg.include_sigmoid_in_bound = j["include_sigmoid_in_bound"].get<bool>();
  } catch (const ConfigError&) {
    throw;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  validate_config(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return config_from_json_text(buf.str());
}

std::string config_to_json(const RunConfig& cfg, int indent) {
  json j;
  j["activation"] = cfg.activation;
  j["descriptor"] = cfg.descriptor;
  j["optimizer"] = cfg.optimizer;
  j["learning_rate"] = cfg.learning_rate;
  j["epochs"] = cfg.epochs;
  j["batch_size"] = cfg.batch_size;
  j["mu"] = cfg.mu;
  if (cfg.lambda)
    j["lambda"] = *cfg.lambda;
  else if (cfg.activation == "spline")
    j["lambda"] = "auto";
  else
    j["lambda"] = 0.0;
  j["knots"] = cfg.knots;
  j["knot_range"] = {cfg.knot_lo, cfg.knot_hi};
  j["outer_norm"] = cfg.outer_norm;
  j["seed"] = cfg.seed;
  j["sparsify_budget"] = cfg.sparsify_budget;
  j["train_size"] = cfg.train_size;
  j["test_size"] = cfg.test_size;
  j["include_sigmoid_in_bound"] = cfg.include_sigmoid_in_bound;
  return j.dump(indent);
}

void validate_config(const RunConfig& cfg) {
  if (cfg.activation != "spline" && cfg.activation != "relu" &&
      cfg.activation != "leaky_relu" && cfg.activation != "prelu")
    throw ConfigError("config: activation must be spline, relu, leaky_relu or prelu");
  if (cfg.optimizer != "adam" && cfg.optimizer != "sgd")
    throw ConfigError("config: optimizer must be adam or sgd");
  if (cfg.outer_norm != "l1" && cfg.outer_norm != "l2")
    throw ConfigError("config: outer_norm must be l1 or l2");
  if (cfg.descriptor.size() < 2) throw ConfigError("config: descriptor needs at least two entries");
  for (int n : cfg.descriptor)
    if (n < 1) throw ConfigError("config: descriptor entries must be positive");
  if (cfg.descriptor.back() != 1) throw ConfigError("config: output width must be 1");
  if (!(cfg.learning_rate > 0.0)) throw ConfigError("config: learning_rate must be positive");
  if (cfg.epochs < 0) throw ConfigError("config: epochs must be nonnegative");
  if (cfg.batch_size < 1) throw ConfigError("config: batch_size must be at least 1");
  if (!(cfg.mu >= 0.0)) throw ConfigError("config: mu must be nonnegative");
  if (cfg.lambda && !(*cfg.lambda >= 0.0)) throw ConfigError("config: lambda must be nonnegative");
  if (cfg.knots < 1) throw ConfigError("config: knots must be at least 1");
  if (!(cfg.knot_lo < cfg.knot_hi)) throw ConfigError("config: knot_range must satisfy lo < hi");
  if (!(cfg.sparsify_budget >= 0.0))
    throw ConfigError("config: sparsify_budget must be nonnegative");
  if (cfg.train_size < 1) throw ConfigError("config: train_size must be at least 1");
  if (cfg.test_size < 1) throw ConfigError("config: test_size must be at least 1");
}

TrainConfig to_train_config(const RunConfig& cfg) {
  TrainConfig tc;
  tc.optimizer = cfg.optimizer == "adam" ? Optimizer::adam : Optimizer::sgd;
  tc.learning_rate = cfg.learning_rate;
  tc.epochs = cfg.epochs;
  tc.batch_size = cfg.batch_size;
  tc.mu = cfg.mu;
  if (cfg.lambda)
    tc.lambda = *cfg.lambda;
  else if (cfg.activation != "spline")
    tc.lambda = 0.0;  // the balance rule is a spline-scheme device
  tc.knots = cfg.knots;
  tc.knot_lo = cfg.knot_lo;
  tc.knot_hi = cfg.knot_hi;
  tc.outer_norm = outer_norm_from_name(cfg.outer_norm);
  tc.seed = cfg.seed;
  tc.sparsify_budget = cfg.sparsify_budget;
  return tc;
}

OuterNorm outer_norm_from_name(const std::string& name) {
  if (name == "l1") return OuterNorm::l1;
  if (name == "l2") return OuterNorm::l2;
  throw ConfigError("config: outer_norm must be l1 or l2");
}

ActivationKind baseline_kind(const std::string& name) {
  if (name == "relu") return ActivationKind::relu;
  if (name == "leaky_relu") return ActivationKind::leaky_relu;
  if (name == "prelu") return ActivationKind::prelu;
  throw ConfigError("config: \"" + name + "\" is not a baseline activation");
}

}  // namespace deepspline::cli
