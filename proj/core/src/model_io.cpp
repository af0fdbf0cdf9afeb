#include "deepspline/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace deepspline {
namespace {

using nlohmann::json;

json activation_to_json(const Activation& a) {
  switch (a.kind) {
    case ActivationKind::spline:
      return json{{"type", "spline"},
                  {"knots", a.spline.knots},
                  {"coeffs", a.spline.coeffs},
                  {"b1", a.spline.b1},
                  {"b2", a.spline.b2}};
    case ActivationKind::relu:
      return json{{"type", "relu"}};
    case ActivationKind::leaky_relu:
      return json{{"type", "leaky_relu"}, {"slope", a.slope}};
    case ActivationKind::prelu:
      return json{{"type", "prelu"}, {"slope", a.slope}};
    case ActivationKind::sigmoid:
      return json{{"type", "sigmoid"}};
  }
  throw ModelParseError("model: unknown activation kind");
}

Activation activation_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "spline") {
    DeepSpline s;
    s.knots = j.at("knots").get<std::vector<double>>();
    s.coeffs = j.at("coeffs").get<std::vector<double>>();
    s.b1 = j.at("b1").get<double>();
    s.b2 = j.at("b2").get<double>();
    return Activation::make_spline(std::move(s));
  }
  if (type == "relu") return Activation::make_relu();
  if (type == "leaky_relu") return Activation::make_leaky_relu(j.at("slope").get<double>());
  if (type == "prelu") return Activation::make_prelu(j.at("slope").get<double>());
  if (type == "sigmoid") return Activation::make_sigmoid();
  throw ModelParseError("model: unknown activation type \"" + type + "\"");
}

}  // namespace

std::string serialize(const Network& net) {
  validate(net);
  json j;
  j["version"] = kModelFormatVersion;
  j["descriptor"] = net.descriptor();
  j["layers"] = json::array();
  for (const DenseLayer& layer : net.layers) {
    json jl;
    jl["W"] = layer.W.data;  // row-major, dims follow from the descriptor
    if (layer.bias) jl["bias"] = *layer.bias;
    jl["activations"] = json::array();
    for (const Activation& a : layer.activations) jl["activations"].push_back(activation_to_json(a));
    j["layers"].push_back(std::move(jl));
  }
  return j.dump(2);
}

Network deserialize(const std::string& bytes) {
  json j;
  try {
    j = json::parse(bytes);
  } catch (const json::exception& e) {
    throw ModelParseError(std::string("model: invalid JSON: ") + e.what());
  }
  try {
    if (!j.is_object() || !j.contains("version"))
      throw ModelParseError("model: missing version field");
    const int version = j.at("version").get<int>();
    if (version != kModelFormatVersion)
      throw UnsupportedVersionError("model: unsupported format version " +
                                    std::to_string(version) + " (expected " +
                                    std::to_string(kModelFormatVersion) + ")");
    const auto descriptor = j.at("descriptor").get<std::vector<int>>();
    const auto& jlayers = j.at("layers");
    if (descriptor.size() < 2 || jlayers.size() + 1 != descriptor.size())
      throw ModelParseError("model: descriptor and layer count disagree");

    Network net;
    for (std::size_t l = 0; l < jlayers.size(); ++l) {
      const json& jl = jlayers[l];
      const int rows = descriptor[l + 1];
      const int cols = descriptor[l];
      DenseLayer layer;
      layer.W = Mat(rows, cols);
      layer.W.data = jl.at("W").get<std::vector<double>>();
      if (layer.W.data.size() != static_cast<std::size_t>(rows) * cols)
        throw ModelParseError("model: weight matrix size mismatch in layer " + std::to_string(l));
      if (jl.contains("bias")) layer.bias = jl.at("bias").get<std::vector<double>>();
      for (const json& ja : jl.at("activations")) layer.activations.push_back(activation_from_json(ja));
      net.layers.push_back(std::move(layer));
    }
    validate(net);
    return net;
  } catch (const ModelParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ModelParseError(std::string("model: ") + e.what());
  }
}

void save_model(const Network& net, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("model: cannot open " + path + " for writing");
  out << serialize(net) << '\n';
}

Network load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelParseError("model: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize(buf.str());
}

}  // namespace deepspline
