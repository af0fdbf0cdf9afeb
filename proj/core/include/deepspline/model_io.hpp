#pragma once

#include <stdexcept>
#include <string>

#include "deepspline/network.hpp"

namespace deepspline {

inline constexpr int kModelFormatVersion = 1;

struct ModelParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnsupportedVersionError : ModelParseError {
  using ModelParseError::ModelParseError;
};

/// JSON text: {version, descriptor, layers: [{W (row-major), bias?,
/// activations: [...]}]}. Numbers are written with round-trip precision so
/// deserialize(serialize(net)) reproduces every parameter bit-exactly.
std::string serialize(const Network& net);

/// Throws ModelParseError on malformed input (never returns a partial
/// network) and UnsupportedVersionError on a version mismatch.
Network deserialize(const std::string& bytes);

void save_model(const Network& net, const std::string& path);
Network load_model(const std::string& path);

}  // namespace deepspline
