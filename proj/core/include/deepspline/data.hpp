#pragma once

#include <string>
#include <vector>

#include "deepspline/linalg.hpp"
#include "deepspline/rng.hpp"

namespace deepspline {

struct Network;

/// Labeled 2-class sample set. Inputs and labels run in parallel; the split
/// tag records where the set came from ("train"/"test").
struct Dataset {
  std::vector<Vec> inputs;
  std::vector<int> labels;
  std::string split = "train";

  std::size_t size() const { return inputs.size(); }
};

/// 1 iff (x1, x2) lies inside the origin-centered circle of area 2,
/// i.e. x1^2 + x2^2 <= 2/pi. Boundary inclusive.
int circle_label(double x1, double x2);

/// m i.i.d. points uniform on [-1, 1]^2 labeled by circle_label.
Dataset gen_circle(int m, Rng& rng, std::string split = "train");

/// Misclassification percentage at threshold 0.5. The network must have a
/// single output. Throws on an empty dataset.
double error_rate(const Network& net, const Dataset& ds);

/// CSV with header "x1,x2,label" and round-trip-exact decimals.
void export_csv(const Dataset& ds, const std::string& path);
Dataset import_csv(const std::string& path);

std::string dataset_to_csv(const Dataset& ds);
Dataset dataset_from_csv(const std::string& text, std::string split = "train");

}  // namespace deepspline
