#include "deepspline/data.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <system_error>
#include <utility>

#include "deepspline/network.hpp"

namespace deepspline {
namespace {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view field, std::size_t line_no) {
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size())
    throw std::runtime_error("csv: bad number on line " + std::to_string(line_no));
  return v;
}

}  // namespace

int circle_label(double x1, double x2) {
  return x1 * x1 + x2 * x2 <= 2.0 / std::numbers::pi ? 1 : 0;
}

Dataset gen_circle(int m, Rng& rng, std::string split) {
  if (m < 1) throw std::invalid_argument("gen_circle: need at least one point");
  Dataset ds;
  ds.split = std::move(split);
  ds.inputs.reserve(static_cast<std::size_t>(m));
  ds.labels.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const double x1 = rng.next_uniform(-1.0, 1.0);
    const double x2 = rng.next_uniform(-1.0, 1.0);
    ds.inputs.push_back({x1, x2});
    ds.labels.push_back(circle_label(x1, x2));
  }
  return ds;
}

double error_rate(const Network& net, const Dataset& ds) {
  if (ds.size() == 0) throw std::invalid_argument("error_rate: empty dataset");
  if (net.output_dim() != 1) throw std::invalid_argument("error_rate: scalar output required");
  long mis = 0;
  for (std::size_t m = 0; m < ds.size(); ++m) {
    const int pred = forward(net, ds.inputs[m])[0] > 0.5 ? 1 : 0;
    if (pred != ds.labels[m]) ++mis;
  }
  return 100.0 * static_cast<double>(mis) / static_cast<double>(ds.size());
}

std::string dataset_to_csv(const Dataset& ds) {
  std::string out = "x1,x2,label\n";
  for (std::size_t m = 0; m < ds.size(); ++m) {
    if (ds.inputs[m].size() != 2)
      throw std::invalid_argument("dataset_to_csv: two-dimensional inputs required");
    out += format_double(ds.inputs[m][0]);
    out += ',';
    out += format_double(ds.inputs[m][1]);
    out += ',';
    out += std::to_string(ds.labels[m]);
    out += '\n';
  }
  return out;
}

Dataset dataset_from_csv(const std::string& text, std::string split) {
  if (text.empty()) throw std::runtime_error("csv: empty file, no dataset");
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  Dataset ds;
  ds.split = std::move(split);
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != "x1,x2,label")
        throw std::runtime_error("csv: expected header \"x1,x2,label\" on line 1");
      continue;
    }
    if (line.empty()) continue;
    const std::string_view row(line);
    const std::size_t c1 = row.find(',');
    const std::size_t c2 = c1 == std::string_view::npos ? c1 : row.find(',', c1 + 1);
    if (c1 == std::string_view::npos || c2 == std::string_view::npos ||
        row.find(',', c2 + 1) != std::string_view::npos)
      throw std::runtime_error("csv: expected 3 columns on line " + std::to_string(line_no));
    const double x1 = parse_double(row.substr(0, c1), line_no);
    const double x2 = parse_double(row.substr(c1 + 1, c2 - c1 - 1), line_no);
    const double lab = parse_double(row.substr(c2 + 1), line_no);
    if (lab != 0.0 && lab != 1.0)
      throw std::runtime_error("csv: label must be 0 or 1 on line " + std::to_string(line_no));
    ds.inputs.push_back({x1, x2});
    ds.labels.push_back(static_cast<int>(lab));
  }
  return ds;
}

void export_csv(const Dataset& ds, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("csv: cannot open " + path + " for writing");
  out << dataset_to_csv(ds);
}

Dataset import_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("csv: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return dataset_from_csv(buf.str());
}

}  // namespace deepspline
