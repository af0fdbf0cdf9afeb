#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include <json.hpp>
#include <sys/wait.h>

#include "deepspline/model_io.hpp"
#include "deepspline/network.hpp"

using namespace deepspline;
namespace fs = std::filesystem;

namespace {

const std::string kCli = DEEPSPLINE_CLI_PATH;

int run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spit(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << body;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::path("cli_test_work") / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

const std::string kTinyConfig = R"({
  "activation": "spline",
  "descriptor": [2, 2, 1],
  "epochs": 5,
  "batch_size": 16,
  "knots": 11,
  "lambda": 1e-5,
  "train_size": 100,
  "test_size": 200,
  "seed": 9
})";

}  // namespace

TEST_CASE("cli usage errors exit with code 2") {
  CHECK(run("train --config does_not_exist.json --out cli_test_work/none") == 2);
  CHECK(run("definitely-not-a-subcommand") == 2);
  CHECK(run("sweep --config does_not_exist.json --param lambda --values 1e-4 "
            "--out cli_test_work/none") == 2);
  CHECK(run("--help") == 0);

  const fs::path dir = fresh_dir("badcfg");
  spit(dir / "config.json", R"({"activation": "spline", "not_a_field": 3})");
  CHECK(run("train --config " + (dir / "config.json").string() + " --out " + dir.string()) == 2);

  spit(dir / "bad_lambda.json", R"({"lambda": "huge"})");
  CHECK(run("train --config " + (dir / "bad_lambda.json").string() + " --out " + dir.string()) ==
        2);
}

TEST_CASE("cli reports numerical failures with exit code 3") {
  const fs::path dir = fresh_dir("nan");
  spit(dir / "config.json",
       R"({"optimizer": "sgd", "epochs": 30, "learning_rate": 1e30, "lambda": 1e-5,
           "train_size": 64, "test_size": 64, "knots": 5})");
  CHECK(run("train --config " + (dir / "config.json").string() + " --out " + dir.string()) == 3);
}

TEST_CASE("cli train writes artifacts and is byte-deterministic") {
  const fs::path dir = fresh_dir("train");
  spit(dir / "config.json", kTinyConfig);

  const std::string base = "train --config " + (dir / "config.json").string();
  CHECK(run(base + " --out " + (dir / "a").string()) == 0);
  CHECK(run(base + " --out " + (dir / "b").string()) == 0);

  for (const char* name : {"model.json", "history.csv", "report.json"}) {
    CHECK(fs::exists(dir / "a" / name));
    CHECK(fs::exists(dir / "b" / name));
  }
  CHECK(slurp(dir / "a" / "history.csv") == slurp(dir / "b" / "history.csv"));
  CHECK(slurp(dir / "a" / "model.json") == slurp(dir / "b" / "model.json"));

  // --seed changes the numbers, not the schema.
  CHECK(run(base + " --out " + (dir / "c").string() + " --seed 77") == 0);
  const std::string h_a = slurp(dir / "a" / "history.csv");
  const std::string h_c = slurp(dir / "c" / "history.csv");
  CHECK(h_a.substr(0, h_a.find('\n')) == h_c.substr(0, h_c.find('\n')));
  CHECK(h_a != h_c);

  const Network model = load_model((dir / "a" / "model.json").string());
  CHECK(model.descriptor() == std::vector<int>{2, 2, 1});
}

TEST_CASE("cli certify reports bounds for the absolute-value model") {
  const fs::path dir = fresh_dir("certify");
  Network net;
  net.layers.push_back(make_layer(
      Mat::from_rows({{1.0}}), std::nullopt,
      Activation::make_spline(DeepSpline{{0.0}, {2.0}, -1.0, 0.0})));
  save_model(net, (dir / "abs.json").string());

  const fs::path report = dir / "report.json";
  CHECK(run("certify --model " + (dir / "abs.json").string() + " --p 2 --out " +
            report.string()) == 0);

  const nlohmann::json j = nlohmann::json::parse(slurp(report));
  CHECK(j.at("bound_euclidean").get<double>() == doctest::Approx(3.0));
  CHECK(j.at("bound_general").get<double>() == doctest::Approx(3.0));
  CHECK(j.at("empirical_lower").get<double>() == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(j.at("dominance_ok").get<bool>());

  // Repeated invocations with different p give independent reports.
  CHECK(run("certify --model " + (dir / "abs.json").string() + " --p 1") == 0);

  spit(dir / "corrupt.json", "{\"version\": 1, \"descriptor\": [1,");
  CHECK(run("certify --model " + (dir / "corrupt.json").string()) == 2);
  CHECK(run("certify --model " + (dir / "abs.json").string() + " --p 7") == 2);
}

TEST_CASE("cli compare reproduces the table relations") {
  const fs::path dir = fresh_dir("compare");
  REQUIRE(run("compare --out " + dir.string() + " --epochs 1500") == 0);

  const std::string csv = slurp(dir / "compare.csv");
  REQUIRE(csv.rfind("scheme,architecture,param_count,performance\n", 0) == 0);

  std::map<std::string, std::pair<long, double>> rows;  // scheme -> (params, perf)
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    const auto c3 = line.find(',', c2 + 1);
    rows[line.substr(0, c1)] = {std::stol(line.substr(c2 + 1, c3 - c2 - 1)),
                                std::stod(line.substr(c3 + 1))};
  }
  REQUIRE(rows.size() == 6);
  CHECK(rows.at("deep_spline").first < rows.at("relu").first);
  CHECK(rows.at("deep_spline").second >= rows.at("relu").second - 0.5);
  CHECK(rows.at("deep_spline_l1").first < rows.at("deep_spline_l2").first);
  CHECK(fs::exists(dir / "compare_meta.json"));
}

TEST_CASE("cli sweep validates values and emits one row per value") {
  const fs::path dir = fresh_dir("sweep");
  spit(dir / "config.json", kTinyConfig);
  const std::string base = "sweep --config " + (dir / "config.json").string();

  CHECK(run(base + " --param lambda --values 1e-4 --out " + dir.string()) == 2);
  CHECK(run(base + " --param nope --values 1e-4 1e-3 --out " + dir.string()) == 2);
  CHECK(run(base + " --param K --values 2.5 3 --out " + dir.string()) == 2);

  CHECK(run(base + " --param lambda --values 1e-5 1e-2 --out " + (dir / "l").string()) == 0);
  const std::string csv = slurp(dir / "l" / "sweep.csv");
  CHECK(csv.rfind("value,test_error,bound,nnz_coeffs,param_count\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);  // header + 2 rows

  // Rerun is byte-identical.
  CHECK(run(base + " --param lambda --values 1e-5 1e-2 --out " + (dir / "l2").string()) == 0);
  CHECK(slurp(dir / "l2" / "sweep.csv") == csv);
}
