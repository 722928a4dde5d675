#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "formlab/cli.hpp"

using namespace formlab;

namespace {

std::filesystem::path tempDir() {
  auto dir = std::filesystem::temp_directory_path() / "formlab_cli_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

void writeFile(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

std::string readFile(const std::filesystem::path& p) {
  std::ifstream in(p);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("tau and bign queries") {
  // exercised through the library entry; stdout goes to the console
  CHECK(wedgeComponentCount(2, {1, 1}) == 5);  // the value `tau --n 2 --k 1,1` prints
  const auto out = tempDir();
  CHECK(cli::run({"tau", "--n", "2", "--k", "1,1"}) == 0);
  CHECK(cli::run({"bign", "--n", "4", "--k", "2"}) == 0);
  CHECK(cli::run({"enumerate", "--n", "2", "--k", "1,1", "--weights", "1..2"}) == 0);
}

TEST_CASE("convexity subcommand verdicts and exit codes") {
  const auto dir = tempDir();
  const auto specPath = dir / "combo.json";
  writeFile(specPath, R"({
    "n": 2, "k": [1, 1], "variant": "quasiaffine", "c0": 0.25,
    "terms": [
      {"alpha": [1, 0], "form": "0.5*e[1] - 1*e[2]"},
      {"alpha": [0, 1], "form": "1*e[1]"},
      {"alpha": [1, 1], "form": "2*e[1,2]"}
    ]
  })");
  const auto outPath = dir / "report.json";
  CHECK(cli::run({"convexity", "--spec", specPath.string(), "--test", "one-affine", "--seed", "7",
                  "--samples", "200", "--out", outPath.string()}) == 0);
  const auto report = formlab::Json::parse(readFile(outPath));
  CHECK(report.at("verdict") == "pass");
  CHECK(report.at("seed") == 7);
  CHECK(report.at("report").at("verdict") == "passes");

  // identical config and seed produce byte-identical reports
  const auto outPath2 = dir / "report2.json";
  CHECK(cli::run({"convexity", "--spec", specPath.string(), "--test", "one-affine", "--seed", "7",
                  "--samples", "200", "--out", outPath2.string()}) == 0);
  CHECK(readFile(outPath) == readFile(outPath2));

  // a concave norm power fails one-convexity with exit code 2
  const auto badPath = dir / "concave.json";
  writeFile(badPath, R"({
    "n": 2, "k": [1, 1], "variant": "normpower",
    "weights": [-1.0, 0.0], "powers": [2.0, 2.0]
  })");
  CHECK(cli::run({"convexity", "--spec", badPath.string(), "--test", "one-convex", "--seed", "3",
                  "--samples", "200", "--out", (dir / "bad.json").string()}) == 2);

  // usage errors exit with 1
  CHECK(cli::run({"convexity", "--spec", "/nonexistent.json", "--test", "one-affine"}) == 1);
  CHECK(cli::run({"convexity", "--spec", specPath.string(), "--test", "bogus",
                  "--out", (dir / "x.json").string()}) == 1);

  // unknown config fields are rejected
  const auto typoPath = dir / "typo.json";
  writeFile(typoPath, R"({
    "n": 2, "k": [1, 1], "variant": "normpower",
    "weights": [1.0, 1.0], "powers": [2.0, 2.0], "sample_count": 10
  })");
  CHECK(cli::run({"convexity", "--spec", typoPath.string(), "--test", "one-convex",
                  "--out", (dir / "y.json").string()}) == 1);
}

TEST_CASE("exponents subcommand") {
  const auto dir = tempDir();
  const auto outPath = dir / "exp.json";
  CHECK(cli::run({"exponents", "--n", "3", "--k", "1,1", "--alpha", "1,1", "--p", "2,2", "--out",
                  outPath.string()}) == 0);
  const auto report = formlab::Json::parse(readFile(outPath));
  CHECK(report.at("report").at("flags").at("sobolev_admissible") == true);
  CHECK(report.at("report").at("theta_inv") == "1");

  // an inadmissible scale exits 2
  CHECK(cli::run({"exponents", "--n", "3", "--k", "1", "--alpha", "2", "--p", "6/5", "--out",
                  (dir / "exp2.json").string()}) == 2);

  // the bounded-plus-derivative pairing with q
  CHECK(cli::run({"exponents", "--n", "3", "--k", "1,1,1", "--alpha", "1,1,1", "--p", "2,2,2",
                  "--q", "inf,inf,inf", "--out", (dir / "exp3.json").string()}) == 0);
}

TEST_CASE("hodge subcommand round-trips a cochain file") {
  const auto dir = tempDir();
  auto g = makeGrid(2, 8);
  Rng rng(5);
  Cochain w(g, 1);
  for (std::int64_t i = 0; i < w.values.size(); ++i) w.values(i) = rng.uniform(-1, 1);
  w.values = g->tangentialInteriorMask(1).cwiseProduct(w.values);
  writeFile(dir / "w.json", cochainToJson(w).dump());
  const auto outPath = dir / "split.json";
  CHECK(cli::run({"hodge", "--in", (dir / "w.json").string(), "--bc", "tangential-zero", "--out",
                  outPath.string()}) == 0);
  const auto report = formlab::Json::parse(readFile(outPath));
  const auto exact = cochainFromJson(report.at("report").at("exact"));
  const auto coex = cochainFromJson(report.at("report").at("coexact"));
  const auto harm = cochainFromJson(report.at("report").at("harmonic"));
  CHECK((exact.values + coex.values + harm.values - w.values).lpNorm<Eigen::Infinity>() <= 1e-12);
}

TEST_CASE("weakcont subcommands") {
  const auto dir = tempDir();

  writeFile(dir / "wedge.json", R"({
    "grid": {"n": 2, "res": 16},
    "degrees": [1, 1],
    "alpha": [1, 1],
    "potentials": [
      {"components": [{"axes": [], "expr": "sin(pi*x1)*x2"}]},
      {"components": [{"axes": [], "expr": "cos(pi*x2)+0.5*x1"}]}
    ],
    "psi": {"components": [{"axes": [1, 2], "expr": "sin(pi*x1)^2*sin(pi*x2)^2"}]}
  })");
  CHECK(cli::run({"weakcont", "--experiment", "wedge", "--config", (dir / "wedge.json").string(),
                  "--out", (dir / "wedge_out.json").string()}) == 0);
  const auto wedgeRep = formlab::Json::parse(readFile(dir / "wedge_out.json"));
  CHECK(wedgeRep.at("verdict") == "pass");

  writeFile(dir / "dich.json", R"({
    "recipe": {
      "kind": "laminate-oscillation",
      "grid": {"n": 2, "res": 32},
      "degrees": [1, 1],
      "base": ["1*e[1]", "1*e[2]"],
      "direction": [1, 0],
      "profiles": ["1", "1"],
      "amplitude": 1.0
    },
    "integrand": {
      "n": 2, "k": [1, 1], "variant": "quasiaffine", "c0": 0,
      "terms": [{"alpha": [1, 1], "form": "1*e[1,2]"}]
    },
    "weight": "30*x1*(1-x1)^2*x2*(1-x2)^2",
    "nus": [1, 2, 4],
    "expect": "converges"
  })");
  CHECK(cli::run({"weakcont", "--experiment", "dichotomy", "--config", (dir / "dich.json").string(),
                  "--out", (dir / "dich_out.json").string()}) == 0);

  writeFile(dir / "cex.json", R"({
    "grid": {"n": 2, "res": 32},
    "k": 2, "p": 2.0, "amplitude": 1.0, "nus": [2, 4]
  })");
  CHECK(cli::run({"weakcont", "--experiment", "counterexample", "--config",
                  (dir / "cex.json").string(), "--out", (dir / "cex_out.json").string()}) == 0);
  const auto cexRep = formlab::Json::parse(readFile(dir / "cex_out.json"));
  CHECK(std::abs(cexRep.at("report").at("delta").get<double>() - 0.25) <= 0.05);

  writeFile(dir / "tel.json", R"({
    "grid": {"n": 2, "res": 16},
    "degrees": [1, 1],
    "alpha": [1, 1],
    "p": ["2", "2"],
    "psi": {"components": [{"axes": [1, 2], "expr": "sin(pi*x1)^2*sin(pi*x2)^2"}]},
    "seed": 11,
    "training_pairs": 40,
    "heldout_pairs": 10
  })");
  CHECK(cli::run({"weakcont", "--experiment", "telescopic", "--config",
                  (dir / "tel.json").string(), "--out", (dir / "tel_out.json").string()}) == 0);
}

TEST_CASE("minimize subcommand") {
  const auto dir = tempDir();
  writeFile(dir / "prob.json", R"({
    "grid": {"n": 2, "res": 8},
    "k": [2],
    "integrand": {"n": 2, "k": [2], "variant": "normpower", "weights": [1.0], "powers": [2.0]},
    "p": [2.0],
    "boundary": [{"components": [{"axes": [1], "expr": "0.3*x2"}, {"axes": [2], "expr": "0.2*x1"}]}]
  })");
  for (const char* method : {"linear", "descent"}) {
    const auto outPath = dir / (std::string("min_") + method + ".json");
    CHECK(cli::run({"minimize", "--problem", (dir / "prob.json").string(), "--method", method,
                    "--out", outPath.string()}) == 0);
  }
  const auto lin = formlab::Json::parse(readFile(dir / "min_linear.json"));
  const auto des = formlab::Json::parse(readFile(dir / "min_descent.json"));
  const double el = lin.at("report").at("energy").get<double>();
  const double ed = des.at("report").at("energy").get<double>();
  CHECK(std::abs(el - ed) <= 1e-7 * (1.0 + std::abs(el)));
}
