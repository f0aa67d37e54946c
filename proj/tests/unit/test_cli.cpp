#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "rdl/cli.hpp"
#include "rdl/report.hpp"
#include "util.hpp"

using namespace rdl;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "rdl");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kMirror = RDL_TEST_DIR "/mirror.libsvm";

}  // namespace

TEST_CASE("report helpers") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(INFINITY) == "inf");
  CHECK(number(-INFINITY) == "-inf");
  CHECK(number(1.25) == 1.25);
  std::ostringstream os;
  SweepRow r;
  r.parameter = 2;
  r.extra["b"] = 1;
  SweepRow s;
  s.extra["a"] = 3;
  write_csv(os, {r, s}, "t");
  std::istringstream lines(os.str());
  std::string header;
  std::getline(lines, header);
  CHECK(header == "t,excess_risk,l1_distance,zero_one,l1_norm,l2_norm,a,b");
}

TEST_CASE("solve-dual on the mirror file") {
  const Result r = run({"solve-dual", "--loss", "logistic", "--data", kMirror});
  REQUIRE(r.code == cli::kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["gap"].get<double>() <= 1e-6);
  CHECK(j["objective"].get<double>() == doctest::Approx(std::log(2.0)).epsilon(1e-6));
  CHECK(j["meta"]["dataset_digest"] == file_digest(kMirror));
  CHECK(j["meta"]["version"] == kVersion);
}

TEST_CASE("usage and data errors") {
  CHECK(run({"solve-dual", "--loss", "banana", "--data", kMirror}).code == cli::kExitUsage);
  CHECK(run({"no-such-command"}).code == cli::kExitUsage);
  CHECK(run({"solve-dual", "--data", "/nonexistent.libsvm"}).code == cli::kExitData);
  CHECK(run({"experiment", "generalize", "--n-grid", "10"}).code == cli::kExitUsage);
  testing::TempFile bad("bad_label.libsvm", "7 1:1\n");
  CHECK(run({"validate-data", "--data", bad.path()}).code == cli::kExitData);
  CHECK(run({"validate-data", "--data", kMirror}).code == cli::kExitOk);
}

TEST_CASE("strict mode turns an iteration cap into exit 3") {
  const Result r = run({"solve-primal", "--fixture", "difficult", "--max-iters", "5", "--strict"});
  CHECK(r.code == cli::kExitSolver);
  CHECK(run({"solve-primal", "--fixture", "difficult", "--max-iters", "5"}).code == cli::kExitOk);
}

TEST_CASE("zo experiment prints the alternating errors") {
  const Result r = run({"experiment", "zo", "--epsilon", "0.5", "--iters", "10"});
  REQUIRE(r.code == cli::kExitOk);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  int i = 0;
  while (std::getline(lines, line)) {
    ++i;
    const std::size_t c1 = line.find(','), c2 = line.find(',', c1 + 1), c3 = line.find(',', c2 + 1);
    const double zo = std::stod(line.substr(c3 + 1));
    CHECK(zo == doctest::Approx(i % 2 ? 2.0 / 3.0 : 1.0 / 3.0).epsilon(1e-15));
  }
  CHECK(i == 10);
}

TEST_CASE("reports are reproducible") {
  const std::string out = (std::filesystem::temp_directory_path() / "rdl_cli_repro.json").string();
  const std::vector<std::string> args = {"experiment", "generalize", "--seed", "5", "--n-grid", "50,100",
                                         "--n-seeds", "3", "--no-timestamp", "--out", out};
  REQUIRE(run(args).code == cli::kExitOk);
  const std::string first = slurp(out);
  REQUIRE(run(args).code == cli::kExitOk);
  CHECK(slurp(out) == first);
  const auto j = nlohmann::json::parse(first);
  CHECK(j["meta"]["seed"] == 5);
  CHECK(j["meta"]["dataset_digest"].get<std::string>().size() == 64);
  CHECK_FALSE(j["meta"].contains("timestamp"));
  std::filesystem::remove(out);
}
