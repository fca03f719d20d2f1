#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli/witness.hpp"
#include "kalpha/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = kalpha::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("kalpha_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++))) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  [[nodiscard]] const fs::path& path() const { return path_; }
  [[nodiscard]] std::string write(const std::string& name, const std::string& body) const {
    std::ofstream(path_ / name) << body;
    return (path_ / name).string();
  }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) out.push_back(cell);
  return out;
}

const char* kTranslatorConfig = R"({"schema": "kalpha/1",
  "surface": {"kind": "revolution",
    "radius": {"type": "quadrature", "family": "alpha1", "c1": -2, "branch": 1,
               "r_range": [1.0, 1.35], "c2": 0.753549519719539, "s_range": [0.0, 0.72]}},
  "translator": {"alpha": 1, "w": [0, 0, 1]}, "grid": [40, 16]})";

}  // namespace

TEST_CASE("witness list") {
  const Run r = run({"witness", "--list"});
  CHECK(r.code == 0);
  for (const std::string& id : kalpha::cli::witness_ids()) CHECK(r.out.find(id) != std::string::npos);
  CHECK(kalpha::cli::witness_ids().size() == 16);
}

TEST_CASE("witness reports are deterministic for a fixed seed") {
  const Run a = run({"witness", "parallel-transfer", "--seed", "9"});
  const Run b = run({"witness", "parallel-transfer", "--seed", "9"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("witness parallel-transfer\n", 0) == 0);
  CHECK(a.out.find("verdict PASS") != std::string::npos);
}

TEST_CASE("every witness passes") {
  for (const std::string& id : kalpha::cli::witness_ids()) {
    CAPTURE(id);
    CHECK(kalpha::cli::run_witness(id, {}).pass);
  }
}

TEST_CASE("exit codes") {
  TempDir dir;
  CHECK(run({"translator", "--config", dir.write("t.json", kTranslatorConfig)}).code == kalpha::cli::kExitPass);
  const std::string tube = dir.write("tube.json", R"({"schema": "kalpha/1",
    "surface": {"kind": "tube", "spine": {"type": "helix", "a": 1, "b": 0.5, "length": 3}, "r": 0.3},
    "translator": {"alpha": 1, "w": [0, 0, 1]}, "grid": [40, 32]})");
  CHECK(run({"translator", "--config", tube}).code == kalpha::cli::kExitFail);
  CHECK(run({"witness", "no-such-witness"}).code == kalpha::cli::kExitError);
  CHECK(run({"bogus"}).code == kalpha::cli::kExitError);
  CHECK(run({"translator", "--config", (dir.path() / "absent.json").string()}).code == kalpha::cli::kExitError);
  CHECK(run({"translator", "--config", dir.write("bad.json", "{not json")}).code == kalpha::cli::kExitError);
}

TEST_CASE("missing fields are named") {
  TempDir dir;
  const std::string cfg = dir.write("c.json", R"({"schema": "kalpha/1",
    "radius": {"type": "quadrature", "family": "alpha1", "r_range": [1, 1.3]}})");
  const Run r = run({"solve", "--config", cfg, "--out", dir.path().string()});
  CHECK(r.code == kalpha::cli::kExitError);
  CHECK(r.err.find("missing field 'radius.c1'") != std::string::npos);
}

TEST_CASE("curvature CSV for the alpha = 1 translator has K = -r'") {
  TempDir dir;
  const Run r = run({"curvature", "--config", dir.write("t.json", kTranslatorConfig), "--out", dir.path().string()});
  REQUIRE(r.code == 0);
  std::istringstream csv(slurp(dir.path() / "curvature.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "s,theta,K,H,k1,k2,r,dr");
  int rows = 0;
  while (std::getline(csv, line)) {
    const auto cells = split(line);
    REQUIRE(cells.size() == 8);
    CHECK(std::stod(cells[2]) == doctest::Approx(-std::stod(cells[7])).epsilon(1e-8));
    ++rows;
  }
  CHECK(rows == 40 * 16);
}

TEST_CASE("sphere curvature CSV") {
  TempDir dir;
  const std::string cfg = dir.write("s.json", R"({"schema": "kalpha/1", "surface": {"kind": "sphere", "radius": 2.0}})");
  REQUIRE(run({"curvature", "--config", cfg, "--out", dir.path().string(), "--grid", "5x4"}).code == 0);
  std::istringstream csv(slurp(dir.path() / "curvature.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "s,theta,K,H,k1,k2");
  while (std::getline(csv, line)) CHECK(std::stod(split(line)[2]) == doctest::Approx(0.25));
}

TEST_CASE("solve writes a profile") {
  TempDir dir;
  const std::string cfg = dir.write("p.json", R"({"schema": "kalpha/1",
    "radius": {"type": "ode", "alpha": -0.5, "r0": 0.75, "dr0": -0.3, "s_range": [0, 0.2]}})");
  REQUIRE(run({"solve", "--config", cfg, "--out", dir.path().string(), "--grid", "11x2"}).code == 0);
  std::istringstream csv(slurp(dir.path() / "profile.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "s,r,dr");
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 11);
}

TEST_CASE("the installed binary matches the in-process runner") {
  TempDir dir;
  const fs::path out = dir.path() / "stdout.txt";
  const std::string cmd = std::string("KALPHA_LOG=quiet ") + KALPHA_BINARY + " witness tube-nonexistence --seed 3 > " + out.string();
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  CHECK(WEXITSTATUS(status) == 0);
  CHECK(slurp(out) == run({"witness", "tube-nonexistence", "--seed", "3"}).out);
  const int bad = std::system((std::string("KALPHA_LOG=quiet ") + KALPHA_BINARY + " witness nope 2>/dev/null").c_str());
  CHECK(WEXITSTATUS(bad) == 1);
}
