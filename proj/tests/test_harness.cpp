#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "core/error.hpp"
#include "doctest.h"
#include "harness/sweep.hpp"

using namespace vtf;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("vtf_test_" + name);
  fs::remove_all(p);
  return p;
}

std::vector<std::string> lines(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::string parse_error(const std::string& yaml) {
  try {
    parse_config(yaml);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_argument);
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("config errors name the line and key") {
  const std::string bad_param = "experiment: spectrum\nseed: 1\nparams:\n  d: [1, 2]\n  bogus: 3\n";
  const std::string m = parse_error(bad_param);
  CHECK(m.find("params.bogus") != std::string::npos);
  CHECK(m.find("line 5") != std::string::npos);
  CHECK(parse_error("experiment: spectrum\nseed: 1\nparams:\n  d: [1, x]\n").find("line 4") != std::string::npos);
  CHECK(parse_error("experiment: spectrum\nparams: {d: 1}\n").find("seed") != std::string::npos);
  CHECK(parse_error("experiment: warp\nseed: 1\n").find("experiment") != std::string::npos);
  CHECK(parse_error("experiment: spectrum\nseed: 1\ncolour: red\n").find("line 3") != std::string::npos);
  CHECK(parse_error("experiment: trapped\nseed: 1\nparams: {eps: 0.1, omega: 0.9}\n").find("omega") !=
        std::string::npos);
  CHECK(parse_error("experiment: homogeneous\nseed: 1\nparams: {bc: sideways}\n").find("bc") != std::string::npos);
  CHECK(parse_error("experiment: [unclosed\n").find("line") != std::string::npos);
}

TEST_CASE("defaults fill missing parameters and enter the hash") {
  const SweepConfig a = parse_config("experiment: scaling\nseed: 3\n");
  REQUIRE(a.params.size() == 5);
  CHECK(a.params.back().first == "rho");
  CHECK(a.params.back().second.size() == 3);
  const SweepConfig b = parse_config("experiment: scaling\nseed: 3\nparams: {rho: [0.02, 0.01, 0.005]}\n");
  CHECK(a.hash == b.hash);
  CHECK(parse_config("experiment: scaling\nseed: 4\n").hash != a.hash);
}

TEST_CASE("empty parameter list gives a header-only CSV") {
  const fs::path root = scratch("empty");
  SweepOverrides ov;
  ov.out_root = root.string();
  const SweepOutcome o = run_sweep(parse_config("experiment: spectrum\nseed: 1\nparams: {d: []}\n"), ov);
  CHECK(o.points == 0);
  CHECK(o.rows == 0);
  const auto l = lines(o.csv_path);
  REQUIRE(l.size() == 1);
  CHECK(l[0].rfind("d,", 0) == 0);
  CHECK(fs::exists(fs::path(o.run_dir) / "manifest.json"));
  fs::remove_all(root);
}

TEST_CASE("spectrum sweep rows, replay and append-only run directories") {
  const fs::path root = scratch("spectrum");
  SweepOverrides ov;
  ov.out_root = root.string();
  const std::string yaml = "experiment: spectrum\nseed: 5\nparams: {d: [1, 4], n1: 40}\n";
  const SweepOutcome a = run_sweep(parse_config(yaml), ov);
  const SweepOutcome b = run_sweep(parse_config(yaml), ov);
  CHECK(a.rows == 2);
  CHECK(a.failures == 0);
  CHECK(a.run_dir != b.run_dir);
  CHECK(fs::path(a.run_dir).filename().string().substr(0, 9) == "spectrum-");
  CHECK(lines(a.csv_path) == lines(b.csv_path));
  const auto l = lines(a.csv_path);
  REQUIRE(l.size() == 3);
  CHECK(l[1].find(",ok") != std::string::npos);
  std::ifstream mf(fs::path(a.run_dir) / "manifest.json");
  std::stringstream ss;
  ss << mf.rdbuf();
  CHECK(ss.str().find("\"config_hash\"") != std::string::npos);
  CHECK(ss.str().find("\"versions\"") != std::string::npos);
  fs::remove_all(root);
}

TEST_CASE("failing points are isolated") {
  const fs::path root = scratch("fail");
  SweepOverrides ov;
  ov.out_root = root.string();
  const SweepOutcome o = run_sweep(parse_config("experiment: abrikosov\nseed: 1\nparams: {d: [1, 0], restarts: 2}\n"), ov);
  CHECK(o.rows == 2);
  CHECK(o.failures == 1);
  const auto l = lines(o.csv_path);
  REQUIRE(l.size() == 3);
  CHECK(l[1].find(",ok") != std::string::npos);
  CHECK(l[2].find("error: ") != std::string::npos);
  fs::remove_all(root);
}

TEST_CASE("output root precedence: override, then VTF_OUT, then config") {
  const fs::path cfg_root = scratch("cfg"), env_root = scratch("env"), ov_root = scratch("ov");
  const std::string yaml =
      "experiment: spectrum\nseed: 1\noutput: " + cfg_root.string() + "\nparams: {d: [], n1: 40}\n";
  ::setenv("VTF_OUT", env_root.string().c_str(), 1);
  SweepOverrides ov;
  ov.out_root = ov_root.string();
  CHECK(fs::path(run_sweep(parse_config(yaml), ov).run_dir).parent_path() == ov_root);
  CHECK(fs::path(run_sweep(parse_config(yaml)).run_dir).parent_path() == env_root);
  ::unsetenv("VTF_OUT");
  CHECK(fs::path(run_sweep(parse_config(yaml)).run_dir).parent_path() == cfg_root);
  for (const auto& p : {cfg_root, env_root, ov_root}) fs::remove_all(p);
}

TEST_CASE("CSV schemas carry the bookkeeping columns") {
  for (Experiment e : {Experiment::spectrum, Experiment::abrikosov, Experiment::homogeneous, Experiment::scaling,
                       Experiment::trapped, Experiment::lda}) {
    const auto c = csv_columns(e);
    CHECK(c[c.size() - 3] == "seed");
    CHECK(c[c.size() - 2] == "config_hash");
    CHECK(c.back() == "status");
    CHECK(experiment_from_string(to_string(e)) == e);
  }
}
