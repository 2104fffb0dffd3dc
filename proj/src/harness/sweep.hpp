#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace vtf {

enum class Experiment { spectrum, abrikosov, homogeneous, scaling, trapped, lda };

std::string to_string(Experiment e);
Experiment experiment_from_string(const std::string& s);

/// A scalar sweep value: numbers for most keys, strings for bc.
struct Value {
  double num = 0.0;
  std::string str;
  bool is_string = false;
};

struct SweepConfig {
  Experiment experiment = Experiment::spectrum;
  std::uint64_t seed = 0;
  std::string output = "vtf_out";
  bool snapshot = false;
  int threads = 1;
  /// Parameter lists in the experiment's canonical key order; missing keys
  /// take their defaults.
  std::vector<std::pair<std::string, std::vector<Value>>> params;
  std::string hash;  // of experiment, seed and params
};

/// Parses YAML text; errors carry the offending line and key.
SweepConfig parse_config(const std::string& yaml_text);
SweepConfig load_config(const std::string& path);

struct SweepOverrides {
  std::optional<std::string> out_root;  // beats VTF_OUT, which beats the config
  std::optional<int> threads;
  std::optional<bool> snapshot;
  std::optional<std::uint64_t> seed;
};

struct SweepOutcome {
  std::string run_dir;
  std::string csv_path;
  int points = 0;
  int rows = 0;
  int failures = 0;
};

/// Runs every point of the Cartesian product of the parameter lists, writes
/// <root>/<run id>/<experiment>.csv, manifest.json and optional snapshots.
SweepOutcome run_sweep(SweepConfig cfg, const SweepOverrides& ov = {});

/// CSV header of an experiment.
std::vector<std::string> csv_columns(Experiment e);

}  // namespace vtf
