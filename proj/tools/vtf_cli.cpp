#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vtf/vtf.h"

namespace {

struct Common {
  std::string out;
  long long seed = -1;
  int threads = 0;
  bool snapshot = false;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--out", c.out, "Output root (overrides VTF_OUT and the config)");
  app->add_option("--seed", c.seed, "Seed")->check(CLI::NonNegativeNumber);
  app->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
  app->add_flag("--snapshot", c.snapshot, "Write field snapshots");
}

vtf_sweep_options options(const Common& c, bool seed_required) {
  vtf_sweep_options o{};
  o.out_root = c.out.empty() ? nullptr : c.out.c_str();
  o.threads = c.threads;
  o.snapshot = c.snapshot ? 1 : -1;
  o.seed_set = c.seed >= 0 || seed_required;
  o.seed = c.seed >= 0 ? static_cast<uint64_t>(c.seed) : 1;
  return o;
}

// key=v1,v2 -> "  key: [v1, v2]"
std::string param_line(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) throw CLI::ValidationError("--param", "expected key=v1,v2,...");
  std::string line = "  " + spec.substr(0, eq) + ": [";
  const std::string vals = spec.substr(eq + 1);
  std::size_t start = 0;
  bool first = true;
  while (start <= vals.size()) {
    const auto comma = vals.find(',', start);
    const std::string v = vals.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!v.empty()) {
      line += (first ? "" : ", ") + v;
      first = false;
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return line + "]\n";
}

int report(vtf_status s, const char* run_dir, const vtf_sweep_summary& sum) {
  if (s == VTF_OK || s == VTF_E_PARTIAL) {
    std::printf("%s\npoints %d rows %d failures %d\n", run_dir, sum.points, sum.rows, sum.failures);
    if (s == VTF_E_PARTIAL) std::fprintf(stderr, "warning: %s\n", vtf_last_error());
    return s;
  }
  std::fprintf(stderr, "error: %s\n", vtf_last_error());
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rotating-condensate variational solvers and sweeps"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(vtf_version()));

  const char* experiments[] = {"spectrum", "abrikosov", "homogeneous", "scaling", "trapped", "lda"};
  const char* help[] = {"Landau spectrum on a magnetic torus", "Abrikosov ratio minimization",
                        "Homogeneous GP on rectangles", "Low-density scaling law",
                        "Trapped GP and LLL minimization", "Local density approximation metrics"};
  Common common[6];
  std::vector<std::string> params[6];
  CLI::App* subs[6];
  for (int i = 0; i < 6; ++i) {
    subs[i] = app.add_subcommand(experiments[i], help[i]);
    add_common(subs[i], common[i]);
    subs[i]->add_option("-p,--param", params[i], "Parameter list key=v1,v2,... (repeatable)");
  }
  Common sweep_common;
  std::string config;
  CLI::App* sweep = app.add_subcommand("sweep", "Run a YAML sweep configuration");
  sweep->add_option("-c,--config", config, "Config file")->required()->check(CLI::ExistingFile);
  add_common(sweep, sweep_common);

  CLI11_PARSE(app, argc, argv);

  char run_dir[4096] = {0};
  vtf_sweep_summary sum{};
  if (*sweep) {
    const vtf_sweep_options o = options(sweep_common, false);
    return report(vtf_sweep_run_file(config.c_str(), &o, run_dir, sizeof run_dir, &sum), run_dir, sum);
  }
  for (int i = 0; i < 6; ++i) {
    if (!*subs[i]) continue;
    std::string yaml = std::string("experiment: ") + experiments[i] + "\nseed: " +
                       std::to_string(common[i].seed >= 0 ? common[i].seed : 1) + "\nparams:\n";
    try {
      for (const auto& p : params[i]) yaml += param_line(p);
    } catch (const CLI::Error& e) {
      return app.exit(e);
    }
    const vtf_sweep_options o = options(common[i], true);
    return report(vtf_sweep_run_yaml(yaml.c_str(), &o, run_dir, sizeof run_dir, &sum), run_dir, sum);
  }
  return 1;
}
