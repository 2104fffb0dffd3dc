#include "harness/sweep.hpp"

#include <yaml-cpp/yaml.h>

#include <Eigen/Core>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

#include "core/abrikosov.hpp"
#include "core/error.hpp"
#include "core/homogeneous.hpp"
#include "core/lda.hpp"
#include "core/snapshot.hpp"
#include "core/tf.hpp"
#include "core/torus.hpp"
#include "core/trapped.hpp"
#include "core/vortex.hpp"
#include "harness/version.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace vtf {

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::spectrum: return "spectrum";
    case Experiment::abrikosov: return "abrikosov";
    case Experiment::homogeneous: return "homogeneous";
    case Experiment::scaling: return "scaling";
    case Experiment::trapped: return "trapped";
    case Experiment::lda: return "lda";
  }
  return "?";
}

Experiment experiment_from_string(const std::string& s) {
  for (Experiment e : {Experiment::spectrum, Experiment::abrikosov, Experiment::homogeneous, Experiment::scaling,
                       Experiment::trapped, Experiment::lda})
    if (to_string(e) == s) return e;
  fail(Errc::invalid_argument, "unknown experiment '" + s + "'");
}

namespace {

constexpr double kHexFallback = 1.1596;

Value num(double v) { return Value{v, {}, false}; }
Value str(const std::string& s) { return Value{0.0, s, true}; }

struct KeySpec {
  KeySpec(std::string n, std::vector<Value> d, bool s = false, std::string alt = {})
      : name(std::move(n)), def(std::move(d)), string_valued(s), alternative(std::move(alt)) {}
  std::string name;
  std::vector<Value> def;
  bool string_valued;
  std::string alternative;  // key that replaces this one when given
};

std::vector<KeySpec> key_specs(Experiment e) {
  switch (e) {
    case Experiment::spectrum:
      return {{"d", {num(4)}}, {"aspect", {num(1)}}, {"n1", {num(96)}}, {"k", {num(0)}}};
    case Experiment::abrikosov:
      return {{"d", {num(1)}}, {"aspect", {num(1)}}, {"restarts", {num(64)}}};
    case Experiment::homogeneous:
      return {{"bc", {str("periodic")}, true}, {"d", {num(4)}},  {"aspect", {num(1)}},
              {"rho", {num(0.02)}},            {"g", {num(1)}},  {"n1", {num(64)}}};
    case Experiment::scaling:
      return {{"d", {num(8)}}, {"aspect", {num(1)}}, {"g", {num(1)}}, {"n1", {num(96)}},
              {"rho", {num(0.02), num(0.01), num(0.005)}}};
    case Experiment::trapped:
      return {{"eps", {num(0.04)}, false, "omega"}, {"omega", {}},          {"delta", {num(0.8)}, false, "g"},
              {"g", {}},                            {"h", {num(0.1)}},      {"box", {num(0)}},
              {"N", {num(0)}}};
    case Experiment::lda:
      return {{"eps", {num(0.04)}, false, "omega"}, {"omega", {}},     {"delta", {num(0.8)}, false, "g"},
              {"g", {}},                            {"h", {num(0.1)}}, {"box", {num(0)}},
              {"N", {num(0)}},                      {"eta", {num(0)}}, {"bin", {num(0.05)}}};
  }
  return {};
}

std::string where(const YAML::Node& n) { return " (line " + std::to_string(n.Mark().line + 1) + ")"; }

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c == '\n' ? ' ' : c;
  }
  return q + "\"";
}

std::string fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string canonical(const SweepConfig& c) {
  std::string s = "experiment=" + to_string(c.experiment) + ";seed=" + std::to_string(c.seed);
  for (const auto& [k, vals] : c.params) {
    s += ";" + k + "=[";
    for (std::size_t i = 0; i < vals.size(); ++i) s += (i ? "," : "") + (vals[i].is_string ? vals[i].str : fmt(vals[i].num));
    s += "]";
  }
  return s;
}

}  // namespace

SweepConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    fail(Errc::invalid_argument, "config parse error at line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  require(root.IsMap(), Errc::invalid_argument, "config must be a YAML mapping");
  SweepConfig c;
  bool have_exp = false, have_seed = false;
  YAML::Node params;
  for (const auto& kv : root) {
    const std::string key = kv.first.as<std::string>();
    const YAML::Node& v = kv.second;
    try {
      if (key == "experiment") {
        c.experiment = experiment_from_string(v.as<std::string>());
        have_exp = true;
      } else if (key == "seed") {
        const long long s = v.as<long long>();
        require(s >= 0, Errc::invalid_argument, "seed must be nonnegative");
        c.seed = std::uint64_t(s);
        have_seed = true;
      } else if (key == "output") {
        c.output = v.as<std::string>();
      } else if (key == "snapshot") {
        c.snapshot = v.as<bool>();
      } else if (key == "threads") {
        c.threads = v.as<int>();
        require(c.threads >= 1, Errc::invalid_argument, "threads must be >= 1");
      } else if (key == "params") {
        require(v.IsMap() || v.IsNull(), Errc::invalid_argument, "params must be a mapping");
        params = v;
      } else {
        fail(Errc::invalid_argument, "unknown key");
      }
    } catch (const YAML::Exception& e) {
      fail(Errc::invalid_argument, "config field '" + key + "'" + where(kv.first) + ": " + e.msg);
    } catch (const Error& e) {
      fail(Errc::invalid_argument, "config field '" + key + "'" + where(kv.first) + ": " + e.what());
    }
  }
  require(have_exp, Errc::invalid_argument, "config lacks 'experiment'");
  require(have_seed, Errc::invalid_argument, "config lacks an explicit 'seed'");

  const auto specs = key_specs(c.experiment);
  std::map<std::string, std::pair<std::vector<Value>, YAML::Node>> given;
  if (params && params.IsMap())
    for (const auto& kv : params) {
      const std::string key = kv.first.as<std::string>();
      auto spec = std::find_if(specs.begin(), specs.end(), [&](const KeySpec& s) { return s.name == key; });
      require(spec != specs.end(), Errc::invalid_argument,
              "config field 'params." + key + "'" + where(kv.first) + ": not a parameter of " +
                  to_string(c.experiment));
      std::vector<Value> vals;
      auto read = [&](const YAML::Node& n) {
        try {
          if (spec->string_valued) {
            const std::string s = n.as<std::string>();
            boundary_from_string(s);
            vals.push_back(str(s));
          } else {
            const double d = n.as<double>();
            require(std::isfinite(d), Errc::invalid_argument, "not finite");
            vals.push_back(num(d));
          }
        } catch (const std::exception& e) {
          fail(Errc::invalid_argument, "config field 'params." + key + "'" + where(n) + ": bad value: " + e.what());
        }
      };
      if (kv.second.IsSequence())
        for (const auto& n : kv.second) read(n);
      else if (!kv.second.IsNull())
        read(kv.second);
      given[key] = {vals, kv.first};
    }
  for (const auto& s : specs) {
    auto it = given.find(s.name);
    if (it != given.end()) {
      if (!s.alternative.empty() && given.count(s.alternative))
        fail(Errc::invalid_argument, "config field 'params." + s.name + "'" + where(it->second.second) +
                                         ": conflicts with '" + s.alternative + "'");
      c.params.emplace_back(s.name, it->second.first);
    } else if (!s.def.empty() && !(s.alternative.size() && given.count(s.alternative))) {
      c.params.emplace_back(s.name, s.def);
    }
  }
  c.hash = fnv1a(canonical(c));
  return c;
}

SweepConfig load_config(const std::string& path) {
  std::ifstream in(path);
  require(bool(in), Errc::io, "cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<std::string> csv_columns(Experiment e) {
  std::vector<std::string> c;
  switch (e) {
    case Experiment::spectrum:
      c = {"d", "l1", "l2", "aspect", "n1", "n2", "k", "lambda_1", "lambda_d", "lambda_next", "multiplicity",
           "second_cluster_mean", "max_residual", "iters", "converged"};
      break;
    case Experiment::abrikosov:
      c = {"d", "l1", "l2", "aspect", "beta_min", "beta_square_trial", "beta_hex_trial", "restarts", "converged"};
      break;
    case Experiment::homogeneous:
      c = {"bc", "L1", "L2", "d", "rho", "g", "energy_total", "kinetic", "interaction", "lambda", "supnorm",
           "lll_fraction", "iters", "converged"};
      break;
    case Experiment::scaling:
      c = {"bc",     "L1",           "L2",          "d",        "rho",      "g",
           "energy_total", "kinetic", "interaction", "lambda", "supnorm", "lll_fraction",
           "iters",  "r",            "r_continuum", "lambda0",  "beta_min", "r_extrapolated",
           "converged"};
      break;
    case Experiment::trapped:
      c = {"omega", "g", "delta", "E_gp", "E_lll", "lambda", "outside_mass", "gap_normalized", "N", "grid", "iters",
           "E_lll_grid", "gap_raw_normalized", "converged"};
      break;
    case Experiment::lda:
      c = {"omega",        "g",           "delta",      "eta",   "L_tile", "E_gp",          "E_lll",
           "E_tf",         "ratio_gp",    "ratio_lll",  "l2",    "l2_times_Ltf", "dual_lip", "n_vortices",
           "ratio_gp_raw", "l2_lll",      "l2_times_Ltf_lll", "dual_lip_lll", "gap_normalized", "gap_raw_normalized", "e_ab",
           "e_ab_source",  "dual_lip_normalization", "converged"};
      break;
  }
  c.insert(c.end(), {"seed", "config_hash", "status"});
  return c;
}

namespace {

using Point = std::map<std::string, Value>;

struct Row {
  const std::vector<std::string>* cols;
  std::map<std::string, std::string> f;
  void set(const std::string& k, double v) { f[k] = fmt(v); }
  void set(const std::string& k, const std::string& v) { f[k] = v; }
  std::string line() const {
    std::string s;
    for (std::size_t i = 0; i < cols->size(); ++i) {
      auto it = f.find((*cols)[i]);
      s += (i ? "," : "") + csv_field(it == f.end() ? "nan" : it->second);
    }
    return s;
  }
};

struct PointResult {
  std::vector<Row> rows;
  int failures = 0;
  std::vector<std::string> files;
};

struct Context {
  const SweepConfig* cfg;
  const std::vector<std::string>* cols;
  fs::path run_dir;
  bool snapshot;
  std::once_flag eab_once;
  double e_ab = kHexFallback;
  std::string e_ab_source = "fallback";
};

int as_int(const Value& v, const std::string& key) {
  require(std::abs(v.num - std::round(v.num)) < 1e-12, Errc::invalid_argument, key + " must be an integer");
  return int(std::lround(v.num));
}

RegimeParams point_regime(const Point& p) {
  const double omega = p.count("omega") ? p.at("omega").num : std::sqrt(1.0 - p.at("eps").num);
  require(omega > 0.0 && omega < 1.0, Errc::invalid_argument, "omega must lie in (0, 1)");
  if (p.count("delta")) return regime_from_delta(omega, p.at("delta").num);
  return regime(omega, p.at("g").num);
}

void save(Context& ctx, PointResult& out, const ComplexField& u, const std::string& name) {
  if (!ctx.snapshot) return;
  const fs::path dir = ctx.run_dir / "snapshots";
  fs::create_directories(dir);
  write_snapshot(u, (dir / name).string());
  out.files.push_back("snapshots/" + name);
}

void hexagonal_eab(Context& ctx) {
  std::call_once(ctx.eab_once, [&] {
    try {
      const TorusSpec t = make_torus(2, std::sqrt(3.0));
      const LLLBasis b = lll_basis(t, abrikosov_grid(t));
      const AbrikosovEstimate est = minimize_quartic(b, 16, ctx.cfg->seed);
      if (est.converged && est.ratio >= 1.0) {
        ctx.e_ab = est.ratio;
        ctx.e_ab_source = "abrikosov:d=2,aspect=sqrt3";
      }
    } catch (const Error&) {
    }
  });
}

void run_spectrum(const Point& p, Context& ctx, std::size_t idx, PointResult& out, Row& r) {
  const int d = as_int(p.at("d"), "d"), n1 = as_int(p.at("n1"), "n1");
  int k = as_int(p.at("k"), "k");
  if (k <= 0) k = std::min(2 * d, 4 * d);
  r.set("d", d);
  r.set("aspect", p.at("aspect").num);
  r.set("n1", n1);
  r.set("k", k);
  const TorusSpec t = make_torus(d, p.at("aspect").num);
  r.set("l1", t.l1);
  r.set("l2", t.l2);
  const GridSpec g = torus_grid(t, n1);
  r.set("n2", g.ny);
  const SpectrumResult s = landau_spectrum(t, g, k, ctx.cfg->seed);
  int mult = 0;
  double second = 0.0;
  int nsecond = 0;
  for (double v : s.eigenvalues) {
    if (v < 2.0) ++mult;
    else if (v < 4.0) {
      second += v;
      ++nsecond;
    }
  }
  r.set("lambda_1", s.eigenvalues.front());
  r.set("lambda_d", d <= k ? s.eigenvalues[d - 1] : NAN);
  r.set("lambda_next", d < k ? s.eigenvalues[d] : NAN);
  r.set("multiplicity", mult);
  r.set("second_cluster_mean", nsecond ? second / nsecond : NAN);
  r.set("max_residual", *std::max_element(s.residuals.begin(), s.residuals.end()));
  r.set("iters", s.iterations);
  r.set("converged", 1);
  ComplexField u = make_field(g, 1.0);
  for (std::size_t n = 0; n < g.size(); ++n) u.values[n] = s.vectors(long(n), 0);
  save(ctx, out, u, "spectrum_" + std::to_string(idx) + ".vtf");
}

void run_abrikosov(const Point& p, Context& ctx, std::size_t idx, PointResult& out, Row& r) {
  const int d = as_int(p.at("d"), "d"), restarts = as_int(p.at("restarts"), "restarts");
  r.set("d", d);
  r.set("aspect", p.at("aspect").num);
  r.set("restarts", restarts);
  const TorusSpec t = make_torus(d, p.at("aspect").num);
  r.set("l1", t.l1);
  r.set("l2", t.l2);
  const LLLBasis b = lll_basis(t, abrikosov_grid(t));
  const AbrikosovEstimate est = minimize_quartic(b, restarts, ctx.cfg->seed);
  r.set("beta_min", est.ratio);
  r.set("beta_square_trial",
        lattice_compatible(t, LatticeType::square) ? quartic_ratio(b, lattice_trial(b, LatticeType::square)) : NAN);
  r.set("beta_hex_trial", lattice_compatible(t, LatticeType::hexagonal)
                              ? quartic_ratio(b, lattice_trial(b, LatticeType::hexagonal))
                              : NAN);
  r.set("converged", est.converged ? 1 : 0);
  require(est.ratio >= 1.0, Errc::numeric, "beta below 1");
  save(ctx, out, b.combine(est.coefficients), "abrikosov_" + std::to_string(idx) + ".vtf");
}

void run_homogeneous(const Point& p, Context& ctx, std::size_t idx, PointResult& out, Row& r) {
  const Boundary bc = boundary_from_string(p.at("bc").str);
  const int d = as_int(p.at("d"), "d"), n1 = as_int(p.at("n1"), "n1");
  const double rho = p.at("rho").num, g = p.at("g").num;
  r.set("bc", to_string(bc));
  r.set("d", d);
  r.set("rho", rho);
  r.set("g", g);
  const TorusSpec t = make_torus(d, p.at("aspect").num);
  r.set("L1", t.l1);
  r.set("L2", t.l2);
  const GridSpec grid = bc == Boundary::periodic ? torus_grid(t, n1) : square_grid(n1, t.l1, bc);
  require(bc == Boundary::periodic || std::abs(t.l1 - t.l2) < 1e-12, Errc::invalid_argument,
          "Dirichlet/Neumann boxes must be square (aspect 1)");
  const HomogeneousRun run = minimize_homogeneous(grid, rho * t.area(), g, ctx.cfg->seed);
  r.set("energy_total", run.energy.total);
  r.set("kinetic", run.energy.kinetic);
  r.set("interaction", run.energy.interaction);
  r.set("lambda", run.energy.multiplier);
  r.set("supnorm", supnorm_check(run).sup);
  r.set("lll_fraction", bc == Boundary::periodic ? lll_fraction(run, lll_basis(t, grid)) : NAN);
  r.set("iters", run.iterations);
  r.set("converged", run.converged ? 1 : 0);
  save(ctx, out, run.state, "homogeneous_" + std::to_string(idx) + ".vtf");
}

void run_scaling(const Point& p, Context& ctx, std::size_t idx, PointResult& out, const std::vector<Value>& rhos) {
  const int d = as_int(p.at("d"), "d"), n1 = as_int(p.at("n1"), "n1");
  const double g = p.at("g").num;
  std::vector<double> list;
  for (const auto& v : rhos) list.push_back(v.num);
  const TorusSpec t = make_torus(d, p.at("aspect").num);
  double beta = NAN;
  std::string beta_err;
  try {
    const LLLBasis b = lll_basis(t, abrikosov_grid(t));
    beta = minimize_quartic(b, 16, ctx.cfg->seed).ratio;
  } catch (const Error& e) {
    beta_err = e.what();
  }
  const ScalingTable tab = scaling_law_sweep(t, g, list, n1, ctx.cfg->seed);
  (void)idx;
  for (const ScalingRow& s : tab.rows) {
    Row r{ctx.cols, {}};
    r.set("bc", "periodic");
    r.set("L1", t.l1);
    r.set("L2", t.l2);
    r.set("d", d);
    r.set("rho", s.rho);
    r.set("g", g);
    r.set("beta_min", beta);
    r.set("r_extrapolated", tab.r_extrapolated);
    r.set("lambda0", s.lambda0);
    if (s.error.empty()) {
      r.set("energy_total", s.energy);
      r.set("kinetic", s.kinetic);
      r.set("interaction", s.interaction);
      r.set("lambda", s.multiplier);
      r.set("supnorm", s.supnorm);
      r.set("lll_fraction", s.lll_fraction);
      r.set("iters", s.iterations);
      r.set("r", s.r);
      r.set("r_continuum", s.r_continuum);
      r.set("converged", s.converged ? 1 : 0);
      r.set("status", beta_err.empty() ? "ok" : "error: beta_min: " + beta_err);
    } else {
      r.set("status", "error: " + s.error);
      ++out.failures;
    }
    out.rows.push_back(r);
  }
}

void run_trapped(const Point& p, Context& ctx, std::size_t idx, PointResult& out, Row& r) {
  const RegimeParams rp = point_regime(p);
  r.set("omega", rp.omega);
  r.set("g", rp.g);
  r.set("delta", rp.delta ? *rp.delta : NAN);
  const double box = p.at("box").num > 0 ? p.at("box").num : default_box_radius(rp);
  const int N = as_int(p.at("N"), "N") > 0 ? as_int(p.at("N"), "N") : default_degree(rp);
  r.set("N", N);
  const GapResult gap = gp_lll_gap(rp, box, p.at("h").num, N, ctx.cfg->seed);
  r.set("grid", gap.gp.grid.nodes_x());
  r.set("E_gp", gap.e_gp);
  r.set("E_lll", gap.e_lll);
  r.set("lambda", gap.gp.energy.multiplier);
  r.set("outside_mass", gap.gp.outside_mass);
  r.set("gap_normalized", gap.gap_normalized);
  r.set("E_lll_grid", gap.e_lll_grid);
  r.set("gap_raw_normalized", gap.gap_raw_normalized);
  r.set("iters", gap.gp.iterations);
  r.set("converged", gap.gp.converged && gap.lll.converged ? 1 : 0);
  save(ctx, out, gap.gp.state, "trapped_" + std::to_string(idx) + ".vtf");
}

void run_lda(const Point& p, Context& ctx, std::size_t idx, PointResult& out, Row& r) {
  const RegimeParams rp = point_regime(p);
  r.set("omega", rp.omega);
  r.set("g", rp.g);
  r.set("delta", rp.delta ? *rp.delta : NAN);
  hexagonal_eab(ctx);
  r.set("e_ab", ctx.e_ab);
  r.set("e_ab_source", ctx.e_ab_source);
  r.set("dual_lip_normalization", "centered-lipschitz");
  const TFProfile tf = tf_profile(rp, ctx.e_ab, ctx.e_ab_source);
  r.set("E_tf", tf.energy);
  const double eta = p.at("eta").num;
  const TilingSpec tiling = make_tiling(tf, eta > 0 ? std::optional<double>(eta) : std::nullopt);
  r.set("eta", tiling.eta);
  r.set("L_tile", tiling.side);
  const double box = p.at("box").num > 0 ? p.at("box").num : default_box_radius(rp);
  const int N = as_int(p.at("N"), "N") > 0 ? as_int(p.at("N"), "N") : default_degree(rp);
  const GapResult gap = gp_lll_gap(rp, box, p.at("h").num, N, ctx.cfg->seed);
  LDAOptions opt;
  opt.bin = p.at("bin").num;
  const LDAReport rep = lda_report(gap.gp, gap.lll, tf, tiling, opt);
  r.set("E_gp", rep.e_gp);
  r.set("E_lll", rep.e_lll);
  r.set("ratio_gp", rep.gp.energy_ratio);
  r.set("ratio_gp_raw", rep.gp.energy_ratio_raw);
  r.set("ratio_lll", rep.lll.energy_ratio);
  r.set("l2", rep.gp.l2_distance);
  r.set("l2_times_Ltf", rep.gp.l2_times_ltf);
  r.set("dual_lip", rep.gp.dual_lipschitz);
  r.set("l2_lll", rep.lll.l2_distance);
  r.set("l2_times_Ltf_lll", rep.lll.l2_times_ltf);
  r.set("dual_lip_lll", rep.lll.dual_lipschitz);
  r.set("gap_normalized", gap.gap_normalized);
  r.set("gap_raw_normalized", gap.gap_raw_normalized);
  r.set("n_vortices", rep.n_vortices);
  r.set("converged", gap.gp.converged && gap.lll.converged ? 1 : 0);
  std::ofstream(ctx.run_dir / ("tf_" + std::to_string(idx) + ".json")) << tf_json(tf) << "\n";
  out.files.push_back("tf_" + std::to_string(idx) + ".json");
  if (!tiling.eta_admissible) r.set("status", "ok: eta outside the admissible interval");
  save(ctx, out, gap.gp.state, "lda_gp_" + std::to_string(idx) + ".vtf");
}

fs::path output_root(const SweepConfig& cfg, const SweepOverrides& ov) {
  if (ov.out_root) return *ov.out_root;
  if (const char* env = std::getenv("VTF_OUT"); env && *env) return env;
  return cfg.output;
}

}  // namespace

SweepOutcome run_sweep(SweepConfig cfg, const SweepOverrides& ov) {
  if (ov.seed) {
    cfg.seed = *ov.seed;
    cfg.hash = fnv1a(canonical(cfg));
  }
  if (ov.threads) cfg.threads = *ov.threads;
  if (ov.snapshot) cfg.snapshot = *ov.snapshot;
  require(cfg.threads >= 1, Errc::invalid_argument, "threads must be >= 1");
  const auto t0 = std::chrono::steady_clock::now();

  const fs::path root = output_root(cfg, ov);
  fs::create_directories(root);
  fs::path run_dir;
  for (int n = 1;; ++n) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%03d", n);
    run_dir = root / (to_string(cfg.experiment) + "-" + cfg.hash.substr(0, 12) + "-" + buf);
    if (fs::create_directory(run_dir)) break;
    require(n < 100000, Errc::io, "cannot allocate a run directory under " + root.string());
  }

  // Cartesian product in key order; scaling keeps rho as a per-point list.
  std::vector<std::pair<std::string, std::vector<Value>>> axes;
  std::vector<Value> rho_group;
  for (const auto& kv : cfg.params) {
    if (cfg.experiment == Experiment::scaling && kv.first == "rho") rho_group = kv.second;
    else axes.push_back(kv);
  }
  std::vector<Point> points;
  std::size_t total = 1;
  for (const auto& a : axes) total *= a.second.size();
  if (cfg.experiment == Experiment::scaling && rho_group.empty()) total = 0;
  for (std::size_t i = 0; i < total; ++i) {
    Point p;
    std::size_t rem = i;
    for (std::size_t k = axes.size(); k-- > 0;) {
      const auto& vals = axes[k].second;
      p[axes[k].first] = vals[rem % vals.size()];
      rem /= vals.size();
    }
    points.push_back(p);
  }

  const std::vector<std::string> cols = csv_columns(cfg.experiment);
  Context ctx;
  ctx.cfg = &cfg;
  ctx.cols = &cols;
  ctx.run_dir = run_dir;
  ctx.snapshot = cfg.snapshot;

  SweepOutcome outcome;
  outcome.run_dir = run_dir.string();
  outcome.csv_path = (run_dir / (to_string(cfg.experiment) + ".csv")).string();
  outcome.points = int(points.size());
  std::ofstream csv(outcome.csv_path);
  require(bool(csv), Errc::io, "cannot write " + outcome.csv_path);
  for (std::size_t i = 0; i < cols.size(); ++i) csv << (i ? "," : "") << cols[i];
  csv << "\n";
  csv.flush();

  std::vector<std::optional<PointResult>> results(points.size());
  std::vector<std::string> files;
  std::mutex mu;
  std::size_t written = 0;
  auto flush_ready = [&] {
    while (written < results.size() && results[written]) {
      for (Row& r : results[written]->rows) {
        r.set("seed", std::to_string(cfg.seed));
        r.set("config_hash", cfg.hash);
        if (!r.f.count("status")) r.set("status", "ok");
        csv << r.line() << "\n";
        ++outcome.rows;
      }
      outcome.failures += results[written]->failures;
      files.insert(files.end(), results[written]->files.begin(), results[written]->files.end());
      results[written].reset();
      results[written].emplace();  // keep the slot non-empty
      ++written;
    }
    csv.flush();
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      PointResult pr;
      Row r{&cols, {}};
      try {
        switch (cfg.experiment) {
          case Experiment::spectrum: run_spectrum(points[i], ctx, i, pr, r); break;
          case Experiment::abrikosov: run_abrikosov(points[i], ctx, i, pr, r); break;
          case Experiment::homogeneous: run_homogeneous(points[i], ctx, i, pr, r); break;
          case Experiment::scaling: run_scaling(points[i], ctx, i, pr, rho_group); break;
          case Experiment::trapped: run_trapped(points[i], ctx, i, pr, r); break;
          case Experiment::lda: run_lda(points[i], ctx, i, pr, r); break;
        }
      } catch (const std::exception& e) {
        r.set("status", std::string("error: ") + e.what());
        ++pr.failures;
        if (cfg.experiment == Experiment::scaling) {
          for (const auto& v : rho_group) {
            Row e2 = r;
            e2.set("rho", v.num);
            pr.rows.push_back(e2);
          }
          pr.failures = int(rho_group.size());
        }
      }
      if (cfg.experiment != Experiment::scaling) pr.rows.push_back(r);
      std::lock_guard<std::mutex> lock(mu);
      results[i] = std::move(pr);
      flush_ready();
    }
  };
  const int nt = std::max(1, std::min<int>(cfg.threads, int(points.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  csv.close();

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [k, vals] : cfg.params) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& v : vals) a.push_back(v.is_string ? nlohmann::json(v.str) : nlohmann::json(v.num));
    params[k] = a;
  }
  nlohmann::json m = {
      {"run_id", run_dir.filename().string()},
      {"experiment", to_string(cfg.experiment)},
      {"config_hash", cfg.hash},
      {"config", {{"experiment", to_string(cfg.experiment)}, {"seed", cfg.seed}, {"params", params}}},
      {"seeds", {cfg.seed}},
      {"threads", nt},
      {"snapshot", cfg.snapshot},
      {"versions",
       {{"vtf", kVersion},
        {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                      std::to_string(EIGEN_MINOR_VERSION)},
        {"compiler", __VERSION__}}},
      {"wall_time_s", wall},
      {"points", outcome.points},
      {"rows", outcome.rows},
      {"failures", outcome.failures},
      {"csv", fs::path(outcome.csv_path).filename().string()},
      {"files", files}};
  std::ofstream(run_dir / "manifest.json") << m.dump(2) << "\n";
  return outcome;
}

}  // namespace vtf
