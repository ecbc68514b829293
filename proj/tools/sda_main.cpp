//! \file sda_main.cpp
//! \brief Command-line front end: profile generation, group aggregation,
//!        grid sweeps, asymptotic reports, simulation, and calibration.
//!
//! Every command writes its primary data file plus `<out>.meta.json` with
//! summary scalars where applicable and `<out>.manifest.json` recording the
//! command, resolved parameters, seed, version, timestamp, and content
//! digests of all emitted files. Reruns with identical parameters reproduce
//! identical data digests (manifest timestamps excluded). Exit codes:
//! 0 success, 2 usage error, 3 numerical failure.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sda/aggregation.hpp"
#include "sda/asymptotics.hpp"
#include "sda/calibration.hpp"
#include "sda/montecarlo.hpp"
#include "sda/profile.hpp"
#include "sda/sprt.hpp"

using nlohmann::json;

namespace {

constexpr const char* kVersion = "1.0.0";

// ---------------------------------------------------------------------------
// Logging, controlled by the SDA_LOG environment variable
// (debug|info|warn|error|off; default warn).

int log_threshold() {
  static const int level = [] {
    const char* e = std::getenv("SDA_LOG");
    if (e == nullptr) return 2;
    const std::string s(e);
    if (s == "debug") return 0;
    if (s == "info") return 1;
    if (s == "warn") return 2;
    if (s == "error") return 3;
    if (s == "off") return 4;
    return 2;
  }();
  return level;
}

void log_at(int level, const char* tag, const std::string& msg) {
  if (level >= log_threshold()) {
    std::cerr << "[sda " << tag << "] " << msg << "\n";
  }
}

void log_info(const std::string& msg) { log_at(1, "info", msg); }
void log_warn(const std::string& msg) { log_at(2, "warn", msg); }

// ---------------------------------------------------------------------------
// Small utilities

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json num_or_string(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "infinity" : "-infinity";
}

uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot reopen output for digest: " + path);
  uint64_t h = 0xcbf29ce484222325ULL;
  char buf[4096];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

std::string iso_timestamp() {
  std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_json_file(const std::string& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

std::vector<int> parse_grid(const std::string& s) {
  const auto p1 = s.find(':');
  if (p1 == std::string::npos) return {std::stoi(s)};
  const auto p2 = s.find(':', p1 + 1);
  if (p2 == std::string::npos) {
    throw std::invalid_argument("grid must be start:step:stop, got: " + s);
  }
  const int start = std::stoi(s.substr(0, p1));
  const int step = std::stoi(s.substr(p1 + 1, p2 - p1 - 1));
  const int stop = std::stoi(s.substr(p2 + 1));
  if (step < 1) throw std::invalid_argument("grid step must be >= 1");
  std::vector<int> v;
  for (int x = start; x <= stop; x += step) v.push_back(x);
  if (v.empty()) throw std::invalid_argument("grid is empty: " + s);
  return v;
}

std::vector<double> parse_targets(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) v.push_back(std::stod(item));
  }
  if (v.empty()) throw std::invalid_argument("no targets given");
  return v;
}

// ---------------------------------------------------------------------------
// Shared argument bundles

struct GlobalArgs {
  std::string format = "csv";
  std::string out;
  uint64_t seed = 12345;
  double tail_tol = sda::kDefaultTailTol;
  int horizon = 0;
};

struct ModelArgs {
  std::string dist = "gaussian";
  double theta0 = std::numeric_limits<double>::quiet_NaN();
  double theta1 = std::numeric_limits<double>::quiet_NaN();
  double sigma = std::numeric_limits<double>::quiet_NaN();
  int n_obs = 5;
  double eps = 0.05;
  double p_md = 0.1;
  double p_fa = 0.1;
  double eta0 = std::numeric_limits<double>::quiet_NaN();
  double eta1 = std::numeric_limits<double>::quiet_NaN();
  double delta = 0.0;
};

void add_model_flags(CLI::App* cmd, ModelArgs& m) {
  cmd->add_option("--dist", m.dist, "Observation model (gaussian|binomial)")
      ->check(CLI::IsMember({"gaussian", "binomial"}));
  cmd->add_option("--theta0", m.theta0,
                  "Hypothesis-0 parameter (gaussian default 0; binomial "
                  "default 0.5 - eps)");
  cmd->add_option("--theta1", m.theta1,
                  "Hypothesis-1 parameter (gaussian default 1; binomial "
                  "default 0.5 + eps)");
  cmd->add_option("--sigma", m.sigma,
                  "Gaussian observation noise (required for gaussian)");
  cmd->add_option("--n-obs", m.n_obs, "Binomial trials per observation step");
  cmd->add_option("--eps", m.eps, "Binomial separation: theta = 0.5 -/+ eps");
  cmd->add_option("--p-md", m.p_md, "Design mis-detection rate");
  cmd->add_option("--p-fa", m.p_fa, "Design false-alarm rate");
  cmd->add_option("--eta0", m.eta0, "Explicit lower threshold (overrides "
                                    "--p-md/--p-fa)");
  cmd->add_option("--eta1", m.eta1, "Explicit upper threshold");
  cmd->add_option("--delta", m.delta,
                  "Gaussian lattice step (0 = automatic)");
}

sda::SprtModel build_model(const ModelArgs& m) {
  double e0 = m.eta0, e1 = m.eta1;
  if (std::isnan(e0) || std::isnan(e1)) {
    const sda::WaldThresholds w = sda::wald_thresholds(m.p_md, m.p_fa);
    e0 = w.eta0;
    e1 = w.eta1;
  }
  if (m.dist == "gaussian") {
    if (std::isnan(m.sigma)) {
      throw std::invalid_argument(
          "gaussian model requires --sigma (no default)");
    }
    const double t0 = std::isnan(m.theta0) ? 0.0 : m.theta0;
    const double t1 = std::isnan(m.theta1) ? 1.0 : m.theta1;
    return sda::make_gaussian_model(t0, t1, m.sigma, e0, e1);
  }
  const double t0 = std::isnan(m.theta0) ? 0.5 - m.eps : m.theta0;
  const double t1 = std::isnan(m.theta1) ? 0.5 + m.eps : m.theta1;
  return sda::make_binomial_model(m.n_obs, t0, t1, e0, e1);
}

json model_params(const ModelArgs& m) {
  json p;
  p["dist"] = m.dist;
  if (!std::isnan(m.theta0)) p["theta0"] = m.theta0;
  if (!std::isnan(m.theta1)) p["theta1"] = m.theta1;
  if (!std::isnan(m.sigma)) p["sigma"] = m.sigma;
  if (m.dist == "binomial") {
    p["n_obs"] = m.n_obs;
    p["eps"] = m.eps;
  }
  if (!std::isnan(m.eta0)) {
    p["eta0"] = m.eta0;
    p["eta1"] = m.eta1;
  } else {
    p["p_md"] = m.p_md;
    p["p_fa"] = m.p_fa;
  }
  if (m.delta != 0.0) p["delta"] = m.delta;
  return p;
}

//! Where a command gets its single-agent profile from: an existing CSV or a
//! freshly generated model profile. Generated profiles use a 1000x tighter
//! tail than the group-level tolerance so the group's never-decide residual
//! stays below the group tolerance.
struct SourceArgs {
  std::string profile_path;
  ModelArgs model;
};

void add_source_flags(CLI::App* cmd, SourceArgs& s) {
  cmd->add_option("--profile", s.profile_path,
                  "Read the agent profile from this CSV instead of "
                  "generating one from model flags");
  add_model_flags(cmd, s.model);
}

sda::DecisionProfile load_source(const SourceArgs& s, double tail_tol) {
  if (!s.profile_path.empty()) return sda::read_profile_csv(s.profile_path);
  return sda::sprt_profile(build_model(s.model), tail_tol * 1e-3, 0,
                           s.model.delta);
}

json source_params(const SourceArgs& s) {
  if (!s.profile_path.empty()) return json{{"profile", s.profile_path}};
  return model_params(s.model);
}

// ---------------------------------------------------------------------------
// Manifest plumbing

void write_manifest(const std::string& main_out, const std::string& command,
                    json params, uint64_t seed,
                    const std::vector<std::string>& outputs) {
  json m;
  m["command"] = command;
  m["params"] = std::move(params);
  m["seed"] = seed;
  m["version"] = kVersion;
  m["timestamp"] = iso_timestamp();
  m["outputs"] = json::array();
  for (const std::string& path : outputs) {
    std::ifstream probe(path, std::ios::binary | std::ios::ate);
    const long long bytes = probe ? static_cast<long long>(probe.tellg()) : -1;
    char digest[24];
    std::snprintf(digest, sizeof digest, "%016llx",
                  static_cast<unsigned long long>(fnv1a64_file(path)));
    m["outputs"].push_back(
        json{{"path", path}, {"bytes", bytes}, {"fnv1a64", digest}});
  }
  write_json_file(main_out + ".manifest.json", m);
}

std::string default_out(const GlobalArgs& g, const std::string& stem,
                        bool always_json = false) {
  if (!g.out.empty()) return g.out;
  return stem + (always_json || g.format == "json" ? ".json" : ".csv");
}

// ---------------------------------------------------------------------------
// Commands

json profile_to_json(const sda::DecisionProfile& p) {
  auto branch = [](const sda::HypothesisProfile& h) {
    return json{{"p_say0", h.p_say0},
                {"p_say1", h.p_say1},
                {"p_nd", h.p_nd}};
  };
  return json{{"schema", "sda.profile.v1"},
              {"t_max", p.t_max()},
              {"under_h0", branch(p.under_h0)},
              {"under_h1", branch(p.under_h1)}};
}

void cmd_profile(const GlobalArgs& g, const ModelArgs& margs) {
  const sda::SprtModel model = build_model(margs);
  const sda::DecisionProfile prof =
      sda::sprt_profile(model, g.tail_tol, g.horizon, margs.delta);
  const std::string out = default_out(g, "profile");
  std::vector<std::string> outputs;
  if (g.format == "json") {
    write_json_file(out, profile_to_json(prof));
    outputs = {out};
  } else {
    sda::write_profile_csv(prof, out);
    outputs = {out, out + ".meta.json"};
  }
  json params = model_params(margs);
  params["tail_tol"] = g.tail_tol;
  params["horizon"] = g.horizon;
  params["format"] = g.format;
  write_manifest(out, "profile", params, g.seed, outputs);
  std::cout << "wrote " << out << " (t_max=" << prof.t_max() << ")\n";
}

json outcome_meta(const sda::GroupOutcome& o) {
  return json{{"p_c", o.p_c},
              {"p_w", o.p_w},
              {"p_nd", o.p_nd},
              {"e_t", num_or_string(o.e_t)},
              {"e_t_conditional", num_or_string(o.e_t_conditional)},
              {"n", o.n},
              {"q", o.q},
              {"hypothesis", o.hypothesis}};
}

void cmd_aggregate(const GlobalArgs& g, const SourceArgs& src, int n, int q,
                   int hypothesis) {
  const sda::DecisionProfile prof = load_source(src, g.tail_tol);
  sda::AggregateOptions opts;
  opts.horizon = g.horizon;
  opts.tail_tol = g.tail_tol;
  const sda::GroupOutcome o =
      sda::aggregate_under(prof, sda::GroupSpec{n, q}, hypothesis, opts);
  const std::string out = default_out(g, "group");
  std::vector<std::string> outputs;
  if (g.format == "json") {
    json j = outcome_meta(o);
    j["schema"] = "sda.group.v1";
    j["p0"] = o.p0;
    j["p1"] = o.p1;
    write_json_file(out, j);
    outputs = {out};
  } else {
    std::ostringstream csv;
    csv << "# schema: sda.group.v1\n";
    csv << "t,p0_group,p1_group\n";
    for (size_t i = 0; i < o.p0.size(); ++i) {
      csv << (i + 1) << ',' << fmt_double(o.p0[i]) << ','
          << fmt_double(o.p1[i]) << '\n';
    }
    write_text(out, csv.str());
    write_json_file(out + ".meta.json", outcome_meta(o));
    outputs = {out, out + ".meta.json"};
  }
  json params = source_params(src);
  params["n"] = n;
  params["q"] = q;
  params["hypothesis"] = hypothesis;
  params["tail_tol"] = g.tail_tol;
  params["horizon"] = g.horizon;
  write_manifest(out, "aggregate", params, g.seed, outputs);
  std::cout << "n=" << n << " q=" << q << " p_c=" << o.p_c << " p_w=" << o.p_w
            << " p_nd=" << o.p_nd << " e_t=" << o.e_t << "\n";
  std::cout << "wrote " << out << "\n";
}

void cmd_sweep(const GlobalArgs& g, const SourceArgs& src,
               const std::string& grid, const std::string& rule,
               int hypothesis) {
  const sda::DecisionProfile prof = load_source(src, g.tail_tol);
  const std::vector<int> ns = parse_grid(grid);
  sda::AggregateOptions opts;
  opts.horizon = g.horizon;
  opts.tail_tol = g.tail_tol;

  struct Row {
    int n, q;
    double p_c, p_w, p_nd, e_t;
  };
  std::vector<Row> rows;
  for (int n : ns) {
    std::vector<int> qs;
    if (rule == "fastest") {
      qs = {1};
    } else if (rule == "majority") {
      qs = {n / 2 + 1};
    } else {
      for (int q = 1; q <= n; ++q) qs.push_back(q);
    }
    for (int q : qs) {
      Row r{n, q, std::nan(""), std::nan(""), std::nan(""), std::nan("")};
      try {
        const sda::GroupOutcome o =
            sda::aggregate_under(prof, sda::GroupSpec{n, q}, hypothesis, opts);
        r.p_c = o.p_c;
        r.p_w = o.p_w;
        r.p_nd = o.p_nd;
        r.e_t = o.e_t;
      } catch (const std::exception& e) {
        log_warn("sweep cell N=" + std::to_string(n) + " q=" +
                 std::to_string(q) + " failed: " + e.what());
      }
      rows.push_back(r);
    }
  }
  const std::string out = default_out(g, "sweep");
  std::vector<std::string> outputs{out};
  if (g.format == "json") {
    json arr = json::array();
    for (const Row& r : rows) {
      arr.push_back(json{{"N", r.n},
                         {"q", r.q},
                         {"p_c", num_or_string(r.p_c)},
                         {"p_w", num_or_string(r.p_w)},
                         {"p_nd", num_or_string(r.p_nd)},
                         {"e_t", num_or_string(r.e_t)}});
    }
    write_json_file(out, json{{"schema", "sda.sweep.v1"}, {"rows", arr}});
  } else {
    std::ostringstream csv;
    csv << "# schema: sda.sweep.v1\n";
    csv << "N,q,p_c,p_w,p_nd,e_t\n";
    for (const Row& r : rows) {
      csv << r.n << ',' << r.q << ',' << fmt_double(r.p_c) << ','
          << fmt_double(r.p_w) << ',' << fmt_double(r.p_nd) << ','
          << fmt_double(r.e_t) << '\n';
    }
    write_text(out, csv.str());
  }
  json params = source_params(src);
  params["n_grid"] = grid;
  params["rule"] = rule;
  params["hypothesis"] = hypothesis;
  params["tail_tol"] = g.tail_tol;
  params["horizon"] = g.horizon;
  write_manifest(out, "sweep", params, g.seed, outputs);
  std::cout << "wrote " << out << " (" << rows.size() << " rows)\n";
}

const char* case_name(sda::MajorityCaseTag tag) {
  switch (tag) {
    case sda::MajorityCaseTag::kA1: return "A1";
    case sda::MajorityCaseTag::kA2: return "A2";
    case sda::MajorityCaseTag::kA3: return "A3";
    case sda::MajorityCaseTag::kA4: return "A4";
    default: return "indeterminate";
  }
}

void cmd_asymptotics(const GlobalArgs& g, const SourceArgs& src,
                     int hypothesis, bool suite, const std::string& grid) {
  const sda::DecisionProfile prof = load_source(src, g.tail_tol);
  json j;
  j["schema"] = "sda.asymptotics.v1";
  try {
    const sda::FastestLimits fl = sda::fastest_limits(prof, hypothesis);
    j["fastest"] = json{{"t_bar", fl.t_bar},
                        {"limit_pw", fl.limit_pw},
                        {"limit_et", fl.limit_et}};
  } catch (const std::exception& e) {
    j["fastest"] = json{{"error", e.what()}};
  }
  try {
    const sda::MajorityTimeCase mc = sda::majority_et_limit(prof, hypothesis);
    j["majority"] = json{{"case", case_name(mc.tag)},
                         {"t_lt_half", mc.t_lt_half},
                         {"t_gt_half", mc.t_gt_half},
                         {"t0", mc.t0},
                         {"t1", mc.t1},
                         {"limit_et", num_or_string(mc.limit_et)},
                         {"note", mc.note}};
  } catch (const std::exception& e) {
    j["majority"] = json{{"error", e.what()}};
  }
  if (suite) {
    const sda::MonotonicityReport rep =
        sda::monotonicity_suite(prof, parse_grid(grid), {}, hypothesis);
    json rows = json::array();
    for (const auto& r : rep.rows) {
      rows.push_back(json{{"N", r.n},
                          {"q", r.q},
                          {"metric", r.metric},
                          {"value", num_or_string(r.value)},
                          {"monotone_ok", r.monotone_ok}});
    }
    j["monotonicity"] = json{{"rows", rows},
                             {"theorems_ok", rep.theorems_ok},
                             {"findings", rep.findings}};
  }
  const std::string out = default_out(g, "asymptotics", /*always_json=*/true);
  write_json_file(out, j);
  json params = source_params(src);
  params["hypothesis"] = hypothesis;
  if (suite) params["n_grid"] = grid;
  write_manifest(out, "asymptotics", params, g.seed, {out});
  std::cout << "wrote " << out << "\n";
}

void cmd_simulate(const GlobalArgs& g, const SourceArgs& src, int n, int q,
                  long long replicates, int hypothesis) {
  sda::EmpiricalOutcome emp;
  json params;
  if (!src.profile_path.empty()) {
    const sda::DecisionProfile prof = sda::read_profile_csv(src.profile_path);
    emp = sda::simulate_profile_group(prof, sda::GroupSpec{n, q}, hypothesis,
                                      replicates, g.seed, g.horizon);
    params = json{{"profile", src.profile_path}, {"source", "profile"}};
  } else {
    const sda::SprtModel model = build_model(src.model);
    int horizon = g.horizon;
    if (horizon <= 0) {
      horizon = 1000;
      log_info("model simulation horizon defaulted to 1000");
    }
    emp = sda::simulate_model_group(model, sda::GroupSpec{n, q}, hypothesis,
                                    replicates, g.seed, horizon);
    params = model_params(src.model);
    params["source"] = "model";
  }
  params["n"] = n;
  params["q"] = q;
  params["replicates"] = replicates;
  params["hypothesis"] = hypothesis;
  params["horizon"] = g.horizon;

  json meta{{"schema", "sda.empirical.v1"},
            {"replicates", emp.replicates},
            {"horizon", emp.horizon},
            {"seed", g.seed},
            {"count_nd", emp.count_nd},
            {"freq_nd", emp.freq_nd},
            {"decided", emp.decided},
            {"mean_time", emp.mean_time},
            {"mean_time_se", emp.mean_time_se}};
  const std::string out = default_out(g, "empirical");
  std::vector<std::string> outputs;
  if (g.format == "json") {
    json j = meta;
    j["count0"] = emp.count0;
    j["count1"] = emp.count1;
    j["freq0"] = emp.freq0;
    j["freq1"] = emp.freq1;
    write_json_file(out, j);
    outputs = {out};
  } else {
    std::ostringstream csv;
    csv << "# schema: sda.empirical.v1\n";
    csv << "t,count0,count1,freq0,freq1,se0,se1\n";
    for (size_t i = 0; i < emp.count0.size(); ++i) {
      csv << (i + 1) << ',' << emp.count0[i] << ',' << emp.count1[i] << ','
          << fmt_double(emp.freq0[i]) << ',' << fmt_double(emp.freq1[i]) << ','
          << fmt_double(sda::binomial_se(emp.freq0[i], emp.replicates)) << ','
          << fmt_double(sda::binomial_se(emp.freq1[i], emp.replicates))
          << '\n';
    }
    write_text(out, csv.str());
    write_json_file(out + ".meta.json", meta);
    outputs = {out, out + ".meta.json"};
  }
  write_manifest(out, "simulate", params, g.seed, outputs);
  std::cout << "wrote " << out << " (decided " << emp.decided << "/"
            << emp.replicates << ")\n";
}

void cmd_calibrate(const GlobalArgs& g, const ModelArgs& margs, double target,
                   int n, const std::string& rule, const std::string& bracket,
                   int hypothesis) {
  sda::CalibrationTask task;
  task.target_pw = target;
  task.n = n;
  task.rule = rule == "majority" ? sda::FusionRule::kMajority
                                 : sda::FusionRule::kFastest;
  task.model = build_model(margs);
  task.hypothesis = hypothesis;
  task.tail_tol = g.tail_tol;
  const auto colon = bracket.find(':');
  if (colon == std::string::npos) {
    throw std::invalid_argument("bracket must be lo:hi, got: " + bracket);
  }
  task.eta_lo = std::stod(bracket.substr(0, colon));
  task.eta_hi = std::stod(bracket.substr(colon + 1));
  const sda::CalibrationResult res = sda::calibrate(task);

  json j{{"schema", "sda.calibration.v1"},
         {"target", target},
         {"n", n},
         {"rule", rule},
         {"eta", res.eta},
         {"achieved_pw", res.achieved_pw},
         {"group_expected_t", num_or_string(res.group_expected_t)},
         {"iterations", res.iterations},
         {"converged", res.converged}};
  const std::string out = default_out(g, "calibration");
  std::vector<std::string> outputs{out};
  if (g.format == "json") {
    write_json_file(out, j);
  } else {
    std::ostringstream csv;
    csv << "# schema: sda.calibration.v1\n";
    csv << "target,n,rule,eta,achieved_pw,group_expected_t,iterations,"
           "converged\n";
    csv << fmt_double(target) << ',' << n << ',' << rule << ','
        << fmt_double(res.eta) << ',' << fmt_double(res.achieved_pw) << ','
        << fmt_double(res.group_expected_t) << ',' << res.iterations << ','
        << (res.converged ? 1 : 0) << '\n';
    write_text(out, csv.str());
  }
  json params = model_params(margs);
  params["target"] = target;
  params["n"] = n;
  params["rule"] = rule;
  params["bracket"] = bracket;
  params["hypothesis"] = hypothesis;
  write_manifest(out, "calibrate", params, g.seed, outputs);
  std::cout << "eta=" << res.eta << " achieved_pw=" << res.achieved_pw
            << " e_t=" << res.group_expected_t << "\n";
  std::cout << "wrote " << out << "\n";
}

const char* winner_name(sda::RuleWinner w) {
  switch (w) {
    case sda::RuleWinner::kFastest: return "fastest";
    case sda::RuleWinner::kMajority: return "majority";
    case sda::RuleWinner::kTie: return "tie";
    default: return "error";
  }
}

void cmd_compare(const GlobalArgs& g, const ModelArgs& margs,
                 const std::string& targets_arg, const std::string& grid,
                 int hypothesis) {
  const std::vector<double> targets = parse_targets(targets_arg);
  const std::vector<int> ns = parse_grid(grid);
  const sda::SprtModel model = build_model(margs);
  const sda::RuleComparison table =
      sda::compare_rules(targets, ns, model, hypothesis, g.tail_tol);

  json crossovers = json::array();
  for (const auto& [target, n] : table.crossovers) {
    crossovers.push_back(json{{"target", target}, {"n", n}});
  }
  const std::string out = default_out(g, "compare");
  std::vector<std::string> outputs;
  if (g.format == "json") {
    json cells = json::array();
    for (const auto& c : table.cells) {
      cells.push_back(
          json{{"target", c.target},
               {"n", c.n},
               {"eta_fastest", c.fastest.eta},
               {"pw_fastest", c.fastest.achieved_pw},
               {"et_fastest", num_or_string(c.fastest.group_expected_t)},
               {"eta_majority", c.majority.eta},
               {"pw_majority", c.majority.achieved_pw},
               {"et_majority", num_or_string(c.majority.group_expected_t)},
               {"winner", winner_name(c.winner)},
               {"ok", c.ok},
               {"error", c.error}});
    }
    write_json_file(out, json{{"schema", "sda.compare.v1"},
                              {"cells", cells},
                              {"crossovers", crossovers}});
    outputs = {out};
  } else {
    std::ostringstream csv;
    csv << "# schema: sda.compare.v1\n";
    csv << "target,n,eta_fastest,pw_fastest,et_fastest,eta_majority,"
           "pw_majority,et_majority,winner,ok\n";
    for (const auto& c : table.cells) {
      csv << fmt_double(c.target) << ',' << c.n << ','
          << fmt_double(c.fastest.eta) << ','
          << fmt_double(c.fastest.achieved_pw) << ','
          << fmt_double(c.fastest.group_expected_t) << ','
          << fmt_double(c.majority.eta) << ','
          << fmt_double(c.majority.achieved_pw) << ','
          << fmt_double(c.majority.group_expected_t) << ','
          << winner_name(c.winner) << ',' << (c.ok ? 1 : 0) << '\n';
    }
    write_text(out, csv.str());
    write_json_file(out + ".meta.json", json{{"crossovers", crossovers}});
    outputs = {out, out + ".meta.json"};
  }
  json params = model_params(margs);
  params["targets"] = targets_arg;
  params["n_grid"] = grid;
  params["hypothesis"] = hypothesis;
  write_manifest(out, "compare", params, g.seed, outputs);
  for (const auto& [target, n] : table.crossovers) {
    std::cout << "target " << target << ": crossover N = " << n << "\n";
  }
  std::cout << "wrote " << out << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "sda: accuracy and decision-time statistics of groups of sequential "
      "decision makers fused by a q-out-of-N counting rule"};
  app.require_subcommand(1);

  GlobalArgs g;
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", g.out, "Output path (default <command>.csv/.json)");
  app.add_option("--seed", g.seed, "Random seed for simulation commands");
  app.add_option("--tail-tol", g.tail_tol, "Probability-mass tail tolerance");
  app.add_option("--horizon", g.horizon,
                 "Step horizon (0 = automatic per command)");

  // profile
  auto* p_cmd = app.add_subcommand(
      "profile", "Generate a single-agent decision profile from a model");
  ModelArgs p_model;
  add_model_flags(p_cmd, p_model);
  p_cmd->callback([&] { cmd_profile(g, p_model); });

  // aggregate
  auto* a_cmd = app.add_subcommand(
      "aggregate", "Exact group decision statistics for one (n, q)");
  SourceArgs a_src;
  int a_n = 0, a_q = 0, a_hyp = 1;
  add_source_flags(a_cmd, a_src);
  a_cmd->add_option("--n", a_n, "Group size")->required();
  a_cmd->add_option("--q", a_q, "Counting threshold")->required();
  a_cmd->add_option("--hypothesis", a_hyp, "Conditioning hypothesis (0|1)")
      ->check(CLI::IsMember({0, 1}));
  a_cmd->callback([&] { cmd_aggregate(g, a_src, a_n, a_q, a_hyp); });

  // sweep
  auto* s_cmd = app.add_subcommand(
      "sweep", "Group statistics over an (N, q) grid, long-format output");
  SourceArgs s_src;
  std::string s_grid, s_rule = "all-q";
  int s_hyp = 1;
  add_source_flags(s_cmd, s_src);
  s_cmd->add_option("--n-grid", s_grid, "Group sizes start:step:stop")
      ->required();
  s_cmd->add_option("--rule", s_rule, "fastest|majority|all-q")
      ->check(CLI::IsMember({"fastest", "majority", "all-q"}));
  s_cmd->add_option("--hypothesis", s_hyp, "Conditioning hypothesis (0|1)")
      ->check(CLI::IsMember({0, 1}));
  s_cmd->callback([&] { cmd_sweep(g, s_src, s_grid, s_rule, s_hyp); });

  // asymptotics
  auto* y_cmd = app.add_subcommand(
      "asymptotics",
      "Large-group limit report (fastest and majority rules) as JSON");
  SourceArgs y_src;
  int y_hyp = 1;
  bool y_suite = false;
  std::string y_grid = "3:2:11";
  add_source_flags(y_cmd, y_src);
  y_cmd->add_option("--hypothesis", y_hyp, "Conditioning hypothesis (0|1)")
      ->check(CLI::IsMember({0, 1}));
  y_cmd->add_flag("--suite", y_suite,
                  "Also run the monotonicity suite over --n-grid");
  y_cmd->add_option("--n-grid", y_grid, "Odd group sizes start:step:stop");
  y_cmd->callback([&] { cmd_asymptotics(g, y_src, y_hyp, y_suite, y_grid); });

  // simulate
  auto* m_cmd = app.add_subcommand(
      "simulate", "Seeded Monte Carlo simulation of the fused group");
  SourceArgs m_src;
  int m_n = 0, m_q = 0, m_hyp = 1;
  long long m_reps = 10000;
  add_source_flags(m_cmd, m_src);
  m_cmd->add_option("--n", m_n, "Group size")->required();
  m_cmd->add_option("--q", m_q, "Counting threshold")->required();
  m_cmd->add_option("--replicates", m_reps, "Replicate count");
  m_cmd->add_option("--hypothesis", m_hyp, "Conditioning hypothesis (0|1)")
      ->check(CLI::IsMember({0, 1}));
  m_cmd->callback([&] { cmd_simulate(g, m_src, m_n, m_q, m_reps, m_hyp); });

  // calibrate
  auto* c_cmd = app.add_subcommand(
      "calibrate",
      "Find the symmetric threshold achieving a target group error");
  ModelArgs c_model;
  double c_target = 0.0;
  int c_n = 0, c_hyp = 1;
  std::string c_rule = "fastest", c_bracket = "0.05:4.5";
  add_model_flags(c_cmd, c_model);
  c_cmd->add_option("--target", c_target, "Target group wrong-decision "
                                          "probability")
      ->required();
  c_cmd->add_option("--n", c_n, "Group size")->required();
  c_cmd->add_option("--rule", c_rule, "fastest|majority")
      ->check(CLI::IsMember({"fastest", "majority"}));
  c_cmd->add_option("--bracket", c_bracket, "Bisection bracket lo:hi");
  c_cmd->add_option("--hypothesis", c_hyp, "Conditioning hypothesis (0|1)")
      ->check(CLI::IsMember({0, 1}));
  c_cmd->callback(
      [&] { cmd_calibrate(g, c_model, c_target, c_n, c_rule, c_bracket,
                          c_hyp); });

  // compare
  auto* x_cmd = app.add_subcommand(
      "compare",
      "Calibrated fastest-vs-majority expected times over a size grid");
  ModelArgs x_model;
  std::string x_targets = "0.05,0.1", x_grid = "1:2:21";
  int x_hyp = 1;
  add_model_flags(x_cmd, x_model);
  x_cmd->add_option("--targets", x_targets, "Comma-separated target errors");
  x_cmd->add_option("--n-grid", x_grid, "Group sizes start:step:stop");
  x_cmd->add_option("--hypothesis", x_hyp, "Conditioning hypothesis (0|1)")
      ->check(CLI::IsMember({0, 1}));
  x_cmd->callback([&] { cmd_compare(g, x_model, x_targets, x_grid, x_hyp); });

  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error (usage): " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error (numerical): " << e.what() << "\n";
    return 3;
  }
  return 0;
}
