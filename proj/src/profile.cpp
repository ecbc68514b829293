//! \file profile.cpp
//! \brief DecisionProfile validation, summary statistics, and CSV round-trip.

#include "sda/profile.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace sda {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_branch(const HypothesisProfile& h, const char* tag,
                  double tail_tol, ValidationReport* report,
                  double* residual) {
  auto fail = [&](const std::string& msg) {
    report->ok = false;
    report->issues.push_back(std::string(tag) + ": " + msg);
  };
  if (h.p_say0.size() != h.p_say1.size()) {
    fail("p_say0 and p_say1 have different lengths");
    *residual = std::numeric_limits<double>::quiet_NaN();
    return;
  }
  if (h.t_max() < 1) fail("empty profile (t_max < 1)");
  double mass = 0.0;
  for (size_t i = 0; i < h.p_say0.size(); ++i) {
    for (double v : {h.p_say0[i], h.p_say1[i]}) {
      if (!(v >= 0.0) || v > 1.0) {
        fail("entry at t=" + std::to_string(i + 1) + " outside [0,1]");
      }
    }
    mass += h.p_say0[i] + h.p_say1[i];
  }
  if (!(h.p_nd >= 0.0)) fail("p_nd negative");
  const double total = mass + h.p_nd;
  *residual = 1.0 - total;
  if (total < 1.0 - tail_tol || total > 1.0 + kFpEps) {
    std::ostringstream os;
    os << "total probability mass " << total << " outside [1 - tail_tol, 1]";
    fail(os.str());
  }
}

}  // namespace

double HypothesisProfile::decision_mass() const {
  double mass = 0.0;
  for (size_t i = 0; i < p_say0.size(); ++i) mass += p_say0[i] + p_say1[i];
  return mass;
}

ValidationReport validate_profile(const DecisionProfile& profile,
                                  double tail_tol) {
  ValidationReport report;
  check_branch(profile.under_h0, "under_h0", tail_tol, &report,
               &report.residual_h0);
  check_branch(profile.under_h1, "under_h1", tail_tol, &report,
               &report.residual_h1);
  if (profile.under_h0.t_max() != profile.under_h1.t_max()) {
    report.ok = false;
    report.issues.push_back("hypothesis branches have different t_max");
  }
  return report;
}

bool has_almost_sure_decisions(const DecisionProfile& profile,
                               double tail_tol) {
  return profile.under_h0.p_nd <= tail_tol &&
         profile.under_h1.p_nd <= tail_tol;
}

ExpectedTime expected_decision_time(const HypothesisProfile& h,
                                    double tail_tol) {
  ExpectedTime out;
  double mass = 0.0;
  double weighted = 0.0;
  for (int t = 1; t <= h.t_max(); ++t) {
    const double p = h.p_say0[t - 1] + h.p_say1[t - 1];
    mass += p;
    weighted += static_cast<double>(t) * p;
  }
  out.conditional_mean = mass > 0.0 ? weighted / mass : 0.0;
  out.finite = h.p_nd <= tail_tol;
  out.mean = out.finite ? weighted : kInf;
  return out;
}

namespace {

bool q_in_group_range(const GroupSpec& spec) {
  const int ceil_half = (spec.n + 1) / 2;
  return spec.q >= 1 && spec.q <= ceil_half;
}

}  // namespace

bool group_almost_sure(const GroupSpec& spec, const DecisionProfile& profile,
                       double tail_tol) {
  return has_almost_sure_decisions(profile, tail_tol) && spec.n % 2 == 1 &&
         q_in_group_range(spec);
}

bool group_finite_expected_time(const GroupSpec& spec,
                                const DecisionProfile& profile,
                                double tail_tol) {
  const ExpectedTime e0 = expected_decision_time(profile.under_h0, tail_tol);
  const ExpectedTime e1 = expected_decision_time(profile.under_h1, tail_tol);
  return e0.finite && e1.finite && spec.n % 2 == 1 && q_in_group_range(spec);
}

void write_profile_csv(const DecisionProfile& profile,
                       const std::string& path) {
  std::ofstream csv(path);
  if (!csv) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  csv << "# schema: sda.profile.v1\n";
  csv << "t,p0_h0,p1_h0,p0_h1,p1_h1\n";
  char buf[512];
  for (int t = 1; t <= profile.t_max(); ++t) {
    const size_t i = static_cast<size_t>(t) - 1;
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g\n", t,
                  profile.under_h0.p_say0[i], profile.under_h0.p_say1[i],
                  profile.under_h1.p_say0[i], profile.under_h1.p_say1[i]);
    csv << buf;
  }
  if (!csv.good()) throw std::runtime_error("write failed: " + path);
  csv.close();

  nlohmann::json meta;
  meta["p_nd_h0"] = profile.under_h0.p_nd;
  meta["p_nd_h1"] = profile.under_h1.p_nd;
  meta["t_max"] = profile.t_max();
  std::ofstream side(path + ".meta.json");
  if (!side) {
    throw std::runtime_error("cannot open for writing: " + path +
                             ".meta.json");
  }
  side << meta.dump(2) << "\n";
}

DecisionProfile read_profile_csv(const std::string& path) {
  std::ifstream csv(path);
  if (!csv) throw std::runtime_error("cannot open: " + path);
  DecisionProfile profile;
  std::string line;
  bool header_seen = false;
  int expected_t = 1;
  while (std::getline(csv, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line.rfind("t,", 0) != 0) {
        throw std::runtime_error("unexpected profile CSV header: " + line);
      }
      header_seen = true;
      continue;
    }
    int t = 0;
    double v[4];
    if (std::sscanf(line.c_str(), "%d,%lg,%lg,%lg,%lg", &t, &v[0], &v[1],
                    &v[2], &v[3]) != 5) {
      throw std::runtime_error("malformed profile CSV row: " + line);
    }
    if (t != expected_t) {
      throw std::runtime_error("non-contiguous t in profile CSV at row " +
                               line);
    }
    ++expected_t;
    profile.under_h0.p_say0.push_back(v[0]);
    profile.under_h0.p_say1.push_back(v[1]);
    profile.under_h1.p_say0.push_back(v[2]);
    profile.under_h1.p_say1.push_back(v[3]);
  }
  if (!header_seen) throw std::runtime_error("profile CSV has no header");

  std::ifstream side(path + ".meta.json");
  if (!side) throw std::runtime_error("cannot open: " + path + ".meta.json");
  nlohmann::json meta = nlohmann::json::parse(side);
  profile.under_h0.p_nd = meta.at("p_nd_h0").get<double>();
  profile.under_h1.p_nd = meta.at("p_nd_h1").get<double>();
  const int t_max = meta.at("t_max").get<int>();
  if (t_max != profile.t_max()) {
    throw std::runtime_error("sidecar t_max disagrees with CSV row count");
  }
  return profile;
}

}  // namespace sda
