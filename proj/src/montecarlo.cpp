//! \file montecarlo.cpp
//! \brief Simulation and exhaustive enumeration of fused group decisions.

#include "sda/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sda/logmath.hpp"
#include "sda/rng.hpp"

namespace sda {

namespace {

constexpr long long kMaxEnumeration = 10000000;  // joint assignments
constexpr double kThresholdSlack = 1e-12;        // absorbing-boundary slack

//! Replays the counting rule on bucketed arrivals: arrive0/arrive1[t] hold
//! how many agents declare each hypothesis at step t (index 0 unused).
//! Returns {step, verdict}; verdict -1 means no group decision by horizon,
//! with step set to horizon + 1 as a sentinel.
struct FusionResult {
  int time = 0;
  int verdict = -1;
};

FusionResult fuse_counts(const std::vector<int>& arrive0,
                         const std::vector<int>& arrive1, int horizon, int q) {
  int c0 = 0, c1 = 0;
  for (int t = 1; t <= horizon; ++t) {
    c0 += arrive0[static_cast<size_t>(t)];
    c1 += arrive1[static_cast<size_t>(t)];
    if (c1 > c0 && c1 >= q) return {t, 1};
    if (c0 > c1 && c0 >= q) return {t, 0};
  }
  return {horizon + 1, -1};
}

//! Per-agent sampling atoms: index 2*(t-1) decides H0 at t, 2*(t-1)+1
//! decides H1 at t, and the final atom never decides within the horizon.
std::vector<double> atom_cdf(const HypothesisProfile& h, int horizon) {
  std::vector<double> cdf(2 * static_cast<size_t>(horizon) + 1, 0.0);
  double cum = 0.0;
  const int upto = std::min(horizon, h.t_max());
  for (int t = 1; t <= horizon; ++t) {
    const double p0 = t <= upto ? h.p_say0[static_cast<size_t>(t) - 1] : 0.0;
    const double p1 = t <= upto ? h.p_say1[static_cast<size_t>(t) - 1] : 0.0;
    cum += std::max(0.0, p0);
    cdf[2 * static_cast<size_t>(t) - 2] = cum;
    cum += std::max(0.0, p1);
    cdf[2 * static_cast<size_t>(t) - 1] = cum;
  }
  cdf.back() = std::max(cum, 1.0);  // never-decide atom absorbs the rest
  return cdf;
}

void check_sim_args(GroupSpec spec, int hypothesis, long long replicates) {
  if (spec.n < 1 || spec.q < 1 || spec.q > spec.n) {
    throw std::invalid_argument("simulate: need 1 <= q <= n");
  }
  if (hypothesis != 0 && hypothesis != 1) {
    throw std::invalid_argument("simulate: hypothesis must be 0 or 1");
  }
  if (replicates < 1) {
    throw std::invalid_argument("simulate: replicates must be >= 1");
  }
}

void finalize(EmpiricalOutcome& out) {
  out.freq0.resize(out.count0.size());
  out.freq1.resize(out.count1.size());
  const double n = static_cast<double>(out.replicates);
  long long decided = 0;
  double sum_t = 0.0, sum_t2 = 0.0;
  for (size_t i = 0; i < out.count0.size(); ++i) {
    out.freq0[i] = static_cast<double>(out.count0[i]) / n;
    out.freq1[i] = static_cast<double>(out.count1[i]) / n;
    const long long c = out.count0[i] + out.count1[i];
    decided += c;
    const double t = static_cast<double>(i + 1);
    sum_t += t * static_cast<double>(c);
    sum_t2 += t * t * static_cast<double>(c);
  }
  out.decided = decided;
  out.freq_nd = static_cast<double>(out.count_nd) / n;
  if (decided > 0) {
    const double d = static_cast<double>(decided);
    out.mean_time = sum_t / d;
    if (decided > 1) {
      const double var =
          std::max(0.0, (sum_t2 - sum_t * sum_t / d) / (d - 1.0));
      out.mean_time_se = std::sqrt(var / d);
    }
  }
}

}  // namespace

double binomial_se(double p_hat, long long n) {
  if (n < 1) return 0.0;
  return std::sqrt(std::max(0.0, p_hat * (1.0 - p_hat)) /
                   static_cast<double>(n));
}

EmpiricalOutcome simulate_profile_group(const DecisionProfile& profile,
                                        GroupSpec spec, int hypothesis,
                                        long long replicates, uint64_t seed,
                                        int horizon) {
  check_sim_args(spec, hypothesis, replicates);
  const HypothesisProfile& h = profile.under(hypothesis);
  if (h.t_max() < 1) throw std::invalid_argument("simulate: empty profile");
  if (horizon <= 0) horizon = h.t_max();

  const std::vector<double> cdf = atom_cdf(h, horizon);
  EmpiricalOutcome out;
  out.horizon = horizon;
  out.replicates = replicates;
  out.count0.assign(static_cast<size_t>(horizon), 0);
  out.count1.assign(static_cast<size_t>(horizon), 0);

  std::vector<int> arrive0(static_cast<size_t>(horizon) + 1);
  std::vector<int> arrive1(static_cast<size_t>(horizon) + 1);
  for (long long r = 0; r < replicates; ++r) {
    CounterRng rng(seed, static_cast<uint64_t>(r));
    std::fill(arrive0.begin(), arrive0.end(), 0);
    std::fill(arrive1.begin(), arrive1.end(), 0);
    for (int agent = 0; agent < spec.n; ++agent) {
      const double u = rng.next_double();
      const size_t idx = static_cast<size_t>(
          std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
      if (idx + 1 >= cdf.size()) continue;  // never decides
      const int t = static_cast<int>(idx / 2) + 1;
      if (idx % 2 == 0) {
        ++arrive0[static_cast<size_t>(t)];
      } else {
        ++arrive1[static_cast<size_t>(t)];
      }
    }
    const FusionResult f = fuse_counts(arrive0, arrive1, horizon, spec.q);
    if (f.verdict < 0) {
      ++out.count_nd;
    } else if (f.verdict == 0) {
      ++out.count0[static_cast<size_t>(f.time) - 1];
    } else {
      ++out.count1[static_cast<size_t>(f.time) - 1];
    }
  }
  finalize(out);
  return out;
}

EmpiricalOutcome simulate_model_group(const SprtModel& model, GroupSpec spec,
                                      int hypothesis, long long replicates,
                                      uint64_t seed, int horizon) {
  check_sim_args(spec, hypothesis, replicates);
  if (horizon < 1) {
    throw std::invalid_argument("simulate: model source needs a horizon");
  }
  const LlrSpec llr = llr_spec(model);
  const double theta = hypothesis == 0 ? model.theta0 : model.theta1;

  // Per-observation sampling table for the binomial model.
  std::vector<double> obs_cdf;
  if (model.kind == SprtKind::kBinomial) {
    obs_cdf.resize(static_cast<size_t>(model.n_obs) + 1);
    double cum = 0.0;
    for (int j = 0; j <= model.n_obs; ++j) {
      cum += binomial_pmf(model.n_obs, j, theta);
      obs_cdf[static_cast<size_t>(j)] = cum;
    }
    obs_cdf.back() = std::max(obs_cdf.back(), 1.0);
  }

  EmpiricalOutcome out;
  out.horizon = horizon;
  out.replicates = replicates;
  out.count0.assign(static_cast<size_t>(horizon), 0);
  out.count1.assign(static_cast<size_t>(horizon), 0);

  std::vector<int> arrive0(static_cast<size_t>(horizon) + 1);
  std::vector<int> arrive1(static_cast<size_t>(horizon) + 1);
  for (long long r = 0; r < replicates; ++r) {
    CounterRng rng(seed, static_cast<uint64_t>(r));
    std::fill(arrive0.begin(), arrive0.end(), 0);
    std::fill(arrive1.begin(), arrive1.end(), 0);
    for (int agent = 0; agent < spec.n; ++agent) {
      double lam = 0.0;
      for (int t = 1; t <= horizon; ++t) {
        double x;
        if (model.kind == SprtKind::kGaussian) {
          x = theta + model.sigma * rng.next_gaussian();
        } else {
          const double u = rng.next_double();
          const size_t j = static_cast<size_t>(
              std::upper_bound(obs_cdf.begin(), obs_cdf.end(), u) -
              obs_cdf.begin());
          x = static_cast<double>(std::min(j, obs_cdf.size() - 1));
        }
        lam += llr.slope * x + llr.offset;
        if (lam <= model.eta0 + kThresholdSlack) {
          ++arrive0[static_cast<size_t>(t)];
          break;
        }
        if (lam >= model.eta1 - kThresholdSlack) {
          ++arrive1[static_cast<size_t>(t)];
          break;
        }
      }
    }
    const FusionResult f = fuse_counts(arrive0, arrive1, horizon, spec.q);
    if (f.verdict < 0) {
      ++out.count_nd;
    } else if (f.verdict == 0) {
      ++out.count0[static_cast<size_t>(f.time) - 1];
    } else {
      ++out.count1[static_cast<size_t>(f.time) - 1];
    }
  }
  finalize(out);
  return out;
}

GroupOutcome enumerate_exact(const DecisionProfile& profile, GroupSpec spec,
                             int hypothesis, int horizon) {
  check_sim_args(spec, hypothesis, 1);
  const HypothesisProfile& h = profile.under(hypothesis);
  if (h.t_max() < 1) throw std::invalid_argument("enumerate: empty profile");
  if (horizon <= 0) horizon = h.t_max();

  const int atoms = 2 * horizon + 1;
  double assignments = 1.0;
  for (int i = 0; i < spec.n; ++i) {
    assignments *= atoms;
    if (assignments > static_cast<double>(kMaxEnumeration)) {
      throw std::runtime_error(
          "enumerate: joint assignment count exceeds the cap; "
          "use simulation instead");
    }
  }

  // Atom probabilities in the same order as the sampling table.
  std::vector<double> atom_p(static_cast<size_t>(atoms), 0.0);
  const int upto = std::min(horizon, h.t_max());
  double mass = 0.0;
  for (int t = 1; t <= upto; ++t) {
    atom_p[2 * static_cast<size_t>(t) - 2] =
        h.p_say0[static_cast<size_t>(t) - 1];
    atom_p[2 * static_cast<size_t>(t) - 1] =
        h.p_say1[static_cast<size_t>(t) - 1];
    mass += atom_p[2 * static_cast<size_t>(t) - 2] +
            atom_p[2 * static_cast<size_t>(t) - 1];
  }
  atom_p.back() = std::max(0.0, 1.0 - mass);

  GroupOutcome out;
  out.n = spec.n;
  out.q = spec.q;
  out.hypothesis = hypothesis;
  out.p0.assign(static_cast<size_t>(horizon), 0.0);
  out.p1.assign(static_cast<size_t>(horizon), 0.0);
  double p_nd = 0.0;

  std::vector<int> digits(static_cast<size_t>(spec.n), 0);
  std::vector<int> arrive0(static_cast<size_t>(horizon) + 1);
  std::vector<int> arrive1(static_cast<size_t>(horizon) + 1);
  while (true) {
    double prob = 1.0;
    for (int i = 0; i < spec.n; ++i) {
      prob *= atom_p[static_cast<size_t>(digits[static_cast<size_t>(i)])];
      if (prob == 0.0) break;
    }
    if (prob > 0.0) {
      std::fill(arrive0.begin(), arrive0.end(), 0);
      std::fill(arrive1.begin(), arrive1.end(), 0);
      for (int i = 0; i < spec.n; ++i) {
        const int a = digits[static_cast<size_t>(i)];
        if (a == atoms - 1) continue;  // never decides
        const int t = a / 2 + 1;
        if (a % 2 == 0) {
          ++arrive0[static_cast<size_t>(t)];
        } else {
          ++arrive1[static_cast<size_t>(t)];
        }
      }
      const FusionResult f = fuse_counts(arrive0, arrive1, horizon, spec.q);
      if (f.verdict < 0) {
        p_nd += prob;
      } else if (f.verdict == 0) {
        out.p0[static_cast<size_t>(f.time) - 1] += prob;
      } else {
        out.p1[static_cast<size_t>(f.time) - 1] += prob;
      }
    }
    // Advance the odometer.
    int pos = 0;
    while (pos < spec.n) {
      if (++digits[static_cast<size_t>(pos)] < atoms) break;
      digits[static_cast<size_t>(pos)] = 0;
      ++pos;
    }
    if (pos == spec.n) break;
  }

  double total0 = 0.0, total1 = 0.0;
  for (double v : out.p0) total0 += v;
  for (double v : out.p1) total1 += v;
  out.p_c = hypothesis == 1 ? total1 : total0;
  out.p_w = hypothesis == 1 ? total0 : total1;
  out.p_nd = p_nd;

  HypothesisProfile as_profile;
  as_profile.p_say0 = out.p0;
  as_profile.p_say1 = out.p1;
  as_profile.p_nd = out.p_nd;
  const ExpectedTime et = expected_decision_time(as_profile);
  out.e_t = et.mean;
  out.e_t_conditional = et.conditional_mean;
  return out;
}

}  // namespace sda
