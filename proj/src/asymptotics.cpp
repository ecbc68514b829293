//! \file asymptotics.cpp
//! \brief Large-group predictors and monotonicity reports.

#include "sda/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "sda/aggregation.hpp"
#include "sda/logmath.hpp"

namespace sda {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPlateauTol = 1e-6;  // numeric limit-evidence tolerance
constexpr double kHalfSplitTol = 1e-12;

std::vector<double> cumulative(const std::vector<double>& per_step) {
  std::vector<double> c(per_step.size());
  double acc = 0.0;
  for (size_t i = 0; i < per_step.size(); ++i) {
    acc += per_step[i];
    c[i] = acc;
  }
  return c;
}

//! First step (1-based) where |traj - 1/2| falls within the floating-point
//! slack, or -1 when no step hits one half exactly.
int exact_half_hit(const std::vector<double>& traj) {
  for (size_t i = 0; i < traj.size(); ++i) {
    if (std::abs(traj[i] - 0.5) <= kFpEps) return static_cast<int>(i) + 1;
  }
  return -1;
}

bool stays_below_half(const std::vector<double>& traj) {
  for (double v : traj) {
    if (v > 0.5 + kFpEps) return false;
  }
  return true;
}

bool approaches_half(const std::vector<double>& traj) {
  return !traj.empty() && 0.5 - traj.back() < kPlateauTol;
}

}  // namespace

int earliest_decision_time(const HypothesisProfile& h) {
  const int t_max = h.t_max();
  for (int t = 1; t <= t_max; ++t) {
    if (std::abs(h.p_say0[static_cast<size_t>(t) - 1]) > kFpEps ||
        std::abs(h.p_say1[static_cast<size_t>(t) - 1]) > kFpEps) {
      return t;
    }
  }
  throw std::invalid_argument(
      "earliest_decision_time: profile has no decision mass");
}

FastestLimits fastest_limits(const DecisionProfile& profile, int hypothesis) {
  if (hypothesis != 0 && hypothesis != 1) {
    throw std::invalid_argument("fastest_limits: hypothesis must be 0 or 1");
  }
  const HypothesisProfile& h = profile.under(hypothesis);
  FastestLimits out;
  out.t_bar = earliest_decision_time(h);
  const size_t i = static_cast<size_t>(out.t_bar) - 1;
  const double correct = hypothesis == 1 ? h.p_say1[i] : h.p_say0[i];
  const double wrong = hypothesis == 1 ? h.p_say0[i] : h.p_say1[i];
  const double diff = correct - wrong;
  out.limit_pw = diff > kFpEps ? 0.0 : (diff < -kFpEps ? 1.0 : 0.5);
  out.limit_et = out.t_bar;
  return out;
}

double majority_pw(double p_w_single, int n) {
  if (n < 1 || n % 2 == 0) {
    throw std::invalid_argument("majority_pw: n must be odd and positive");
  }
  if (!(p_w_single >= 0.0 && p_w_single <= 1.0)) {
    throw std::invalid_argument("majority_pw: probability out of range");
  }
  if (p_w_single == 0.5) return 0.5;  // exact by symmetry of the tail
  const double lp = safe_log(p_w_single);
  const double lq = safe_log(1.0 - p_w_single);
  double sum = 0.0;
  for (int j = n / 2 + 1; j <= n; ++j) {
    sum += std::exp(log_binomial(n, j) + xlogx_pow(j, lp) +
                    xlogx_pow(n - j, lq));
  }
  return std::min(1.0, sum);
}

double majority_pw_asymptote(double p_w_single, int n) {
  if (n < 1 || n % 2 == 0) {
    throw std::invalid_argument(
        "majority_pw_asymptote: n must be odd and positive");
  }
  if (!(p_w_single >= 0.0 && p_w_single < 0.25)) {
    throw std::invalid_argument(
        "majority_pw_asymptote: requires 0 <= p < 1/4");
  }
  if (p_w_single == 0.0) return 0.0;
  const int half_up = (n + 1) / 2;
  const double base = 4.0 * p_w_single * (1.0 - p_w_single);
  return std::exp(half_up * std::log(base) -
                  std::log(1.0 - 2.0 * p_w_single) -
                  0.5 * std::log(2.0 * M_PI * n));
}

MajorityTimeCase majority_et_limit(const DecisionProfile& profile,
                                   int hypothesis) {
  if (hypothesis != 0 && hypothesis != 1) {
    throw std::invalid_argument("majority_et_limit: hypothesis must be 0 or 1");
  }
  const HypothesisProfile& h = profile.under(hypothesis);
  if (h.t_max() < 1 || h.decision_mass() < 1.0 - kDefaultTailTol) {
    throw std::invalid_argument(
        "majority_et_limit: profile must decide almost surely");
  }
  const std::vector<double> pi0 = cumulative(h.p_say0);
  const std::vector<double> pi1 = cumulative(h.p_say1);
  const double total0 = pi0.back();
  const double total1 = pi1.back();
  const double p_correct = hypothesis == 1 ? total1 : total0;
  const double p_wrong = hypothesis == 1 ? total0 : total1;

  MajorityTimeCase out;
  if (std::abs(p_correct - p_wrong) <= kHalfSplitTol) {
    // Even split: classification rests on whether each cumulative trajectory
    // reaches one half exactly or only in the limit.
    out.t0 = exact_half_hit(pi0);
    out.t1 = exact_half_hit(pi1);
    if (out.t0 > 0 && out.t1 > 0) {
      out.tag = MajorityCaseTag::kA2;
      out.limit_et = 0.5 * (out.t0 + out.t1);
      return out;
    }
    const bool ok0 = out.t0 > 0 || (stays_below_half(pi0) &&
                                    approaches_half(pi0));
    const bool ok1 = out.t1 > 0 || (stays_below_half(pi1) &&
                                    approaches_half(pi1));
    if (ok0 && ok1) {
      out.tag = (out.t0 > 0 || out.t1 > 0) ? MajorityCaseTag::kA3
                                           : MajorityCaseTag::kA4;
      out.limit_et = kInf;
      out.note =
          "classified numerically: non-hitting trajectory approaches one "
          "half within plateau tolerance";
      return out;
    }
    out.tag = MajorityCaseTag::kIndeterminate;
    out.note =
        "even split but a trajectory neither hits one half exactly nor "
        "demonstrably approaches it";
    return out;
  }

  // Dominant-side analysis; when the wrong side dominates, the same
  // structure applies with the roles of the verdicts exchanged.
  const bool swapped = p_wrong > p_correct;
  const std::vector<double>& dom =
      (hypothesis == 1) == !swapped ? pi1 : pi0;
  int t_gt = -1;
  for (size_t i = 0; i < dom.size(); ++i) {
    if (dom[i] > 0.5 + kFpEps) {
      t_gt = static_cast<int>(i) + 1;
      break;
    }
  }
  if (t_gt < 0) {
    out.tag = MajorityCaseTag::kIndeterminate;
    out.note = "dominant trajectory never strictly exceeds one half";
    return out;
  }
  int t_lt = 0;  // convention when the first step already exceeds one half
  for (int t = t_gt - 1; t >= 1; --t) {
    if (dom[static_cast<size_t>(t) - 1] < 0.5 - kFpEps) {
      t_lt = t;
      break;
    }
  }
  out.tag = MajorityCaseTag::kA1;
  out.t_lt_half = t_lt;
  out.t_gt_half = t_gt;
  out.limit_et = 0.5 * (t_lt + t_gt + 1);
  if (swapped) {
    out.note = "roles swapped: the dominant verdict is the wrong decision";
  }
  return out;
}

double half_binomial(int n, double c, double x, HalfSide side) {
  if (n < 1 || n % 2 == 0) {
    throw std::invalid_argument("half_binomial: n must be odd and positive");
  }
  if (!(c > 0.0 && c <= 1.0) || !(x >= 0.0 && x <= c / 2.0)) {
    throw std::invalid_argument(
        "half_binomial: need 0 < c <= 1 and 0 <= x <= c/2");
  }
  const double lx = safe_log(x);
  const double lcx = safe_log(c - x);
  const int j_lo = side == HalfSide::kLower ? 0 : n / 2 + 1;
  const int j_hi = side == HalfSide::kLower ? n / 2 : n;
  double sum = 0.0;
  for (int j = j_lo; j <= j_hi; ++j) {
    sum += std::exp(log_binomial(n, j) + xlogx_pow(j, lx) +
                    xlogx_pow(n - j, lcx));
  }
  return sum;
}

MonotonicityReport monotonicity_suite(const DecisionProfile& profile,
                                      const std::vector<int>& n_grid,
                                      const std::vector<int>& q_grid,
                                      int hypothesis, double slack) {
  MonotonicityReport report;
  for (int n : n_grid) {
    if (n < 1 || n % 2 == 0) {
      throw std::invalid_argument("monotonicity_suite: group sizes must be odd");
    }
    std::vector<int> qs;
    if (q_grid.empty()) {
      for (int q = 1; q <= n; ++q) qs.push_back(q);
    } else {
      for (int q : q_grid) {
        if (q >= 1 && q <= n) qs.push_back(q);
      }
    }
    const int majority_q = n / 2 + 1;
    // Previous value per chain; NaN marks the start of a chain.
    double prev_et = std::numeric_limits<double>::quiet_NaN();
    double prev_pc_high = std::numeric_limits<double>::quiet_NaN();
    double prev_pw_high = std::numeric_limits<double>::quiet_NaN();
    double prev_pnd_high = std::numeric_limits<double>::quiet_NaN();
    double prev_pc_conj = std::numeric_limits<double>::quiet_NaN();
    double prev_pw_conj = std::numeric_limits<double>::quiet_NaN();
    for (int q : qs) {
      const GroupOutcome g =
          aggregate_under(profile, GroupSpec{n, q}, hypothesis);
      auto push = [&](const char* metric, double value, double& prev,
                      bool nondecreasing, bool asserted) {
        MonotonicityRow row;
        row.n = n;
        row.q = q;
        row.metric = metric;
        row.value = value;
        if (!std::isnan(prev)) {
          row.monotone_ok = nondecreasing ? value >= prev - slack
                                          : value <= prev + slack;
        }
        if (!row.monotone_ok) {
          if (asserted) {
            report.theorems_ok = false;
          } else {
            std::ostringstream oss;
            oss << "conjecture chain " << metric << " violated at N=" << n
                << ", q=" << q << " (previous " << prev << ", current "
                << value << ")";
            report.findings.push_back(oss.str());
          }
        }
        prev = value;
        report.rows.push_back(std::move(row));
      };
      push("e_t", g.e_t, prev_et, /*nondecreasing=*/true, /*asserted=*/true);
      if (q >= majority_q) {
        push("p_c_high", g.p_c, prev_pc_high, false, true);
        push("p_w_high", g.p_w, prev_pw_high, false, true);
        push("p_nd_high", g.p_nd, prev_pnd_high, true, true);
      }
      if (q <= majority_q) {
        push("p_c_conj", g.p_c, prev_pc_conj, true, false);
        push("p_w_conj", g.p_w, prev_pw_conj, false, false);
      }
    }
  }
  return report;
}

}  // namespace sda
