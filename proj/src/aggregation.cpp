//! \file aggregation.cpp
//! \brief Engines computing exact q-out-of-N group decision probabilities.
//!
//! All engines share the same state language. For one conditioning
//! hypothesis, a single SDM is described at each step t by its cumulative
//! decided-mass pair (pi0, pi1) and the per-step decision probabilities
//! (p0(t), p1(t)). Undecided histories of the whole group split into
//!   - "simple" states: s0 SDMs decided H0 and s1 decided H1, both below the
//!     threshold q (no group decision, no tie possible), rest undecided;
//!   - "canceling" states: 2s SDMs decided with counters tied at s >= q
//!     (both sides crossed the threshold simultaneously), rest undecided.
//! Per step, each state either emits a group decision (the favored counter
//! reaches q with a strict lead, or a tie is broken) or transitions onward.
//!
//! Simple-state probabilities are products of binomial factors in (pi0, pi1)
//! and are recomputed from the cumulative pair each step; canceling states
//! need one probability cell per s. The persistent state is therefore
//! floor(N/2) - q + 3 numbers for q <= floor(N/2) and 2 numbers above.
//! Canceling-state cells are stored as whole-group probabilities (the
//! count-of-subsets factor C(N, 2s) and the undecided mass of the other
//! N - 2s SDMs folded in), which keeps every stored value inside [0, 1] for
//! group sizes where raw subset coefficients would overflow. Individual
//! terms mix binomial coefficients with large powers, so each term is
//! assembled in log space and exponentiated once.

#include "sda/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "sda/logmath.hpp"

namespace sda {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kEarlyStopRun = 10;  // consecutive quiet steps before stopping

//! Conditional step distribution of one SDM that is still undecided at the
//! previous step: decide H0 / decide H1 / stay undecided.
struct StepCond {
  double g0 = 0.0, g1 = 0.0, gu = 1.0;
  double lg0 = kNegInf, lg1 = kNegInf, lgu = 0.0;
  bool quiet = true;  // no decision probability at this step
};

StepCond make_step(double p0t, double p1t, double u_prev) {
  StepCond s;
  if (u_prev <= 0.0 || (p0t <= 0.0 && p1t <= 0.0)) return s;
  s.g0 = std::min(1.0, std::max(0.0, p0t / u_prev));
  s.g1 = std::min(1.0, std::max(0.0, p1t / u_prev));
  const double sum = s.g0 + s.g1;
  if (sum > 1.0) {
    s.g0 /= sum;
    s.g1 /= sum;
  }
  s.gu = std::max(0.0, 1.0 - s.g0 - s.g1);
  s.lg0 = safe_log(s.g0);
  s.lg1 = safe_log(s.g1);
  s.lgu = safe_log(s.gu);
  s.quiet = false;
  return s;
}

//! Triangular table of log lower-tail sums of a two-outcome step binomial:
//! entry (r, c) = log Sum_{j=0..c} C(r,j) * g_oth^j * gu^(r-j).
//! Row r describes r undecided SDMs none of which decides for the favored
//! side; column c caps how many may decide for the other side.
class LogTailTable {
 public:
  LogTailTable(int max_r, double lg_oth, double lgu) : rows_(max_r + 1) {
    for (int r = 0; r <= max_r; ++r) {
      auto& row = rows_[static_cast<size_t>(r)];
      row.resize(static_cast<size_t>(r) + 1);
      double cum = 0.0;
      for (int j = 0; j <= r; ++j) {
        cum += std::exp(log_binomial(r, j) + xlogx_pow(j, lg_oth) +
                        xlogx_pow(r - j, lgu));
        row[static_cast<size_t>(j)] = safe_log(std::min(cum, 1.0));
      }
    }
  }

  double operator()(int r, int c) const {
    if (c < 0) return kNegInf;
    const auto& row = rows_[static_cast<size_t>(r)];
    if (c >= static_cast<int>(row.size())) c = static_cast<int>(row.size()) - 1;
    return row[static_cast<size_t>(c)];
  }

 private:
  std::vector<std::vector<double>> rows_;
};

//! Probability that, among m undecided SDMs, at least h_min decide for the
//! favored side and the favored count stays strictly ahead: the other side
//! may receive at most h_fav + cap_base fresh verdicts.
double tip_probability(int m, int h_min, int cap_base, double lg_fav,
                       const LogTailTable& other_tail) {
  if (h_min < 1) h_min = 1;
  if (lg_fav == kNegInf || m < h_min) return 0.0;
  double sum = 0.0;
  for (int h = h_min; h <= m; ++h) {
    const int cap = h + cap_base;
    if (cap < 0) continue;
    const double lt = log_binomial(m, h) + xlogx_pow(h, lg_fav) +
                      other_tail(m - h, cap);
    sum += std::exp(lt);
  }
  return sum;
}

struct EngineResult {
  std::vector<double> out0;
  std::vector<double> out1;
  int steps_run = 0;
  int state_cells = 0;
  double p_nd_exact = -1.0;  // >= 0 when the engine knows the exact value
};

const double* series_at(const std::vector<double>& v, int t) {
  // t is 1-based; entries beyond the profile horizon are zero.
  static const double kZero = 0.0;
  if (t <= static_cast<int>(v.size())) return &v[static_cast<size_t>(t) - 1];
  return &kZero;
}

//! Full low-threshold recursion, valid for 1 <= q <= floor(n/2).
EngineResult run_general(const HypothesisProfile& h, int n, int q, int horizon,
                         double tail_tol, bool early_stop) {
  const int half = n / 2;
  EngineResult res;
  res.out0.assign(static_cast<size_t>(horizon), 0.0);
  res.out1.assign(static_cast<size_t>(horizon), 0.0);
  double pi0 = 0.0, pi1 = 0.0;
  std::vector<double> tie(static_cast<size_t>(half - q + 1), 0.0);
  std::vector<double> tie_next(tie.size(), 0.0);
  std::vector<double> log_w(static_cast<size_t>(q) * static_cast<size_t>(q),
                            kNegInf);
  res.state_cells = 2 + static_cast<int>(tie.size());
  int quiet_run = 0;

  for (int t = 1; t <= horizon; ++t) {
    const double u_prev = std::max(0.0, 1.0 - pi0 - pi1);
    if (u_prev <= 0.0) break;
    const double p0t = *series_at(h.p_say0, t);
    const double p1t = *series_at(h.p_say1, t);
    res.steps_run = t;
    const StepCond st = make_step(p0t, p1t, u_prev);
    if (st.quiet) {
      if (early_stop && ++quiet_run >= kEarlyStopRun) break;
      continue;
    }

    const double lpi0 = safe_log(pi0);
    const double lpi1 = safe_log(pi1);
    const double lu_prev = safe_log(u_prev);
    const LogTailTable tail0(n, st.lg0, st.lgu);  // other side says H0
    const LogTailTable tail1(n, st.lg1, st.lgu);  // other side says H1

    // Simple states: emit decisions and cache log-probabilities for the
    // canceling-state update below.
    double emit0 = 0.0, emit1 = 0.0;
    for (int s0 = 0; s0 < q; ++s0) {
      for (int s1 = 0; s1 < q; ++s1) {
        const int sbar = s0 + s1;
        const int m = n - sbar;
        const double lw = log_binomial(n, sbar) + log_binomial(sbar, s0) +
                          xlogx_pow(s0, lpi0) + xlogx_pow(s1, lpi1) +
                          xlogx_pow(m, lu_prev);
        log_w[static_cast<size_t>(s0) * static_cast<size_t>(q) +
              static_cast<size_t>(s1)] = lw;
        const double w = std::exp(lw);
        if (w <= 0.0) continue;
        emit1 += w * tip_probability(m, q - s1, s1 - s0 - 1, st.lg1, tail0);
        emit0 += w * tip_probability(m, q - s0, s0 - s1 - 1, st.lg0, tail1);
      }
    }
    // Canceling states: a broken tie decides for the side receiving strictly
    // more fresh verdicts.
    for (int s = q; s <= half; ++s) {
      const double v = tie[static_cast<size_t>(s - q)];
      if (v <= 0.0) continue;
      const int m = n - 2 * s;
      if (m < 1) continue;
      emit1 += v * tip_probability(m, 1, -1, st.lg1, tail0);
      emit0 += v * tip_probability(m, 1, -1, st.lg0, tail1);
    }
    res.out0[static_cast<size_t>(t) - 1] = emit0;
    res.out1[static_cast<size_t>(t) - 1] = emit1;

    // Canceling-state update: a simple state becomes tied when fresh verdicts
    // lift both counters to the same s >= q; an existing tie grows by pairs.
    for (int s = q; s <= half; ++s) {
      double acc = 0.0;
      for (int s0 = 0; s0 < q && s0 <= s; ++s0) {
        for (int s1 = 0; s1 < q && s1 <= s; ++s1) {
          const int m = n - s0 - s1;
          const int a0 = s - s0;
          const int a1 = s - s1;
          const double lw = log_w[static_cast<size_t>(s0) *
                                      static_cast<size_t>(q) +
                                  static_cast<size_t>(s1)];
          if (lw == kNegInf) continue;
          const double lt = lw + log_binomial(m, a0) +
                            log_binomial(m - a0, a1) + xlogx_pow(a0, st.lg0) +
                            xlogx_pow(a1, st.lg1) +
                            xlogx_pow(m - a0 - a1, st.lgu);
          acc += std::exp(lt);
        }
      }
      for (int hh = q; hh <= s; ++hh) {
        const double v = tie[static_cast<size_t>(hh - q)];
        if (v <= 0.0) continue;
        const int mh = n - 2 * hh;
        const int d = s - hh;
        const double lt = safe_log(v) + log_binomial(mh, d) +
                          log_binomial(mh - d, d) + xlogx_pow(d, st.lg0) +
                          xlogx_pow(d, st.lg1) +
                          xlogx_pow(mh - 2 * d, st.lgu);
        acc += std::exp(lt);
      }
      tie_next[static_cast<size_t>(s - q)] = std::min(acc, 1.0);
    }
    tie.swap(tie_next);

    pi0 = std::min(1.0, pi0 + p0t);
    pi1 = std::min(1.0, pi1 + p1t);

    if (early_stop) {
      if (emit0 + emit1 < tail_tol) {
        if (++quiet_run >= kEarlyStopRun) break;
      } else {
        quiet_run = 0;
      }
    }
  }
  return res;
}

//! q == 1 fast path. With no pre-threshold states other than "nobody has
//! decided", per-step emissions reduce to tail probabilities of the signed
//! difference walk D = (#fresh H1 verdicts) - (#fresh H0 verdicts), whose
//! distributions for every group size are produced by one incremental
//! convolution pass per step.
EngineResult run_fastest(const HypothesisProfile& h, int n, int horizon,
                         double tail_tol, bool early_stop) {
  const int half = n / 2;
  EngineResult res;
  res.out0.assign(static_cast<size_t>(horizon), 0.0);
  res.out1.assign(static_cast<size_t>(horizon), 0.0);
  double pi0 = 0.0, pi1 = 0.0;
  std::vector<double> tie(static_cast<size_t>(half), 0.0);  // s = 1..half
  std::vector<double> tie_next(tie.size(), 0.0);
  res.state_cells = 2 + static_cast<int>(tie.size());
  int quiet_run = 0;

  // Walk distribution buffers, indexed by displacement + n.
  std::vector<double> walk(2 * static_cast<size_t>(n) + 1, 0.0);
  std::vector<double> walk_next(walk.size(), 0.0);
  // P[D_m > 0] and P[D_m < 0] for each group size m.
  std::vector<double> pos(static_cast<size_t>(n) + 1, 0.0);
  std::vector<double> neg(static_cast<size_t>(n) + 1, 0.0);

  for (int t = 1; t <= horizon; ++t) {
    const double u_prev = std::max(0.0, 1.0 - pi0 - pi1);
    if (u_prev <= 0.0) break;
    const double p0t = *series_at(h.p_say0, t);
    const double p1t = *series_at(h.p_say1, t);
    res.steps_run = t;
    const StepCond st = make_step(p0t, p1t, u_prev);
    if (st.quiet) {
      if (early_stop && ++quiet_run >= kEarlyStopRun) break;
      continue;
    }
    const double lu_prev = safe_log(u_prev);

    std::fill(walk.begin(), walk.end(), 0.0);
    walk[static_cast<size_t>(n)] = 1.0;  // m = 0: point mass at zero
    for (int m = 1; m <= n; ++m) {
      std::fill(walk_next.begin() + (n - m), walk_next.begin() + (n + m + 1),
                0.0);
      for (int d = n - (m - 1); d <= n + (m - 1); ++d) {
        const double w = walk[static_cast<size_t>(d)];
        if (w <= 0.0) continue;
        walk_next[static_cast<size_t>(d) - 1] += w * st.g0;
        walk_next[static_cast<size_t>(d)] += w * st.gu;
        walk_next[static_cast<size_t>(d) + 1] += w * st.g1;
      }
      std::copy(walk_next.begin() + (n - m), walk_next.begin() + (n + m + 1),
                walk.begin() + (n - m));
      double above = 0.0, below = 0.0;
      for (int d = 1; d <= m; ++d) {
        above += walk[static_cast<size_t>(n + d)];
        below += walk[static_cast<size_t>(n - d)];
      }
      pos[static_cast<size_t>(m)] = above;
      neg[static_cast<size_t>(m)] = below;
    }

    double emit0 = 0.0, emit1 = 0.0;
    const double w00 = std::exp(static_cast<double>(n) * lu_prev);
    emit1 += w00 * pos[static_cast<size_t>(n)];
    emit0 += w00 * neg[static_cast<size_t>(n)];
    for (int s = 1; s <= half; ++s) {
      const double v = tie[static_cast<size_t>(s - 1)];
      if (v <= 0.0) continue;
      const int m = n - 2 * s;
      if (m < 1) continue;
      emit1 += v * pos[static_cast<size_t>(m)];
      emit0 += v * neg[static_cast<size_t>(m)];
    }
    res.out0[static_cast<size_t>(t) - 1] = emit0;
    res.out1[static_cast<size_t>(t) - 1] = emit1;

    for (int s = 1; s <= half; ++s) {
      const int a = s;  // fresh verdicts per side entering a tie from scratch
      double acc = std::exp(static_cast<double>(n) * lu_prev +
                            log_binomial(n, a) + log_binomial(n - a, a) +
                            xlogx_pow(a, st.lg0) + xlogx_pow(a, st.lg1) +
                            xlogx_pow(n - 2 * a, st.lgu));
      for (int hh = 1; hh <= s; ++hh) {
        const double v = tie[static_cast<size_t>(hh - 1)];
        if (v <= 0.0) continue;
        const int mh = n - 2 * hh;
        const int d = s - hh;
        acc += std::exp(safe_log(v) + log_binomial(mh, d) +
                        log_binomial(mh - d, d) + xlogx_pow(d, st.lg0) +
                        xlogx_pow(d, st.lg1) + xlogx_pow(mh - 2 * d, st.lgu));
      }
      tie_next[static_cast<size_t>(s - 1)] = std::min(acc, 1.0);
    }
    tie.swap(tie_next);

    pi0 = std::min(1.0, pi0 + p0t);
    pi1 = std::min(1.0, pi1 + p1t);

    if (early_stop) {
      if (emit0 + emit1 < tail_tol) {
        if (++quiet_run >= kEarlyStopRun) break;
      } else {
        quiet_run = 0;
      }
    }
  }
  return res;
}

//! High-threshold band q >= floor(n/2) + 1: the two counters can never both
//! reach q, so each side's declaration probability is a closed-form binomial
//! sum in its own cumulative series, evaluated independently per step.
void run_high_side(const std::vector<double>& p_series, int n, int q,
                   int horizon, std::vector<double>& out) {
  double pi_prev = 0.0;
  for (int t = 1; t <= horizon; ++t) {
    const double pt = *series_at(p_series, t);
    const double pi_t = std::min(1.0, pi_prev + pt);
    double value = 0.0;
    if (pt > 0.0) {
      const double lpt = safe_log(pt);
      const double lpi_prev = safe_log(pi_prev);
      const double lrest = safe_log(std::max(0.0, 1.0 - pi_t));
      if (t == 1) {
        for (int hh = q; hh <= n; ++hh) {
          value += std::exp(log_binomial(n, hh) + xlogx_pow(hh, lpt) +
                            xlogx_pow(n - hh, lrest));
        }
      } else {
        for (int k = 0; k < q; ++k) {
          const double louter = log_binomial(n, k) + xlogx_pow(k, lpi_prev);
          if (louter == kNegInf) continue;
          double inner = 0.0;
          for (int hh = q - k; hh <= n - k; ++hh) {
            inner += std::exp(log_binomial(n - k, hh) + xlogx_pow(hh, lpt) +
                              xlogx_pow(n - k - hh, lrest));
          }
          if (inner > 0.0) value += std::exp(louter + safe_log(inner));
        }
      }
    }
    out[static_cast<size_t>(t) - 1] = value;
    pi_prev = pi_t;
  }
}

EngineResult run_high(const HypothesisProfile& h, int n, int q, int horizon) {
  EngineResult res;
  res.out0.assign(static_cast<size_t>(horizon), 0.0);
  res.out1.assign(static_cast<size_t>(horizon), 0.0);
  run_high_side(h.p_say0, n, q, horizon, res.out0);
  run_high_side(h.p_say1, n, q, horizon, res.out1);
  res.steps_run = horizon;
  res.state_cells = 2;
  return res;
}

EngineResult run_copy(const HypothesisProfile& h, int horizon) {
  EngineResult res;
  res.out0.assign(static_cast<size_t>(horizon), 0.0);
  res.out1.assign(static_cast<size_t>(horizon), 0.0);
  const int upto = std::min(horizon, h.t_max());
  for (int t = 1; t <= upto; ++t) {
    res.out0[static_cast<size_t>(t) - 1] = h.p_say0[static_cast<size_t>(t) - 1];
    res.out1[static_cast<size_t>(t) - 1] = h.p_say1[static_cast<size_t>(t) - 1];
  }
  res.steps_run = upto;
  res.state_cells = 2;
  // A one-agent group is its agent: reuse the stored never-decide mass so
  // the identity holds bitwise instead of up to summation rounding.
  if (upto == h.t_max()) res.p_nd_exact = h.p_nd;
  return res;
}

double literal_tip(int m, int h_min, int cap_base, double p_fav, double p_oth,
                   double u) {
  const double lpf = safe_log(p_fav);
  const double lpo = safe_log(p_oth);
  const double lu = safe_log(std::max(0.0, u));
  double sum = 0.0;
  for (int hf = std::max(1, h_min); hf <= m; ++hf) {
    int cap = hf + cap_base;
    if (cap < 0) continue;
    if (cap > m - hf) cap = m - hf;
    for (int ho = 0; ho <= cap; ++ho) {
      sum += std::exp(log_binomial(m, hf) + xlogx_pow(hf, lpf) +
                      log_binomial(m - hf, ho) + xlogx_pow(ho, lpo) +
                      xlogx_pow(m - hf - ho, lu));
    }
  }
  return sum;
}

}  // namespace

double alpha(int s0, int s1, double pi0, double pi1) {
  if (s0 < 0 || s1 < 0) throw std::invalid_argument("alpha: negative count");
  return std::exp(log_binomial(s0 + s1, s0) + xlogx_pow(s0, safe_log(pi0)) +
                  xlogx_pow(s1, safe_log(pi1)));
}

double beta(int n, int q, int s_fav, int s_oth, double p_fav, double p_oth,
            double pi_fav, double pi_oth) {
  if (s_fav < 0 || s_fav > q - 1 || s_oth < 0 || s_oth > q - 1) {
    throw std::invalid_argument("beta: counts must lie in [0, q-1]");
  }
  const int m = n - s_fav - s_oth;
  return literal_tip(m, q - s_fav, s_fav - s_oth - 1, p_fav, p_oth,
                     1.0 - pi_fav - pi_oth);
}

double beta_bar(int n, int s, double p_fav, double p_oth, double pi_fav,
                double pi_oth) {
  if (2 * s > n) throw std::invalid_argument("beta_bar: 2s exceeds n");
  return literal_tip(n - 2 * s, 1, -1, p_fav, p_oth, 1.0 - pi_fav - pi_oth);
}

double alpha_bar_step(int q, int s, const std::vector<double>& prev_alpha_bar,
                      double pi0_prev, double pi1_prev, double p0, double p1) {
  if (s < q) throw std::invalid_argument("alpha_bar_step: s below q");
  const double lp0 = safe_log(p0);
  const double lp1 = safe_log(p1);
  const double lpi0 = safe_log(pi0_prev);
  const double lpi1 = safe_log(pi1_prev);
  double acc = 0.0;
  for (int s0 = 0; s0 < q && s0 <= s; ++s0) {
    for (int s1 = 0; s1 < q && s1 <= s; ++s1) {
      const int sbar = s0 + s1;
      acc += std::exp(log_binomial(2 * s, sbar) +
                      log_binomial(2 * s - sbar, s - s0) +
                      log_binomial(sbar, s0) + xlogx_pow(s0, lpi0) +
                      xlogx_pow(s1, lpi1) + xlogx_pow(s - s0, lp0) +
                      xlogx_pow(s - s1, lp1));
    }
  }
  for (int hh = q; hh <= s; ++hh) {
    const size_t idx = static_cast<size_t>(hh - q);
    const double prev = idx < prev_alpha_bar.size() ? prev_alpha_bar[idx] : 0.0;
    if (prev <= 0.0) continue;
    acc += std::exp(log_binomial(2 * s, 2 * hh) +
                    log_binomial(2 * s - 2 * hh, s - hh) + safe_log(prev) +
                    xlogx_pow(s - hh, lp0) + xlogx_pow(s - hh, lp1));
  }
  return acc;
}

namespace {

EnginePath choose_path(int n, int q) {
  if (n == 1 && q == 1) return EnginePath::kCopy;
  if (q == 1) return EnginePath::kConvolution;
  if (q <= n / 2) return EnginePath::kGeneral;
  return EnginePath::kClosedForm;
}

void require_band(EnginePath path, int n, int q) {
  const bool ok = [&] {
    switch (path) {
      case EnginePath::kCopy:
        return n == 1 && q == 1;
      case EnginePath::kConvolution:
        return q == 1;
      case EnginePath::kGeneral:
        return q >= 1 && q <= n / 2;
      case EnginePath::kClosedForm:
        return q >= n / 2 + 1;
      default:
        return true;
    }
  }();
  if (!ok) {
    throw std::invalid_argument(
        "aggregate: forced engine path outside its (n, q) band");
  }
}

}  // namespace

GroupOutcome aggregate_under(const DecisionProfile& profile, GroupSpec spec,
                             int hypothesis, const AggregateOptions& options,
                             AggregateStats* stats) {
  if (spec.n < 1) throw std::invalid_argument("aggregate: n must be >= 1");
  if (spec.q < 1 || spec.q > spec.n) {
    throw std::invalid_argument("aggregate: q must satisfy 1 <= q <= n");
  }
  if (hypothesis != 0 && hypothesis != 1) {
    throw std::invalid_argument("aggregate: hypothesis must be 0 or 1");
  }
  const HypothesisProfile& h = profile.under(hypothesis);
  if (h.t_max() < 1) throw std::invalid_argument("aggregate: empty profile");
  const int horizon = options.horizon > 0 ? options.horizon : h.t_max();

  EnginePath path = options.force_path == EnginePath::kAuto
                        ? choose_path(spec.n, spec.q)
                        : options.force_path;
  require_band(path, spec.n, spec.q);

  EngineResult er;
  switch (path) {
    case EnginePath::kCopy:
      er = run_copy(h, horizon);
      break;
    case EnginePath::kConvolution:
      er = run_fastest(h, spec.n, horizon, options.tail_tol,
                       options.early_stop);
      break;
    case EnginePath::kGeneral:
      er = run_general(h, spec.n, spec.q, horizon, options.tail_tol,
                       options.early_stop);
      break;
    case EnginePath::kClosedForm:
      er = run_high(h, spec.n, spec.q, horizon);
      break;
    default:
      throw std::invalid_argument("aggregate: unreachable engine path");
  }

  GroupOutcome out;
  out.p0 = std::move(er.out0);
  out.p1 = std::move(er.out1);
  out.n = spec.n;
  out.q = spec.q;
  out.hypothesis = hypothesis;
  double total0 = 0.0, total1 = 0.0;
  for (double v : out.p0) total0 += v;
  for (double v : out.p1) total1 += v;
  out.p_c = hypothesis == 1 ? total1 : total0;
  out.p_w = hypothesis == 1 ? total0 : total1;
  out.p_nd = er.p_nd_exact >= 0.0
                 ? er.p_nd_exact
                 : std::min(1.0, std::max(0.0, 1.0 - total0 - total1));

  HypothesisProfile as_profile;
  as_profile.p_say0 = out.p0;
  as_profile.p_say1 = out.p1;
  as_profile.p_nd = out.p_nd;
  const ExpectedTime et = expected_decision_time(as_profile, options.tail_tol);
  out.e_t = et.mean;
  out.e_t_conditional = et.conditional_mean;

  if (stats != nullptr) {
    stats->state_cells = er.state_cells;
    stats->steps_run = er.steps_run;
    stats->path_used = path;
  }
  return out;
}

GroupResult aggregate(const DecisionProfile& profile, GroupSpec spec,
                      const AggregateOptions& options) {
  GroupResult result;
  result.under_h0 = aggregate_under(profile, spec, 0, options);
  result.under_h1 = aggregate_under(profile, spec, 1, options);
  return result;
}

}  // namespace sda
