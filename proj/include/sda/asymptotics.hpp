//! \file asymptotics.hpp
//! \brief Large-group predictors: limits of the fastest (q = 1) and majority
//!        (q = floor(N/2) + 1) rules, half-range binomial sums, and
//!        monotonicity reports across the threshold range.

#pragma once

#include <string>
#include <vector>

#include "sda/profile.hpp"

namespace sda {

//! Limiting behavior of the fastest rule as the group grows: the group
//! decides at the earliest step any single agent can decide, and the
//! limiting error probability depends only on which verdict is more likely
//! at that step.
struct FastestLimits {
  int t_bar = 0;        // earliest possible single-agent decision step
  double limit_pw = 0;  // limiting wrong-decision probability: 0, 1/2, or 1
  double limit_et = 0;  // limiting expected decision time (equals t_bar)
};

//! First step at which the single-agent profile has nonzero decision mass.
//! Throws if every entry is zero (beyond the floating-point slack).
int earliest_decision_time(const HypothesisProfile& h);

FastestLimits fastest_limits(const DecisionProfile& profile,
                             int hypothesis = 1);

//! Group wrong-decision probability under the majority rule when each of the
//! N agents errs independently with probability p_w_single: the upper
//! binomial tail from floor(N/2) + 1, evaluated in log space.
double majority_pw(double p_w_single, int n);

//! Leading-order large-N approximation of majority_pw, valid for
//! p_w_single < 1/4 (rejected otherwise).
double majority_pw_asymptote(double p_w_single, int n);

enum class MajorityCaseTag { kA1, kA2, kA3, kA4, kIndeterminate };

//! Classification of the majority rule's limiting expected decision time
//! from the single-agent cumulative verdict trajectories. Times that do not
//! apply to the detected case are left at -1; an unbounded limit is
//! represented by +infinity.
struct MajorityTimeCase {
  MajorityCaseTag tag = MajorityCaseTag::kIndeterminate;
  int t_lt_half = -1;  // last step with dominant-side cumulative mass < 1/2
  int t_gt_half = -1;  // first step with dominant-side cumulative mass > 1/2
  int t0 = -1;         // exact-half hit step of the say-H0 trajectory
  int t1 = -1;         // exact-half hit step of the say-H1 trajectory
  double limit_et = 0.0;
  std::string note;
};

MajorityTimeCase majority_et_limit(const DecisionProfile& profile,
                                   int hypothesis = 1);

enum class HalfSide { kLower, kUpper };

//! Half-range scaled binomial sum over odd N:
//! lower: sum_{j=0}^{floor(N/2)} C(N,j) x^j (c-x)^(N-j);
//! upper: sum_{j=ceil(N/2)}^{N}. Requires 0 < c <= 1 and 0 <= x <= c/2.
double half_binomial(int n, double c, double x, HalfSide side);

struct MonotonicityRow {
  int n = 0;
  int q = 0;
  std::string metric;
  double value = 0.0;
  bool monotone_ok = true;
};

struct MonotonicityReport {
  std::vector<MonotonicityRow> rows;
  bool theorems_ok = true;               // asserted chains all held
  std::vector<std::string> findings;     // reported-only chain violations
};

//! Evaluates, for each group size in n_grid, the monotonicity chains over
//! the threshold q: expected time nondecreasing over the full range
//! (metric "e_t"); correct/wrong probabilities nonincreasing and
//! never-decide mass nondecreasing over the high band q >= floor(N/2) + 1
//! (metrics "p_c_high", "p_w_high", "p_nd_high"); and the low-band
//! conjectured chains q <= floor(N/2) + 1 (metrics "p_c_conj", "p_w_conj"),
//! which are reported as findings rather than asserted. An empty q_grid
//! means all q in 1..N.
MonotonicityReport monotonicity_suite(const DecisionProfile& profile,
                                      const std::vector<int>& n_grid,
                                      const std::vector<int>& q_grid = {},
                                      int hypothesis = 1,
                                      double slack = 1e-9);

}  // namespace sda
