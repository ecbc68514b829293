//! \file test_asymptotics.cpp
//! \brief Checks the large-group predictors: fastest-rule limits, the
//!        majority error tail and its leading-order approximation, the
//!        limiting-time classifier, half-range binomial sums, and the
//!        monotonicity suite.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "sda/asymptotics.hpp"
#include "test_common.hpp"

using namespace sda;
using namespace testutil;

namespace {

DecisionProfile from_branch(const std::vector<double>& p0,
                            const std::vector<double>& p1, double p_nd) {
  HypothesisProfile h;
  h.p_say0 = p0;
  h.p_say1 = p1;
  h.p_nd = p_nd;
  DecisionProfile p;
  p.under_h0 = h;
  p.under_h1 = h;
  return p;
}

}  // namespace

int main() {
  const double inf = std::numeric_limits<double>::infinity();

  // --- Earliest decision time ---------------------------------------------
  {
    HypothesisProfile h;
    h.p_say0 = {0.0, 0.0, 0.2};
    h.p_say1 = {0.0, 0.0, 0.5};
    h.p_nd = 0.3;
    check(earliest_decision_time(h) == 3, "first nonzero step is found");
    HypothesisProfile empty;
    empty.p_say0 = {0.0, 0.0};
    empty.p_say1 = {0.0, 0.0};
    check_throws<std::invalid_argument>(
        [&] { earliest_decision_time(empty); },
        "a massless profile has no earliest time");
  }

  // --- Fastest-rule limits -------------------------------------------------
  {
    const FastestLimits correct =
        fastest_limits(from_branch({0.0, 0.1}, {0.0, 0.3}, 0.6), 1);
    check(correct.t_bar == 2 && correct.limit_pw == 0.0 &&
              correct.limit_et == 2.0,
          "correct side ahead at the earliest step: error tends to 0");
    const FastestLimits wrong =
        fastest_limits(from_branch({0.3}, {0.1}, 0.6), 1);
    check(wrong.limit_pw == 1.0,
          "wrong side ahead at the earliest step: error tends to 1");
    const FastestLimits tied =
        fastest_limits(from_branch({0.2, 0.2}, {0.2, 0.3}, 0.1), 1);
    check(tied.t_bar == 1 && tied.limit_pw == 0.5 && tied.limit_et == 1.0,
          "tied earliest step: error tends to 1/2");
  }

  // --- Majority error tail -------------------------------------------------
  check_close(majority_pw(0.1, 1), 0.1, 1e-15, "single agent keeps its rate");
  check_close(majority_pw(0.1, 3), 0.028, 1e-15, "three agents: 0.028");
  check_close(majority_pw(0.1, 5), 0.00856, 1e-15, "five agents: 0.00856");
  check(majority_pw(0.5, 7) == 0.5, "an uninformative agent stays at 1/2");
  check_throws<std::invalid_argument>([] { majority_pw(0.1, 4); },
                                      "even group sizes are rejected");
  check_throws<std::invalid_argument>([] { majority_pw(1.5, 3); },
                                      "probabilities outside [0,1] rejected");
  {
    bool decreasing = true, increasing = true;
    double prev_lo = majority_pw(0.1, 1), prev_hi = majority_pw(0.7, 1);
    for (int n = 3; n <= 101; n += 2) {
      const double lo = majority_pw(0.1, n);
      const double hi = majority_pw(0.7, n);
      decreasing = decreasing && lo < prev_lo;
      increasing = increasing && hi > prev_hi;
      prev_lo = lo;
      prev_hi = hi;
    }
    check(decreasing, "error below 1/2 decays strictly with group size");
    check(increasing, "error above 1/2 grows strictly with group size");
  }

  // --- Leading-order approximation ----------------------------------------
  check_throws<std::invalid_argument>([] { majority_pw_asymptote(0.3, 11); },
                                      "approximation requires p < 1/4");
  check(majority_pw_asymptote(0.0, 11) == 0.0, "p = 0 maps to 0");
  check_close(majority_pw(0.1, 11) / majority_pw_asymptote(0.1, 11),
              0.903486, 1e-5, "ratio to the exact tail at N = 11");

  // --- Limiting-time classifier -------------------------------------------
  {
    const MajorityTimeCase c =
        majority_et_limit(from_branch({0.0, 0.0, 0.0}, {0.4, 0.3, 0.3}, 0.0),
                          1);
    check(c.tag == MajorityCaseTag::kA1 && c.t_lt_half == 1 &&
              c.t_gt_half == 2,
          "dominant side crossing: crossing steps identified");
    check_close(c.limit_et, 2.0, 1e-15, "crossing limit (1 + 2 + 1) / 2");
  }
  {
    const MajorityTimeCase c = majority_et_limit(
        from_branch({0, 0, 0, 0, 0, 0, 0},
                    {0.2, 0.2, 0.1, 0.0, 0.0, 0.2, 0.3}, 0.0),
        1);
    check(c.tag == MajorityCaseTag::kA1 && c.t_lt_half == 2 &&
              c.t_gt_half == 6,
          "an exact-half plateau defers the crossing");
    check_close(c.limit_et, 4.5, 1e-15, "plateau limit (2 + 6 + 1) / 2");
  }
  {
    const MajorityTimeCase c =
        majority_et_limit(from_branch({0.0, 0.0}, {0.8, 0.2}, 0.0), 1);
    check(c.tag == MajorityCaseTag::kA1 && c.t_lt_half == 0 &&
              c.t_gt_half == 1 && c.limit_et == 1.0,
          "immediate crossing uses the step-zero convention");
  }
  {
    const MajorityTimeCase c =
        majority_et_limit(from_branch({0.4, 0.3, 0.3}, {0.0, 0.0, 0.0}, 0.0),
                          1);
    check(c.tag == MajorityCaseTag::kA1 && !c.note.empty(),
          "a dominant wrong side is flagged but classified");
  }
  {
    const MajorityTimeCase c = majority_et_limit(
        from_branch({0.3, 0.2, 0.0, 0.0}, {0.1, 0.2, 0.1, 0.1}, 0.0), 1);
    check(c.tag == MajorityCaseTag::kA2 && c.t0 == 2 && c.t1 == 4,
          "even split with two exact-half hits");
    check_close(c.limit_et, 3.0, 1e-15, "exact-hit limit (2 + 4) / 2");
  }
  {
    // One trajectory lands within the exact-hit slack of one half; the
    // other stays a little more than the slack below it, yet close enough
    // that the totals still read as an even split. Dyadic gaps keep every
    // quantity exact in double precision.
    const double hit_gap = std::ldexp(1.0, -41);       // ~4.5e-13 <= slack
    const double approach_gap = std::ldexp(3.0, -41);  // ~1.4e-12 >  slack
    const std::vector<double> say0 = {0.5 - hit_gap, 0.0, 0.0};
    const std::vector<double> say1 = {0.25, 0.25 - approach_gap, 0.0};
    const MajorityTimeCase c = majority_et_limit(
        from_branch(say0, say1, hit_gap + approach_gap), 1);
    check(c.tag == MajorityCaseTag::kA3 && c.limit_et == inf && c.t0 == 1 &&
              c.t1 == -1,
          "one exact hit, one asymptotic approach: unbounded limit");
  }
  {
    const double approach_gap = std::ldexp(3.0, -41);
    const std::vector<double> both = {0.25, 0.25 - approach_gap, 0.0};
    const MajorityTimeCase c =
        majority_et_limit(from_branch(both, both, 2.0 * approach_gap), 1);
    check(c.tag == MajorityCaseTag::kA4 && c.limit_et == inf,
          "double asymptotic approach: unbounded limit");
  }
  check_throws<std::invalid_argument>(
      [] {
        majority_et_limit(from_branch({0.5}, {0.3}, 0.2), 1);
      },
      "classification requires almost-sure decisions");

  // --- Half-range binomial sums -------------------------------------------
  {
    const double lo = half_binomial(9, 0.8, 0.3, HalfSide::kLower);
    const double hi = half_binomial(9, 0.8, 0.3, HalfSide::kUpper);
    check_close(lo + hi, std::pow(0.8, 9), 1e-14,
                "halves sum to the full power c^N");
  }
  {
    const double lo = half_binomial(11, 0.6, 0.3, HalfSide::kLower);
    const double hi = half_binomial(11, 0.6, 0.3, HalfSide::kUpper);
    check_close(lo, hi, 1e-14, "x = c/2 balances the halves exactly");
  }
  check_close(half_binomial(11, 1.0, 0.1, HalfSide::kUpper),
              majority_pw(0.1, 11), 1e-15,
              "upper half at c = 1 is the majority error tail");
  check(half_binomial(301, 1.0, 0.3, HalfSide::kUpper) < 1e-6,
        "deep upper tail at N = 301 is below 1e-6");
  {
    bool strict = true;
    for (double x : {0.1, 0.3, 0.45}) {
      double prev = half_binomial(3, 1.0, x, HalfSide::kUpper);
      for (int n = 5; n <= 101; n += 2) {
        const double cur = half_binomial(n, 1.0, x, HalfSide::kUpper);
        strict = strict && cur < prev;
        prev = cur;
      }
    }
    check(strict, "upper halves decay strictly in N for x < c/2");
  }
  check_throws<std::invalid_argument>(
      [] { half_binomial(4, 1.0, 0.1, HalfSide::kLower); },
      "even N is rejected");
  check_throws<std::invalid_argument>(
      [] { half_binomial(5, 0.0, 0.0, HalfSide::kLower); },
      "c = 0 is rejected");
  check_throws<std::invalid_argument>(
      [] { half_binomial(5, 0.6, 0.4, HalfSide::kLower); },
      "x beyond c/2 is rejected");

  // --- Monotonicity suite --------------------------------------------------
  {
    const DecisionProfile p =
        from_branch({0.1, 0.05, 0.05}, {0.4, 0.2, 0.2}, 0.0);
    const MonotonicityReport rep = monotonicity_suite(p, {3, 5});
    check(rep.theorems_ok, "asserted chains hold on the small grid");
    check(!rep.rows.empty(), "the report carries per-(N, q) rows");
    // The expected-time chain is present for every q and nondecreasing.
    bool found_et = false, chain_ok = true;
    double prev = -1.0;
    for (const MonotonicityRow& r : rep.rows) {
      if (r.n == 5 && r.metric == "e_t") {
        found_et = true;
        chain_ok = chain_ok && r.monotone_ok;
        chain_ok = chain_ok && (prev < 0.0 || r.value >= prev - 1e-9);
        prev = r.value;
      }
    }
    check(found_et && chain_ok,
          "expected time is nondecreasing across thresholds at N = 5");
    const MonotonicityReport sub = monotonicity_suite(p, {5}, {1, 3});
    bool only_sub = true;
    for (const MonotonicityRow& r : sub.rows) {
      only_sub = only_sub && (r.q == 1 || r.q == 3);
    }
    check(only_sub && !sub.rows.empty(),
          "an explicit q grid restricts the report");
    check_throws<std::invalid_argument>(
        [&] { monotonicity_suite(p, {4}); },
        "even group sizes are rejected by the suite");
  }

  return summary("test_asymptotics");
}
