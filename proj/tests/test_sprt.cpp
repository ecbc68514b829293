//! \file test_sprt.cpp
//! \brief Checks the sequential-test engines: threshold design, the
//!        log-likelihood-ratio parameterization, the binomial lattice
//!        recursion, and the gaussian absorbing-chain discretization against
//!        its own closed form.

#include <cmath>
#include <stdexcept>

#include "sda/profile.hpp"
#include "sda/sprt.hpp"
#include "test_common.hpp"

using namespace sda;
using namespace testutil;

namespace {

//! Max absolute difference between the per-step arrays of two profiles.
double profile_diff(const DecisionProfile& a, const DecisionProfile& b) {
  double worst = std::fabs(a.under_h0.p_nd - b.under_h0.p_nd);
  worst = std::max(worst, std::fabs(a.under_h1.p_nd - b.under_h1.p_nd));
  const int t = std::max(a.t_max(), b.t_max());
  auto at = [](const std::vector<double>& v, int i) {
    return i < static_cast<int>(v.size()) ? v[static_cast<size_t>(i)] : 0.0;
  };
  for (int i = 0; i < t; ++i) {
    worst = std::max(worst, std::fabs(at(a.under_h0.p_say0, i) -
                                      at(b.under_h0.p_say0, i)));
    worst = std::max(worst, std::fabs(at(a.under_h0.p_say1, i) -
                                      at(b.under_h0.p_say1, i)));
    worst = std::max(worst, std::fabs(at(a.under_h1.p_say0, i) -
                                      at(b.under_h1.p_say0, i)));
    worst = std::max(worst, std::fabs(at(a.under_h1.p_say1, i) -
                                      at(b.under_h1.p_say1, i)));
  }
  return worst;
}

}  // namespace

int main() {
  const double log9 = std::log(9.0);

  // --- Threshold design --------------------------------------------------
  {
    const WaldThresholds w = wald_thresholds(0.1, 0.1);
    check_close(w.eta1, log9, 1e-15, "symmetric 0.1 design: upper log 9");
    check_close(w.eta0, -log9, 1e-15, "symmetric 0.1 design: lower -log 9");
    const WaldThresholds v = wald_thresholds(0.01, 0.05);
    check_close(v.eta0, std::log(0.01 / 0.95), 1e-15,
                "asymmetric design lower threshold");
    check_close(v.eta1, std::log(0.99 / 0.05), 1e-15,
                "asymmetric design upper threshold");
  }
  check_throws<std::invalid_argument>([] { wald_thresholds(0.0, 0.1); },
                                      "zero miss rate is rejected");
  check_throws<std::invalid_argument>([] { wald_thresholds(0.5, 0.5); },
                                      "rates summing to one are rejected");

  // --- Model validation ---------------------------------------------------
  check_throws<std::invalid_argument>(
      [] { make_gaussian_model(0, 1, 1, 0.5, 1.0); },
      "lower threshold must be negative");
  check_throws<std::invalid_argument>(
      [] { make_gaussian_model(0, 0, 1, -1, 1); },
      "equal means are rejected");
  check_throws<std::invalid_argument>(
      [] { make_gaussian_model(0, 1, 0, -1, 1); },
      "non-positive sigma is rejected");
  check_throws<std::invalid_argument>(
      [] { make_binomial_model(5, 0.0, 0.5, -1, 1); },
      "binomial success rates must be inside (0, 1)");
  check_throws<std::invalid_argument>(
      [] { make_binomial_model(0, 0.4, 0.6, -1, 1); },
      "at least one trial per observation is required");

  // --- Log-likelihood-ratio parameterization -----------------------------
  {
    const SprtModel m = make_gaussian_model(0, 1, 1, -log9, log9);
    const LlrSpec s = llr_spec(m);
    check_close(s.slope, 1.0, 1e-15, "gaussian slope (mu1-mu0)/sigma^2");
    check_close(s.offset, -0.5, 1e-15, "gaussian offset -(mu1^2-mu0^2)/2s^2");
    check_close(llr_step_mean(m, 1), 0.5, 1e-15, "drift +1/2 under H1");
    check_close(llr_step_mean(m, 0), -0.5, 1e-15, "drift -1/2 under H0");
    check_close(llr_step_sd(m, 1), 1.0, 1e-15, "per-step sd slope * sigma");
  }
  {
    const SprtModel m = make_binomial_model(5, 0.45, 0.55, -log9, log9);
    const LlrSpec s = llr_spec(m);
    check_close(s.slope, 2.0 * std::log(11.0 / 9.0), 1e-15,
                "binomial slope is the logit difference");
    check(llr_step_mean(m, 1) > 0.0 && llr_step_mean(m, 0) < 0.0,
          "drift pushes toward the true hypothesis");
    check(llr_step_sd(m, 1) > 0.0, "binomial per-step sd is positive");
  }

  // --- Gaussian discretization -------------------------------------------
  const SprtModel gauss1 = make_gaussian_model(0, 1, 1, -log9, log9);
  {
    const AbsorbingChain c = discretize(gauss1, 0.1);
    check(c.n_states == 45 && c.lo_idx == -22 && c.hi_idx == 22,
          "0.1 lattice spans 45 states over [-log 9, log 9]");
    check(c.start_index == 22, "the start state is the zero lattice point");
    check_close(c.state_values[static_cast<size_t>(c.start_index)], 0.0,
                1e-12, "start state value is zero");
    double worst_row = 0.0;
    for (int i = 0; i < c.n_states; ++i) {
      const double s0 = c.a_h0.row(i).sum();
      const double s1 = c.a_h1.row(i).sum();
      worst_row = std::max(worst_row, std::fabs(s0 - 1.0));
      worst_row = std::max(worst_row, std::fabs(s1 - 1.0));
    }
    check(worst_row <= 1e-12, "transition rows are stochastic");
    check(c.a_h1(0, 0) == 1.0 && c.a_h1(c.n_states - 1, c.n_states - 1) == 1.0,
          "boundary states absorb");
    // Mean of the step-increment pmf reproduces the drift.
    double mean = 0.0;
    const int off = c.n_states - 2;
    for (int j = -off; j <= off; ++j) {
      mean += j * c.delta * c.inc_pmf_h1[static_cast<size_t>(j + off)];
    }
    check_close(mean, 0.5, 5e-3, "discretized increment mean matches drift");
  }
  {
    const AbsorbingChain c = discretize(gauss1);
    check(c.n_states >= 400 && c.n_states <= 480,
          "default lattice step yields a few hundred states");
  }
  check_throws<std::invalid_argument>([&] { discretize(gauss1, 5.0); },
                                      "coarse lattices below 5 states throw");

  // --- Chain profile: pinned single-agent statistics ---------------------
  const DecisionProfile prof1 = sprt_profile(gauss1);
  {
    const ValidationReport r = validate_profile(prof1);
    check(r.ok, "unit-noise profile validates");
    check(prof1.t_max() == 75, "tail tolerance 1e-9 truncates at t = 75");
    double p_w = 0.0, p_c = 0.0;
    for (double v : prof1.under_h1.p_say0) p_w += v;
    for (double v : prof1.under_h1.p_say1) p_c += v;
    check_close(p_w, 0.05880384035509654, 1e-10,
                "wrong-decision probability under H1");
    check_close(p_c, 0.9411961588701889, 1e-10,
                "correct-decision probability under H1");
    check(prof1.under_h1.p_nd < 1e-9, "never-decide mass below tolerance");
    const ExpectedTime e = expected_decision_time(prof1.under_h1, 1e-8);
    check_close(e.mean, 5.167860344470223, 1e-7, "mean decision time");
    bool nonneg = true;
    double cum = 0.0;
    for (int i = 0; i < prof1.t_max(); ++i) {
      const size_t k = static_cast<size_t>(i);
      nonneg = nonneg && prof1.under_h1.p_say0[k] >= 0.0 &&
               prof1.under_h1.p_say1[k] >= 0.0;
      cum += prof1.under_h1.p_say0[k] + prof1.under_h1.p_say1[k];
    }
    check(nonneg && cum <= 1.0 + 1e-12,
          "absorption increments are nonnegative and bounded");
  }

  // --- Chain iteration vs closed-form solves -----------------------------
  {
    const AbsorbingChain c = discretize(gauss1);
    const DecisionProfile prof = chain_profile(c);
    const ChainClosedForm cf = chain_closed_form(c);
    double p0_h1 = 0.0, p1_h1 = 0.0, p0_h0 = 0.0, p1_h0 = 0.0;
    for (double v : prof.under_h1.p_say0) p0_h1 += v;
    for (double v : prof.under_h1.p_say1) p1_h1 += v;
    for (double v : prof.under_h0.p_say0) p0_h0 += v;
    for (double v : prof.under_h0.p_say1) p1_h0 += v;
    check_close(p0_h1, cf.under_h1.p0, 1e-9,
                "iterated H0-absorption matches the linear solve (H1)");
    check_close(p1_h1, cf.under_h1.p1, 1e-9,
                "iterated H1-absorption matches the linear solve (H1)");
    check_close(p0_h0, cf.under_h0.p0, 1e-9,
                "iterated H0-absorption matches the linear solve (H0)");
    check_close(p1_h0, cf.under_h0.p1, 1e-9,
                "iterated H1-absorption matches the linear solve (H0)");
    const ExpectedTime e1 = expected_decision_time(prof.under_h1, 1e-8);
    check_close(e1.conditional_mean, cf.under_h1.expected_time, 1e-6,
                "iterated mean time matches the fundamental-matrix solve");
  }

  // --- Lattice-step refinement stability ---------------------------------
  {
    const AbsorbingChain c = discretize(gauss1);
    const DecisionProfile coarse = chain_profile(c);
    const DecisionProfile fine =
        chain_profile(discretize(gauss1, c.delta / 2.0));
    double pw_c = 0.0, pw_f = 0.0;
    for (double v : coarse.under_h1.p_say0) pw_c += v;
    for (double v : fine.under_h1.p_say0) pw_f += v;
    check_close(pw_c, pw_f, 5e-3, "halving the step moves p_w only slightly");
    const double et_c = expected_decision_time(coarse.under_h1, 1e-8).mean;
    const double et_f = expected_decision_time(fine.under_h1, 1e-8).mean;
    check_close(et_c, et_f, 0.05, "halving the step moves E[T] only slightly");
  }

  // --- Binomial lattice recursion ----------------------------------------
  {
    struct Case {
      double eps, p_w, e_t, tol_t;
    };
    const Case cases[] = {{0.05, 0.086202, 19.6804, 5e-3},
                          {0.08, 0.075163, 8.4717, 5e-3},
                          {0.02, 0.090908, 117.886, 5e-2}};
    for (const Case& cs : cases) {
      const SprtModel m =
          make_binomial_model(5, 0.5 - cs.eps, 0.5 + cs.eps, -log9, log9);
      const DecisionProfile prof = kdp_profile(m);
      check(validate_profile(prof).ok,
            "binomial profile validates (eps " + std::to_string(cs.eps) + ")");
      check(prof.under_h1.p_nd <= 1e-9,
            "binomial never-decide mass below tolerance (eps " +
                std::to_string(cs.eps) + ")");
      double p_w = 0.0;
      for (double v : prof.under_h1.p_say0) p_w += v;
      check_close(p_w, cs.p_w, 5e-6,
                  "binomial wrong-decision probability (eps " +
                      std::to_string(cs.eps) + ")");
      const ExpectedTime e = expected_decision_time(prof.under_h1, 1e-8);
      check_close(e.mean, cs.e_t, cs.tol_t,
                  "binomial mean decision time (eps " +
                      std::to_string(cs.eps) + ")");
    }
  }

  // Symmetric binomial model: the two conditioning hypotheses mirror.
  {
    const SprtModel m = make_binomial_model(5, 0.45, 0.55, -log9, log9);
    const DecisionProfile prof = kdp_profile(m);
    double worst = 0.0;
    for (int i = 0; i < prof.t_max(); ++i) {
      const size_t k = static_cast<size_t>(i);
      worst = std::max(worst, std::fabs(prof.under_h0.p_say0[k] -
                                        prof.under_h1.p_say1[k]));
      worst = std::max(worst, std::fabs(prof.under_h0.p_say1[k] -
                                        prof.under_h1.p_say0[k]));
    }
    check(worst <= 1e-12,
          "symmetric model mirrors across hypotheses, worst " +
              std::to_string(worst));
  }

  // --- Dispatch and horizons ---------------------------------------------
  {
    const SprtModel m = make_binomial_model(5, 0.45, 0.55, -log9, log9);
    check(profile_diff(sprt_profile(m), kdp_profile(m)) == 0.0,
          "sprt_profile dispatches binomial models to the lattice");
    check(profile_diff(sprt_profile(gauss1),
                       chain_profile(discretize(gauss1))) == 0.0,
          "sprt_profile dispatches gaussian models to the chain");
    const DecisionProfile cut = kdp_profile(m, kDefaultTailTol, 10);
    check(cut.t_max() == 10 && cut.under_h1.p_nd > 0.0,
          "an explicit horizon truncates and records the remainder");
    const DecisionProfile cut_g = sprt_profile(gauss1, kDefaultTailTol, 12);
    check(cut_g.t_max() == 12, "gaussian horizon truncates the chain run");
  }

  return summary("test_sprt");
}
