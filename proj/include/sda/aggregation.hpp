//! \file aggregation.hpp
//! \brief Exact group decision probabilities for N independent SDMs fused by
//!        a q-out-of-N counting rule, for every 1 <= q <= N.
//!
//! The fusion center tracks Count0/Count1 of verdicts that arrived so far and
//! declares hypothesis i at the first time t where Count_i(t) >= q and
//! Count_i(t) strictly exceeds the other counter. Simultaneous threshold
//! crossings that tie the counters defer the decision (possibly forever).

#ifndef SDA_AGGREGATION_HPP
#define SDA_AGGREGATION_HPP

#include <vector>

#include "sda/profile.hpp"

namespace sda {

//! Which recursion engine computed a result (or is forced by options).
enum class EnginePath {
  kAuto,         //!< dispatch on (n, q)
  kCopy,         //!< n == 1, q == 1: group equals the single SDM, bit exact
  kConvolution,  //!< q == 1 fast path via signed difference-walk convolution
  kGeneral,      //!< full low-threshold recursion, 1 <= q <= floor(n/2)
  kClosedForm,   //!< high-threshold band, q >= floor(n/2) + 1
};

struct AggregateOptions {
  int horizon = 0;          //!< steps to run; 0 means the profile's t_max
  double tail_tol = kDefaultTailTol;
  bool early_stop = false;  //!< stop after 10 consecutive steps of
                            //!< per-step group mass below tail_tol
  EnginePath force_path = EnginePath::kAuto;
};

//! Instrumentation of one aggregation run.
struct AggregateStats {
  int state_cells = 0;  //!< persistent probability cells carried across t
  int steps_run = 0;
  EnginePath path_used = EnginePath::kAuto;
};

//! Per-t group decision probabilities and derived metrics, conditioned on one
//! hypothesis being true. Arrays are 0-based (index i <-> time t = i + 1).
struct GroupOutcome {
  std::vector<double> p0;  //!< P[group declares H0 at time t | hypothesis]
  std::vector<double> p1;  //!< P[group declares H1 at time t | hypothesis]
  double p_c = 0.0;        //!< total probability of the correct declaration
  double p_w = 0.0;        //!< total probability of the wrong declaration
  double p_nd = 0.0;       //!< probability of no group decision
  double e_t = 0.0;        //!< mean decision time; +infinity if p_nd > tol
  double e_t_conditional = 0.0;  //!< mean decision time given a decision
  int n = 0;
  int q = 0;
  int hypothesis = 1;      //!< conditioning hypothesis
};

//! Both conditioning hypotheses, computed by the same engine with the roles
//! of the two decision probabilities exchanged.
struct GroupResult {
  GroupOutcome under_h0;
  GroupOutcome under_h1;
  const GroupOutcome& under(int hypothesis) const {
    return hypothesis == 0 ? under_h0 : under_h1;
  }
};

//! Group decision probabilities under one conditioning hypothesis.
//! Dispatches on (n, q) unless options.force_path overrides. Throws
//! std::invalid_argument for invalid specs or a forced path outside its band.
GroupOutcome aggregate_under(const DecisionProfile& profile, GroupSpec spec,
                             int hypothesis,
                             const AggregateOptions& options = {},
                             AggregateStats* stats = nullptr);

//! Convenience wrapper computing both conditioning hypotheses.
GroupResult aggregate(const DecisionProfile& profile, GroupSpec spec,
                      const AggregateOptions& options = {});

//! Probability that a given set of s0 + s1 SDMs has fully decided with counts
//! exactly (s0, s1), given the cumulative single-SDM decision probabilities.
double alpha(int s0, int s1, double pi0, double pi1);

//! Probability that a group of n_free = N - (s0 + s1) still-undecided SDMs
//! tips the counters into a group declaration for the favored hypothesis at
//! this step: at least q - s_fav fresh favored verdicts, and the favored
//! total strictly exceeds the other total. p_fav/p_oth are the per-SDM
//! decide-at-t probabilities for the favored/other side, pi0 + pi1 the
//! cumulative decided mass through this step.
double beta(int n, int q, int s_fav, int s_oth, double p_fav, double p_oth,
            double pi_fav, double pi_oth);

//! Tie-breaking variant: among n - 2s undecided SDMs, the favored side
//! receives strictly more fresh verdicts than the other side.
double beta_bar(int n, int s, double p_fav, double p_oth, double pi_fav,
                double pi_oth);

//! One step of the canceling-situation recursion: probability that a given
//! set of 2s SDMs has decided with permanently tied counters at >= q each.
//! prev_alpha_bar maps h - q -> value at the previous step for h in
//! [q, floor(n/2)]; pi0/pi1 are cumulative through the previous step and
//! p0/p1 are the per-SDM decide-at-this-step probabilities.
double alpha_bar_step(int q, int s, const std::vector<double>& prev_alpha_bar,
                      double pi0_prev, double pi1_prev, double p0, double p1);

}  // namespace sda

#endif  // SDA_AGGREGATION_HPP
