//! \file montecarlo.hpp
//! \brief Simulation and small-case exhaustive enumeration of group outcomes.
//!
//! Both tools replay the fusion rule on sampled or enumerated per-agent
//! verdicts and serve as independent cross-checks of the analytic engines.
//! Simulation draws either from a decision profile (inverse-CDF over its
//! per-step atoms) or from the raw observation model (fresh likelihood-ratio
//! walks per agent). Enumeration sums the exact probability of every joint
//! verdict assignment and is limited to small atom counts.

#pragma once

#include <cstdint>
#include <vector>

#include "sda/aggregation.hpp"
#include "sda/profile.hpp"
#include "sda/sprt.hpp"

namespace sda {

//! Tally of simulated group outcomes. Counts partition the replicates:
//! sum_t (count0 + count1) + count_nd == replicates.
struct EmpiricalOutcome {
  std::vector<long long> count0;  // group decided H0 at step t (1-based)
  std::vector<long long> count1;
  long long count_nd = 0;         // undecided within the horizon
  long long replicates = 0;
  int horizon = 0;

  std::vector<double> freq0;      // counts normalized by replicates
  std::vector<double> freq1;
  double freq_nd = 0.0;
  double mean_time = 0.0;         // mean decision step among decided runs
  double mean_time_se = 0.0;      // standard error of that mean
  long long decided = 0;
};

//! Standard error of a binomial frequency estimate.
double binomial_se(double p_hat, long long n);

//! Simulate the q-out-of-n group where each agent's verdict and decision step
//! are drawn from the profile branch for the given hypothesis. horizon == 0
//! uses the profile horizon. Replicate r uses an independent counter-based
//! random stream derived from (seed, r), so results are reproducible and
//! independent of scheduling.
EmpiricalOutcome simulate_profile_group(const DecisionProfile& profile,
                                        GroupSpec spec, int hypothesis,
                                        long long replicates, uint64_t seed,
                                        int horizon = 0);

//! Simulate the group by running each agent's sequential test on fresh
//! observations drawn from the model under the given hypothesis. Agents that
//! have not crossed a threshold by the horizon are treated as undecided.
EmpiricalOutcome simulate_model_group(const SprtModel& model, GroupSpec spec,
                                      int hypothesis, long long replicates,
                                      uint64_t seed, int horizon);

//! Exact group outcome by exhaustive enumeration of all joint per-agent
//! verdict assignments. The per-agent atom count is 2 * horizon + 1 and the
//! assignment count is capped at ten million; beyond that an exception
//! directs callers to simulation. horizon == 0 uses the profile horizon.
GroupOutcome enumerate_exact(const DecisionProfile& profile, GroupSpec spec,
                             int hypothesis, int horizon = 0);

}  // namespace sda
