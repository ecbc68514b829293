//! \file profile.hpp
//! \brief Decision-probability data model for a single sequential decision
//!        maker (SDM): per-hypothesis arrays of decide-at-t probabilities,
//!        validation, decision-property predicates, and file round-trip.

#ifndef SDA_PROFILE_HPP
#define SDA_PROFILE_HPP

#include <string>
#include <vector>

namespace sda {

//! Default tolerance on unaccounted tail probability mass.
inline constexpr double kDefaultTailTol = 1e-9;
//! Floating-point slack for identities that hold exactly in real arithmetic.
inline constexpr double kFpEps = 1e-12;

//! Decision probabilities of one SDM conditioned on one hypothesis being
//! true. Arrays are 0-based; index i corresponds to decision time t = i + 1.
struct HypothesisProfile {
  std::vector<double> p_say0;  //!< P[decide H0 at time t]
  std::vector<double> p_say1;  //!< P[decide H1 at time t]
  double p_nd = 0.0;           //!< P[never decide] (includes truncated tail)

  int t_max() const { return static_cast<int>(p_say0.size()); }
  //! Total decision mass Sum_t (p_say0 + p_say1).
  double decision_mass() const;
};

//! A full SDM model: the decision probabilities under each hypothesis.
struct DecisionProfile {
  HypothesisProfile under_h0;
  HypothesisProfile under_h1;

  int t_max() const { return under_h0.t_max(); }
  const HypothesisProfile& under(int hypothesis) const {
    return hypothesis == 0 ? under_h0 : under_h1;
  }
};

//! Group size and decision threshold of the fusion rule.
struct GroupSpec {
  int n = 1;  //!< number of SDMs, >= 1
  int q = 1;  //!< counting threshold, 1 <= q <= n
};

//! Outcome of validate_profile: per-invariant findings plus residuals.
struct ValidationReport {
  bool ok = true;
  std::vector<std::string> issues;
  double residual_h0 = 0.0;  //!< 1 - Sum(p0+p1) - p_nd under H0
  double residual_h1 = 0.0;
};

//! Checks entries in [0, 1], equal lengths, p_nd >= 0, and near-unit total
//! mass (within tail_tol below / kFpEps above). Throws nothing; all findings
//! are reported.
ValidationReport validate_profile(const DecisionProfile& profile,
                                  double tail_tol = kDefaultTailTol);

//! True iff both hypothesis branches place essentially all mass on finite
//! decision times (p_nd <= tail_tol).
bool has_almost_sure_decisions(const DecisionProfile& profile,
                               double tail_tol = kDefaultTailTol);

//! Mean decision time of one hypothesis branch.
struct ExpectedTime {
  double mean = 0.0;              //!< +infinity when p_nd exceeds tail_tol
  double conditional_mean = 0.0;  //!< mean given that a decision occurs
  bool finite = true;
};

ExpectedTime expected_decision_time(const HypothesisProfile& h,
                                    double tail_tol = kDefaultTailTol);

//! Group-level almost-sure decision predicate: single SDM almost-sure, N odd,
//! and 1 <= q <= ceil(N/2).
bool group_almost_sure(const GroupSpec& spec, const DecisionProfile& profile,
                       double tail_tol = kDefaultTailTol);

//! Group-level finite-expected-time predicate: same range conditions with the
//! single-SDM finite-expected-time test.
bool group_finite_expected_time(const GroupSpec& spec,
                                const DecisionProfile& profile,
                                double tail_tol = kDefaultTailTol);

//! Writes the profile as CSV (`t,p0_h0,p1_h0,p0_h1,p1_h1`, 17 significant
//! digits) plus a JSON sidecar `<path>.meta.json` holding
//! {"p_nd_h0", "p_nd_h1", "t_max"}. Throws std::runtime_error on I/O failure.
void write_profile_csv(const DecisionProfile& profile,
                       const std::string& path);

//! Reads a profile written by write_profile_csv. The sidecar is looked up at
//! `<path>.meta.json`. Round-trip is bit exact.
DecisionProfile read_profile_csv(const std::string& path);

}  // namespace sda

#endif  // SDA_PROFILE_HPP
