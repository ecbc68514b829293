//! \file sprt.hpp
//! \brief Sequential probability ratio test engines that produce decision
//!        profiles for a single agent.
//!
//! Two observation models are supported. Binomial-count observations induce a
//! log-likelihood-ratio walk on an integer lattice, so exit probabilities per
//! step are computed exactly by a banded lattice recursion. Gaussian
//! observations induce a continuous walk, which is discretized onto an
//! absorbing Markov chain; per-step absorption increments give the profile
//! and linear solves give closed-form absorption probabilities and mean
//! absorption time for validation.

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "sda/profile.hpp"

namespace sda {

enum class SprtKind { kBinomial, kGaussian };

//! Test of H0: theta = theta0 against H1: theta = theta1 with log-likelihood
//! ratio thresholds eta0 < 0 < eta1 (stop and accept H0 at or below eta0,
//! accept H1 at or above eta1, continue strictly inside).
struct SprtModel {
  SprtKind kind = SprtKind::kGaussian;
  double theta0 = 0.0;
  double theta1 = 1.0;
  double sigma = 1.0;  // gaussian observation noise
  int n_obs = 1;       // binomial trials per observation step
  double eta0 = 0.0;
  double eta1 = 0.0;
};

struct WaldThresholds {
  double eta0 = 0.0;
  double eta1 = 0.0;
};

//! Classical threshold choices for target miss and false-alarm rates.
WaldThresholds wald_thresholds(double p_md, double p_fa);

SprtModel make_gaussian_model(double theta0, double theta1, double sigma,
                              double eta0, double eta1);
SprtModel make_binomial_model(int n_obs, double theta0, double theta1,
                              double eta0, double eta1);

//! Per-step log-likelihood ratio as an affine function of the raw
//! observation: llr(x) = slope * x + offset.
struct LlrSpec {
  double slope = 0.0;
  double offset = 0.0;
};

LlrSpec llr_spec(const SprtModel& model);

//! Mean and standard deviation of the per-step log-likelihood ratio under
//! the given conditioning hypothesis.
double llr_step_mean(const SprtModel& model, int hypothesis);
double llr_step_sd(const SprtModel& model, int hypothesis);

//! Exact per-step exit probabilities for the binomial model via the integer
//! lattice of cumulative successes. With horizon == 0 the recursion runs
//! until the continuing mass falls below tail_tol (hard cap applies) and the
//! remainder is recorded as never-deciding mass.
DecisionProfile kdp_profile(const SprtModel& model,
                            double tail_tol = kDefaultTailTol,
                            int horizon = 0);

//! Discretized log-likelihood-ratio random walk with absorbing ends.
//! States are lattice values (lo_idx + i) * delta for i = 0..n_states-1;
//! state 0 absorbs into "accept H0", state n_states-1 into "accept H1".
struct AbsorbingChain {
  double delta = 0.0;
  long lo_idx = 0;
  long hi_idx = 0;
  int n_states = 0;
  int start_index = 0;  // zero-based index of the zero-value start state
  std::vector<double> state_values;
  Eigen::MatrixXd a_h0;  // row-stochastic transition matrix under H0
  Eigen::MatrixXd a_h1;  // row-stochastic transition matrix under H1
  std::vector<double> inc_pmf_h0;  // step-increment pmf, index j + (n_states-2)
  std::vector<double> inc_pmf_h1;
};

//! Lattice step giving about one hundred states per unit of threshold
//! separation at the classical symmetric 0.1 design.
double default_lattice_step(const SprtModel& model);

//! Build the absorbing chain for a gaussian model. delta == 0 selects
//! default_lattice_step. Rejects lattices with fewer than 5 states.
AbsorbingChain discretize(const SprtModel& model, double delta = 0.0);

//! Iterate the chain and return per-step absorption increments as a decision
//! profile. horizon == 0 runs until transient mass falls below tail_tol
//! (hard cap applies); remaining transient mass becomes never-deciding mass.
DecisionProfile chain_profile(const AbsorbingChain& chain,
                              double tail_tol = kDefaultTailTol,
                              int horizon = 0);

struct ChainAbsorption {
  double p0 = 0.0;            // absorption probability at the low end
  double p1 = 0.0;            // absorption probability at the high end
  double expected_time = 0.0; // mean number of steps to absorption
};

struct ChainClosedForm {
  ChainAbsorption under_h0;
  ChainAbsorption under_h1;
};

//! Absorption probabilities and mean absorption time from the start state by
//! direct linear solves on the transient block. Throws on a singular system.
ChainClosedForm chain_closed_form(const AbsorbingChain& chain);

//! Profile for any supported model: lattice recursion for binomial, chain
//! iteration for gaussian (delta == 0 selects the default lattice step).
DecisionProfile sprt_profile(const SprtModel& model,
                             double tail_tol = kDefaultTailTol,
                             int horizon = 0, double delta = 0.0);

}  // namespace sda
