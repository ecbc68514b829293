//! \file calibration.hpp
//! \brief Inverse design: choose the symmetric per-agent threshold magnitude
//!        so the fused group attains a target error probability, and compare
//!        the calibrated expected decision times of the fastest and majority
//!        rules across group sizes.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sda/profile.hpp"
#include "sda/sprt.hpp"

namespace sda {

enum class FusionRule { kFastest, kMajority };

//! One calibration problem. The model acts as a template: its thresholds are
//! replaced by (-eta, +eta) at every bisection evaluation, the per-agent
//! profile is regenerated, and the group outcome is recomputed, so no
//! almost-sure assumption is needed anywhere in the bracket.
struct CalibrationTask {
  double target_pw = 0.1;     // desired group wrong-decision probability
  int n = 1;
  FusionRule rule = FusionRule::kFastest;
  SprtModel model;            // thresholds overwritten during the search
  double eta_lo = 0.05;
  double eta_hi = 4.5;
  double pw_tol = 1e-4;
  double eta_tol = 1e-6;
  int max_iter = 60;
  int hypothesis = 1;
  double tail_tol = kDefaultTailTol;
};

struct CalibrationResult {
  double eta = 0.0;
  double achieved_pw = 0.0;
  double group_expected_t = 0.0;
  int iterations = 0;
  bool converged = false;
};

//! Bisection on the symmetric threshold magnitude. Throws when the bracket
//! does not straddle the target or when the group error responds
//! non-monotonically to the threshold (diagnostics in the message).
CalibrationResult calibrate(const CalibrationTask& task);

enum class RuleWinner { kFastest, kMajority, kTie, kError };

struct RuleComparisonCell {
  double target = 0.0;
  int n = 0;
  CalibrationResult fastest;
  CalibrationResult majority;
  RuleWinner winner = RuleWinner::kError;
  bool ok = false;
  std::string error;  // populated when a calibration in this cell failed
};

struct RuleComparison {
  std::vector<RuleComparisonCell> cells;
  //! Per target: smallest grid N whose calibrated majority expected time is
  //! strictly below the fastest one, or -1 when no such N exists.
  std::vector<std::pair<double, int>> crossovers;
};

//! Calibrate both rules on every (target, N) cell of the grid. Cell
//! failures are recorded in place and the table is still produced.
RuleComparison compare_rules(const std::vector<double>& targets,
                             const std::vector<int>& n_grid,
                             const SprtModel& model_template,
                             int hypothesis = 1,
                             double tail_tol = kDefaultTailTol);

}  // namespace sda
