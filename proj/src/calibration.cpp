//! \file calibration.cpp
//! \brief Threshold bisection and fastest-vs-majority comparisons.

#include "sda/calibration.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "sda/aggregation.hpp"

namespace sda {

namespace {

//! Profiles are regenerated per threshold value; a cache keyed by the bit
//! pattern of eta lets the comparison table share work across cells, since
//! bisection paths from a common bracket revisit the same midpoints.
using ProfileCache = std::unordered_map<uint64_t, std::shared_ptr<const DecisionProfile>>;

uint64_t key_of(double eta) {
  uint64_t k;
  std::memcpy(&k, &eta, sizeof(k));
  return k;
}

//! The per-agent profile is generated with a much smaller tail tolerance
//! than the group-level accounting so that the group's never-decide residual
//! (at most n times the per-agent residual) stays below the group tolerance
//! and expected times remain finite.
std::shared_ptr<const DecisionProfile> profile_at(const CalibrationTask& task,
                                                  double eta,
                                                  ProfileCache* cache) {
  if (cache != nullptr) {
    auto it = cache->find(key_of(eta));
    if (it != cache->end()) return it->second;
  }
  SprtModel m = task.model;
  m.eta0 = -eta;
  m.eta1 = eta;
  auto profile = std::make_shared<const DecisionProfile>(
      sprt_profile(m, task.tail_tol * 1e-3));
  if (cache != nullptr) cache->emplace(key_of(eta), profile);
  return profile;
}

struct GroupEval {
  double pw = 0.0;
  double et = 0.0;
};

GroupEval evaluate(const CalibrationTask& task, double eta,
                   ProfileCache* cache) {
  const int q = task.rule == FusionRule::kFastest ? 1 : task.n / 2 + 1;
  const auto profile = profile_at(task, eta, cache);
  AggregateOptions opts;
  opts.tail_tol = task.tail_tol;
  const GroupOutcome g = aggregate_under(*profile, GroupSpec{task.n, q},
                                         task.hypothesis, opts);
  return {g.p_w, g.e_t};
}

CalibrationResult calibrate_impl(const CalibrationTask& task,
                                 ProfileCache* cache) {
  if (!(task.target_pw > 0.0 && task.target_pw < 0.5)) {
    throw std::invalid_argument(
        "calibrate: target must lie strictly inside (0, 0.5)");
  }
  if (task.n < 1) throw std::invalid_argument("calibrate: n must be >= 1");
  if (!(task.eta_lo > 0.0 && task.eta_lo < task.eta_hi)) {
    throw std::invalid_argument("calibrate: need 0 < eta_lo < eta_hi");
  }

  double lo = task.eta_lo;
  double hi = task.eta_hi;
  const GroupEval at_lo = evaluate(task, lo, cache);
  const GroupEval at_hi = evaluate(task, hi, cache);
  if (!(at_lo.pw > task.target_pw && at_hi.pw < task.target_pw)) {
    std::ostringstream oss;
    oss << "calibrate: bracket does not straddle the target: p_w(" << lo
        << ") = " << at_lo.pw << ", p_w(" << hi << ") = " << at_hi.pw
        << ", target = " << task.target_pw;
    throw std::invalid_argument(oss.str());
  }
  double pw_lo = at_lo.pw;
  double pw_hi = at_hi.pw;

  CalibrationResult result;
  double eta = 0.5 * (lo + hi);
  GroupEval mid = evaluate(task, eta, cache);
  for (int iter = 1; iter <= task.max_iter; ++iter) {
    result.iterations = iter;
    // A monotone error response keeps every midpoint between the bracket
    // endpoints' values; a clear excursion signals a non-monotone response.
    if (mid.pw > pw_lo + 1e-3 || mid.pw < pw_hi - 1e-3) {
      std::ostringstream oss;
      oss << "calibrate: non-monotone error response: p_w(" << lo
          << ") = " << pw_lo << ", p_w(" << eta << ") = " << mid.pw
          << ", p_w(" << hi << ") = " << pw_hi;
      throw std::runtime_error(oss.str());
    }
    if (std::abs(mid.pw - task.target_pw) < task.pw_tol ||
        hi - lo < task.eta_tol) {
      break;
    }
    if (mid.pw > task.target_pw) {
      lo = eta;
      pw_lo = mid.pw;
    } else {
      hi = eta;
      pw_hi = mid.pw;
    }
    eta = 0.5 * (lo + hi);
    mid = evaluate(task, eta, cache);
  }
  result.eta = eta;
  result.achieved_pw = mid.pw;
  result.group_expected_t = mid.et;
  result.converged = std::abs(mid.pw - task.target_pw) < task.pw_tol ||
                     hi - lo < task.eta_tol;
  return result;
}

}  // namespace

CalibrationResult calibrate(const CalibrationTask& task) {
  ProfileCache cache;
  return calibrate_impl(task, &cache);
}

RuleComparison compare_rules(const std::vector<double>& targets,
                             const std::vector<int>& n_grid,
                             const SprtModel& model_template, int hypothesis,
                             double tail_tol) {
  RuleComparison table;
  ProfileCache cache;
  for (double target : targets) {
    int crossover = -1;
    for (int n : n_grid) {
      RuleComparisonCell cell;
      cell.target = target;
      cell.n = n;
      CalibrationTask task;
      task.target_pw = target;
      task.n = n;
      task.model = model_template;
      task.hypothesis = hypothesis;
      task.tail_tol = tail_tol;
      try {
        task.rule = FusionRule::kFastest;
        cell.fastest = calibrate_impl(task, &cache);
        task.rule = FusionRule::kMajority;
        cell.majority = calibrate_impl(task, &cache);
        cell.ok = true;
        if (cell.majority.group_expected_t < cell.fastest.group_expected_t) {
          cell.winner = RuleWinner::kMajority;
        } else if (cell.fastest.group_expected_t <
                   cell.majority.group_expected_t) {
          cell.winner = RuleWinner::kFastest;
        } else {
          cell.winner = RuleWinner::kTie;
        }
        if (crossover < 0 && cell.winner == RuleWinner::kMajority) {
          crossover = n;
        }
      } catch (const std::exception& e) {
        cell.ok = false;
        cell.winner = RuleWinner::kError;
        cell.error = e.what();
      }
      table.cells.push_back(std::move(cell));
    }
    table.crossovers.emplace_back(target, crossover);
  }
  return table;
}

}  // namespace sda
