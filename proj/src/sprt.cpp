//! \file sprt.cpp
//! \brief Sequential probability ratio test engines (lattice and chain).

#include "sda/sprt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "sda/logmath.hpp"

namespace sda {

namespace {

constexpr int kMaxSteps = 100000;       // hard cap on auto-run horizons
constexpr double kBoundaryTol = 1e-9;   // relative lattice-boundary detection

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

void check_thresholds(const SprtModel& m) {
  if (!(m.eta0 < 0.0) || !(m.eta1 > 0.0)) {
    throw std::invalid_argument(
        "sprt: thresholds must satisfy eta0 < 0 < eta1");
  }
}

void check_model(const SprtModel& m) {
  if (m.theta0 == m.theta1) {
    throw std::invalid_argument("sprt: theta0 and theta1 must differ");
  }
  if (m.kind == SprtKind::kBinomial) {
    if (m.n_obs < 1) throw std::invalid_argument("sprt: n_obs must be >= 1");
    for (double th : {m.theta0, m.theta1}) {
      if (!(th > 0.0 && th < 1.0)) {
        throw std::invalid_argument(
            "sprt: binomial success rates must lie strictly inside (0, 1)");
      }
    }
  } else {
    if (!(m.sigma > 0.0)) {
      throw std::invalid_argument("sprt: sigma must be positive");
    }
  }
  check_thresholds(m);
}

//! Smallest integer with value strictly above v, treating values within a
//! relative tolerance of an integer as that integer (boundary hits exit).
long long strictly_above(double v) {
  const double nearest = std::nearbyint(v);
  if (std::abs(v - nearest) <= kBoundaryTol * std::max(1.0, std::abs(v))) {
    return static_cast<long long>(nearest) + 1;
  }
  return static_cast<long long>(std::floor(v)) + 1;
}

long long strictly_below(double v) {
  const double nearest = std::nearbyint(v);
  if (std::abs(v - nearest) <= kBoundaryTol * std::max(1.0, std::abs(v))) {
    return static_cast<long long>(nearest) - 1;
  }
  return static_cast<long long>(std::ceil(v)) - 1;
}

//! One-hypothesis lattice run for the binomial model. Returns per-step exit
//! probabilities toward H0 and H1 plus the mass still undecided at the end.
struct LatticeRun {
  std::vector<double> p0, p1;
  double undecided = 0.0;
};

LatticeRun kdp_run(const SprtModel& m, double theta, double tail_tol,
                   int horizon) {
  const LlrSpec spec = llr_spec(m);
  const double db = spec.slope;
  const double da = -spec.offset;  // per-step drift constant
  const int side_below = db > 0.0 ? 0 : 1;

  std::vector<double> inc(static_cast<size_t>(m.n_obs) + 1);
  for (int j = 0; j <= m.n_obs; ++j) {
    inc[static_cast<size_t>(j)] = binomial_pmf(m.n_obs, j, theta);
  }

  LatticeRun run;
  std::vector<double> mass{1.0};  // cumulative-count pmf on continuing values
  long long mass_lo = 0;          // count value of mass[0]
  const int cap = horizon > 0 ? horizon : kMaxSteps;
  for (int t = 1; t <= cap; ++t) {
    const double b0 = (m.eta0 + t * da) / db;
    const double b1 = (m.eta1 + t * da) / db;
    const long long blo = strictly_above(std::min(b0, b1));
    const long long bhi = strictly_below(std::max(b0, b1));
    std::vector<double> next;
    if (bhi >= blo) next.assign(static_cast<size_t>(bhi - blo + 1), 0.0);
    double exit0 = 0.0, exit1 = 0.0;
    for (size_t i = 0; i < mass.size(); ++i) {
      const double w = mass[i];
      if (w <= 0.0) continue;
      const long long x = mass_lo + static_cast<long long>(i);
      for (int j = 0; j <= m.n_obs; ++j) {
        const double p = w * inc[static_cast<size_t>(j)];
        if (p <= 0.0) continue;
        const long long nx = x + j;
        if (nx < blo) {
          (side_below == 0 ? exit0 : exit1) += p;
        } else if (nx > bhi) {
          (side_below == 0 ? exit1 : exit0) += p;
        } else {
          next[static_cast<size_t>(nx - blo)] += p;
        }
      }
    }
    run.p0.push_back(exit0);
    run.p1.push_back(exit1);
    mass = std::move(next);
    mass_lo = blo;
    double undecided = 0.0;
    for (double v : mass) undecided += v;
    run.undecided = undecided;
    if (horizon == 0 && undecided < tail_tol) break;
    if (mass.empty()) break;
  }
  return run;
}

}  // namespace

WaldThresholds wald_thresholds(double p_md, double p_fa) {
  if (!(p_md > 0.0) || !(p_fa > 0.0) || !(p_md + p_fa < 1.0)) {
    throw std::invalid_argument(
        "wald_thresholds: need p_md > 0, p_fa > 0 and p_md + p_fa < 1");
  }
  WaldThresholds w;
  w.eta0 = std::log(p_md / (1.0 - p_fa));
  w.eta1 = std::log((1.0 - p_md) / p_fa);
  return w;
}

SprtModel make_gaussian_model(double theta0, double theta1, double sigma,
                              double eta0, double eta1) {
  SprtModel m;
  m.kind = SprtKind::kGaussian;
  m.theta0 = theta0;
  m.theta1 = theta1;
  m.sigma = sigma;
  m.eta0 = eta0;
  m.eta1 = eta1;
  check_model(m);
  return m;
}

SprtModel make_binomial_model(int n_obs, double theta0, double theta1,
                              double eta0, double eta1) {
  SprtModel m;
  m.kind = SprtKind::kBinomial;
  m.n_obs = n_obs;
  m.theta0 = theta0;
  m.theta1 = theta1;
  m.eta0 = eta0;
  m.eta1 = eta1;
  check_model(m);
  return m;
}

LlrSpec llr_spec(const SprtModel& model) {
  LlrSpec s;
  if (model.kind == SprtKind::kGaussian) {
    const double var = model.sigma * model.sigma;
    s.slope = (model.theta1 - model.theta0) / var;
    s.offset = -(model.theta1 * model.theta1 - model.theta0 * model.theta0) /
               (2.0 * var);
  } else {
    const double logit1 = std::log(model.theta1 / (1.0 - model.theta1));
    const double logit0 = std::log(model.theta0 / (1.0 - model.theta0));
    s.slope = logit1 - logit0;
    s.offset =
        -model.n_obs * std::log((1.0 - model.theta0) / (1.0 - model.theta1));
  }
  return s;
}

double llr_step_mean(const SprtModel& model, int hypothesis) {
  const LlrSpec s = llr_spec(model);
  const double theta = hypothesis == 0 ? model.theta0 : model.theta1;
  const double mean_x =
      model.kind == SprtKind::kGaussian ? theta : model.n_obs * theta;
  return s.slope * mean_x + s.offset;
}

double llr_step_sd(const SprtModel& model, int hypothesis) {
  const LlrSpec s = llr_spec(model);
  const double theta = hypothesis == 0 ? model.theta0 : model.theta1;
  const double sd_x = model.kind == SprtKind::kGaussian
                          ? model.sigma
                          : std::sqrt(model.n_obs * theta * (1.0 - theta));
  return std::abs(s.slope) * sd_x;
}

DecisionProfile kdp_profile(const SprtModel& model, double tail_tol,
                            int horizon) {
  if (model.kind != SprtKind::kBinomial) {
    throw std::invalid_argument("kdp_profile: binomial model required");
  }
  check_model(model);
  LatticeRun r0 = kdp_run(model, model.theta0, tail_tol, horizon);
  LatticeRun r1 = kdp_run(model, model.theta1, tail_tol, horizon);
  const size_t t_max = std::max(r0.p0.size(), r1.p0.size());
  DecisionProfile profile;
  auto fill = [t_max](HypothesisProfile& h, LatticeRun& r) {
    r.p0.resize(t_max, 0.0);
    r.p1.resize(t_max, 0.0);
    h.p_say0 = std::move(r.p0);
    h.p_say1 = std::move(r.p1);
    h.p_nd = std::max(0.0, r.undecided);
  };
  fill(profile.under_h0, r0);
  fill(profile.under_h1, r1);
  return profile;
}

double default_lattice_step(const SprtModel& model) {
  return 0.01 * (model.eta1 - model.eta0) / (2.0 * std::log(9.0));
}

AbsorbingChain discretize(const SprtModel& model, double delta) {
  if (model.kind != SprtKind::kGaussian) {
    throw std::invalid_argument("discretize: gaussian model required");
  }
  check_model(model);
  if (delta == 0.0) delta = default_lattice_step(model);
  if (!(delta > 0.0)) {
    throw std::invalid_argument("discretize: delta must be positive");
  }

  AbsorbingChain c;
  c.delta = delta;
  c.lo_idx = static_cast<long>(std::floor(model.eta0 / delta));
  c.hi_idx = static_cast<long>(std::ceil(model.eta1 / delta));
  c.n_states = static_cast<int>(c.hi_idx - c.lo_idx + 1);
  if (c.n_states < 5) {
    throw std::invalid_argument(
        "discretize: lattice too coarse, fewer than 5 states");
  }
  c.start_index = static_cast<int>(-c.lo_idx);
  c.state_values.resize(static_cast<size_t>(c.n_states));
  for (int i = 0; i < c.n_states; ++i) {
    c.state_values[static_cast<size_t>(i)] = (c.lo_idx + i) * delta;
  }

  const int n = c.n_states;
  const int jmax = n - 2;
  const double step_sd = llr_step_sd(model, 0);  // same under both hypotheses
  auto build = [&](int hyp, Eigen::MatrixXd& a, std::vector<double>& pmf) {
    const double mu = llr_step_mean(model, hyp);
    pmf.assign(static_cast<size_t>(2 * jmax + 1), 0.0);
    for (int j = -jmax; j <= jmax; ++j) {
      double p;
      if (j == jmax) {
        p = 1.0 - normal_cdf((j * delta - delta / 2.0 - mu) / step_sd);
      } else if (j == -jmax) {
        p = normal_cdf((j * delta + delta / 2.0 - mu) / step_sd);
      } else {
        p = normal_cdf((j * delta + delta / 2.0 - mu) / step_sd) -
            normal_cdf((j * delta - delta / 2.0 - mu) / step_sd);
      }
      pmf[static_cast<size_t>(j + jmax)] = std::max(0.0, p);
    }
    a = Eigen::MatrixXd::Zero(n, n);
    a(0, 0) = 1.0;
    a(n - 1, n - 1) = 1.0;
    for (int i = 1; i <= n - 2; ++i) {
      for (int j = -jmax; j <= jmax; ++j) {
        int d = i + j;
        if (d < 0) d = 0;
        if (d > n - 1) d = n - 1;
        a(i, d) += pmf[static_cast<size_t>(j + jmax)];
      }
    }
  };
  build(0, c.a_h0, c.inc_pmf_h0);
  build(1, c.a_h1, c.inc_pmf_h1);
  return c;
}

DecisionProfile chain_profile(const AbsorbingChain& chain, double tail_tol,
                              int horizon) {
  const int n = chain.n_states;
  if (n < 5 || chain.start_index < 1 || chain.start_index > n - 2) {
    throw std::invalid_argument("chain_profile: malformed chain");
  }
  DecisionProfile profile;
  const int cap = horizon > 0 ? horizon : kMaxSteps;
  auto run = [&](const Eigen::MatrixXd& a, HypothesisProfile& h) {
    Eigen::RowVectorXd pi = Eigen::RowVectorXd::Zero(n);
    pi(chain.start_index) = 1.0;
    double prev0 = 0.0, prev1 = 0.0;
    double transient = 1.0;
    for (int t = 1; t <= cap; ++t) {
      pi = (pi * a).eval();
      const double a0 = pi(0);
      const double a1 = pi(n - 1);
      h.p_say0.push_back(std::max(0.0, a0 - prev0));
      h.p_say1.push_back(std::max(0.0, a1 - prev1));
      prev0 = a0;
      prev1 = a1;
      transient = std::max(0.0, 1.0 - a0 - a1);
      if (horizon == 0 && transient < tail_tol) break;
    }
    h.p_nd = transient;
  };
  run(chain.a_h0, profile.under_h0);
  run(chain.a_h1, profile.under_h1);
  const size_t t_max =
      std::max(profile.under_h0.p_say0.size(), profile.under_h1.p_say0.size());
  for (HypothesisProfile* h : {&profile.under_h0, &profile.under_h1}) {
    h->p_say0.resize(t_max, 0.0);
    h->p_say1.resize(t_max, 0.0);
  }
  return profile;
}

ChainClosedForm chain_closed_form(const AbsorbingChain& chain) {
  const int n = chain.n_states;
  const int m = n - 2;
  if (m < 1 || chain.start_index < 1 || chain.start_index > n - 2) {
    throw std::invalid_argument("chain_closed_form: malformed chain");
  }
  ChainClosedForm result;
  auto solve = [&](const Eigen::MatrixXd& a, ChainAbsorption& out) {
    const Eigen::MatrixXd sys =
        Eigen::MatrixXd::Identity(m, m) - a.block(1, 1, m, m);
    const Eigen::VectorXd r0 = a.block(1, 0, m, 1);
    const Eigen::VectorXd r1 = a.block(1, n - 1, m, 1);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(m);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(sys);
    const Eigen::VectorXd z0 = lu.solve(r0);
    const Eigen::VectorXd z1 = lu.solve(r1);
    const Eigen::VectorXd zt = lu.solve(ones);
    const double resid =
        std::max({(sys * z0 - r0).cwiseAbs().maxCoeff(),
                  (sys * z1 - r1).cwiseAbs().maxCoeff(),
                  (sys * zt - ones).cwiseAbs().maxCoeff()});
    if (!(resid < 1e-8)) {
      throw std::runtime_error(
          "chain_closed_form: transient system is singular or ill-conditioned");
    }
    const int idx = chain.start_index - 1;
    out.p0 = z0(idx);
    out.p1 = z1(idx);
    out.expected_time = zt(idx);
  };
  solve(chain.a_h0, result.under_h0);
  solve(chain.a_h1, result.under_h1);
  return result;
}

DecisionProfile sprt_profile(const SprtModel& model, double tail_tol,
                             int horizon, double delta) {
  if (model.kind == SprtKind::kBinomial) {
    return kdp_profile(model, tail_tol, horizon);
  }
  return chain_profile(discretize(model, delta), tail_tol, horizon);
}

}  // namespace sda
