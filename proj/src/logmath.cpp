//! \file logmath.cpp
//! \brief Log-space combinatorics helpers.

#include "sda/logmath.hpp"

#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>

namespace sda {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Cache of log C(n, k) rows, grown on demand. Row n holds n + 1 entries.
std::vector<std::vector<double>>& row_cache() {
  static std::vector<std::vector<double>> cache;
  return cache;
}

std::mutex& cache_mutex() {
  static std::mutex m;
  return m;
}

std::vector<double> build_row(int n) {
  std::vector<double> row(static_cast<size_t>(n) + 1);
  const double lg_n = std::lgamma(static_cast<double>(n) + 1.0);
  for (int k = 0; k <= n; ++k) {
    row[static_cast<size_t>(k)] = lg_n -
                                  std::lgamma(static_cast<double>(k) + 1.0) -
                                  std::lgamma(static_cast<double>(n - k) + 1.0);
  }
  row[0] = 0.0;
  row[static_cast<size_t>(n)] = 0.0;
  return row;
}

}  // namespace

double log_binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) return kNegInf;
  {
    std::lock_guard<std::mutex> lock(cache_mutex());
    auto& cache = row_cache();
    if (static_cast<size_t>(n) >= cache.size()) {
      cache.resize(static_cast<size_t>(n) + 1);
    }
    auto& row = cache[static_cast<size_t>(n)];
    if (row.empty()) row = build_row(n);
    return row[static_cast<size_t>(k)];
  }
}

double xlogx_pow(int k, double log_p) {
  if (k == 0) return 0.0;
  return static_cast<double>(k) * log_p;
}

double safe_log(double p) {
  if (p <= 0.0) return kNegInf;
  return std::log(p);
}

double binomial_pmf(int n, int k, double p) {
  if (k < 0 || k > n) return 0.0;
  if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return k == n ? 1.0 : 0.0;
  const double lt = log_binomial(n, k) + xlogx_pow(k, std::log(p)) +
                    xlogx_pow(n - k, std::log1p(-p));
  return std::exp(lt);
}

double binomial_upper_tail(int n, int k, double p) {
  if (k <= 0) return 1.0;
  if (k > n) return 0.0;
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  const double lp = std::log(p);
  const double lq = std::log1p(-p);
  double sum = 0.0;
  // Summed from the largest k down: terms decay away from the mode, and the
  // small-to-large addition order keeps the accumulation well conditioned.
  for (int j = n; j >= k; --j) {
    sum += std::exp(log_binomial(n, j) + xlogx_pow(j, lp) +
                    xlogx_pow(n - j, lq));
  }
  return sum < 1.0 ? sum : 1.0;
}

double exact_binomial(int n, int k) {
  if (n < 0 || n > 61) {
    throw std::invalid_argument(
        "exact_binomial: n outside the exactly representable range [0, 61]");
  }
  if (k < 0 || k > n) return 0.0;
  // Pascal's triangle in 64-bit integers; every entry for n <= 61 fits.
  std::vector<unsigned long long> row(static_cast<size_t>(n) + 1, 0ULL);
  row[0] = 1ULL;
  for (int i = 1; i <= n; ++i) {
    for (int j = i; j >= 1; --j) {
      row[static_cast<size_t>(j)] += row[static_cast<size_t>(j) - 1];
    }
  }
  return static_cast<double>(row[static_cast<size_t>(k)]);
}

}  // namespace sda
