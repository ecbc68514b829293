//! \file test_logmath.cpp
//! \brief Checks the log-space binomial helpers against exact integer
//!        arithmetic and pins their edge-case conventions.

#include <cmath>
#include <limits>

#include "sda/logmath.hpp"
#include "test_common.hpp"

using namespace sda;
using namespace testutil;

int main() {
  const double inf = std::numeric_limits<double>::infinity();

  // exp(log_binomial) matches exact Pascal-rule coefficients for every n, k
  // where the exact value is representable.
  {
    double worst = 0.0;
    for (int n = 0; n <= 61; ++n) {
      for (int k = 0; k <= n; ++k) {
        const double exact = exact_binomial(n, k);
        const double via_log = std::exp(log_binomial(n, k));
        worst = std::max(worst, std::fabs(via_log - exact) / exact);
      }
    }
    check(worst <= 1e-12,
          "log_binomial matches exact coefficients to 1e-12 relative (n <= "
          "61), worst " +
              std::to_string(worst));
  }

  // Out-of-range k yields log(0).
  check(log_binomial(5, -1) == -inf, "log_binomial k < 0 is -inf");
  check(log_binomial(5, 6) == -inf, "log_binomial k > n is -inf");
  check(log_binomial(7, 0) == 0.0, "log_binomial k = 0 is log(1) = 0");
  check(log_binomial(0, 0) == 0.0, "log_binomial(0, 0) = 0");

  // safe_log and the 0 * log(0) convention.
  check(safe_log(0.0) == -inf, "safe_log(0) is -inf");
  check(safe_log(-1.0) == -inf, "safe_log of a negative is -inf");
  check_close(safe_log(2.0), std::log(2.0), 1e-15, "safe_log(2) = log 2");
  check(xlogx_pow(0, -inf) == 0.0, "p^0 = 1 even when p = 0");
  check(xlogx_pow(3, -inf) == -inf, "p^3 = 0 when p = 0");
  check_close(xlogx_pow(2, std::log(0.5)), 2.0 * std::log(0.5), 1e-15,
              "xlogx_pow multiplies the exponent");

  // Binomial pmf edges and normalization.
  check(binomial_pmf(4, 0, 0.0) == 1.0, "pmf at p = 0 concentrates on k = 0");
  check(binomial_pmf(4, 2, 0.0) == 0.0, "pmf at p = 0 vanishes for k > 0");
  check(binomial_pmf(4, 4, 1.0) == 1.0, "pmf at p = 1 concentrates on k = n");
  check(binomial_pmf(4, 1, 1.0) == 0.0, "pmf at p = 1 vanishes for k < n");
  {
    double total = 0.0;
    for (int k = 0; k <= 9; ++k) total += binomial_pmf(9, k, 0.37);
    check_close(total, 1.0, 1e-13, "pmf sums to one (n = 9, p = 0.37)");
  }
  check_close(binomial_pmf(5, 2, 0.5), 10.0 / 32.0, 1e-14,
              "pmf(5, 2, 1/2) = 10/32");

  // Upper tail identities.
  check(binomial_upper_tail(6, 0, 0.3) == 1.0, "upper tail from 0 is 1");
  check(binomial_upper_tail(6, 7, 0.3) == 0.0, "upper tail beyond n is 0");
  check_close(binomial_upper_tail(5, 3, 0.5), 0.5, 1e-14,
              "upper tail from 3 of Bin(5, 1/2) = 1/2 by symmetry");
  {
    // Tail equals the summed pmf.
    double tail = 0.0;
    for (int k = 4; k <= 11; ++k) tail += binomial_pmf(11, k, 0.21);
    check_close(binomial_upper_tail(11, 4, 0.21), tail, 1e-13,
                "upper tail equals summed pmf (n = 11)");
  }
  check(binomial_upper_tail(6, 2, 0.0) == 0.0, "upper tail at p = 0 is 0");
  check_close(binomial_upper_tail(6, 2, 1.0), 1.0, 0.0,
              "upper tail at p = 1 is 1");

  return summary("test_logmath");
}
