//! \file logmath.hpp
//! \brief Log-space binomial coefficients and numerically safe probability
//!        term assembly used throughout the aggregation engines.

#ifndef SDA_LOGMATH_HPP
#define SDA_LOGMATH_HPP

#include <cstdint>
#include <vector>

namespace sda {

//! Natural log of the binomial coefficient C(n, k).
//! Returns -infinity for k < 0 or k > n. Values are cached per n row
//! (thread-safe initialization) so repeated sweeps over the same n are cheap.
double log_binomial(int n, int k);

//! k * log(p) with the convention 0 * log(0) = 0, so that p^0 = 1 holds
//! even when p = 0. Returns -infinity for k > 0, p = 0.
double xlogx_pow(int k, double log_p);

//! log(p), mapping p <= 0 to -infinity (callers assemble probability terms
//! where a zero factor should annihilate the term, not poison it with NaN).
double safe_log(double p);

//! Binomial pmf P[Bin(n, p) = k], assembled in log space with exact handling
//! of the p = 0 and p = 1 edges.
double binomial_pmf(int n, int k, double p);

//! Upper tail P[Bin(n, p) >= k], summed in log space term by term.
double binomial_upper_tail(int n, int k, double p);

//! Exact C(n, k) as a double computed by Pascal's rule on integers where it
//! fits, used by tests to cross-check the log-gamma path. Requires n <= 61
//! so every coefficient is exactly representable (< 2^63 in the integer
//! intermediate).
double exact_binomial(int n, int k);

}  // namespace sda

#endif  // SDA_LOGMATH_HPP
