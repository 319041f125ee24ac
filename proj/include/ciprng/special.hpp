#pragma once

#include <cmath>
#include <limits>

#include "ciprng/bitcore.hpp"

namespace ciprng {

namespace detail {

inline constexpr int kGammaMaxIter = 20000;
inline const double kGammaEps = std::numeric_limits<double>::epsilon();
inline const double kGammaTiny = std::numeric_limits<double>::min() / kGammaEps;

// Regularized lower incomplete gamma P(a,x) by power series; valid and
// fast for x < a+1.
inline double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double term = sum;
  for (int i = 0; i < kGammaMaxIter; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kGammaEps)
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  throw contract_error("igamc: series failed to converge");
}

// Regularized upper incomplete gamma Q(a,x) by continued fraction
// (modified Lentz); valid and fast for x >= a+1.
inline double gamma_q_cf(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kGammaTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kGammaMaxIter; ++i) {
    double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kGammaTiny) d = kGammaTiny;
    c = b + an / c;
    if (std::abs(c) < kGammaTiny) c = kGammaTiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kGammaEps)
      return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  throw contract_error("igamc: continued fraction failed to converge");
}

}  // namespace detail

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a,x) / Gamma(a).
inline double igamc(double a, double x) {
  require(a > 0.0, "igamc: a must be positive");
  require(x >= 0.0, "igamc: x must be nonnegative");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
  return detail::gamma_q_cf(a, x);
}

/// Complementary error function via erfc(x) = Q(1/2, x^2) for x >= 0.
inline double erfc(double x) {
  if (x == 0.0) return 1.0;
  if (x < 0.0) return 2.0 - erfc(-x);
  return igamc(0.5, x * x);
}

/// Standard normal CDF.
inline double normal_cdf(double x) { return 0.5 * erfc(-x / std::sqrt(2.0)); }

}  // namespace ciprng
