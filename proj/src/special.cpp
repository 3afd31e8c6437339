#include "brand/special.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace brand {

double digamma(double x) {
  if (!(x > 0.0)) {
    throw std::domain_error("digamma: argument must be positive, got " +
                            std::to_string(x));
  }
  // psi(x) = psi(x+1) - 1/x, applied until the asymptotic series is safe.
  double acc = 0.0;
  while (x < 6.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  // Asymptotic expansion: psi(x) ~ ln x - 1/(2x) - sum B_{2n}/(2n x^{2n}).
  const double inv2 = 1.0 / (x * x);
  // Coefficients B_{2n}/(2n) for n = 1..8.
  static const double coef[8] = {
      1.0 / 12.0,      -1.0 / 120.0,     1.0 / 252.0, -1.0 / 240.0,
      1.0 / 132.0,     -691.0 / 32760.0, 1.0 / 12.0,  -3617.0 / 8160.0,
  };
  double series = 0.0;
  double power = inv2;
  for (double c : coef) {
    series += c * power;
    power *= inv2;
  }
  return acc + std::log(x) - 0.5 / x - series;
}

double log_multigamma(double a, int p) {
  if (p < 1) throw std::domain_error("log_multigamma: dimension must be >= 1");
  if (!(a > 0.5 * (p - 1))) {
    throw std::domain_error("log_multigamma: argument " + std::to_string(a) +
                            " out of domain for dimension " + std::to_string(p));
  }
  constexpr double kLogPi = 1.1447298858494001741434273513531;
  double result = 0.25 * p * (p - 1) * kLogPi;
  for (int i = 1; i <= p; ++i) {
    result += std::lgamma(a + 0.5 * (1 - i));
  }
  return result;
}

}  // namespace brand
