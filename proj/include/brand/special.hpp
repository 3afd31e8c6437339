#pragma once

namespace brand {

inline constexpr double kEulerMascheroni = 0.57721566490153286060651209008;

// Digamma function psi(x) for x > 0. Recurrence shift to x >= 6 followed by
// an 8-term asymptotic expansion; absolute accuracy better than 1e-12 for
// x >= 1e-3. Throws std::domain_error for x <= 0.
double digamma(double x);

// log of the multivariate gamma function Gamma_p(a),
//   log Gamma_p(a) = p(p-1)/4 * log(pi) + sum_{i=1..p} lgamma(a + (1-i)/2).
// Requires a > (p-1)/2.
double log_multigamma(double a, int p);

}  // namespace brand
