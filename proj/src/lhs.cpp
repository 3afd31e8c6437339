#include "brand/lhs.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "brand/error.hpp"

namespace brand {

Eigen::MatrixXd latin_hypercube(
    int n, const std::vector<std::pair<double, double>>& ranges,
    std::mt19937_64& eng) {
  if (n < 1) throw ConfigError("Latin hypercube needs at least one point");
  const int d = static_cast<int>(ranges.size());
  Eigen::MatrixXd out(n, d);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<int> order(n);
  for (int j = 0; j < d; ++j) {
    const auto [lo, hi] = ranges[j];
    if (!(hi > lo)) {
      throw ConfigError("Latin hypercube range " + std::to_string(j) +
                        " must have upper > lower");
    }
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), eng);
    for (int i = 0; i < n; ++i) {
      const double u = (order[i] + unif(eng)) / n;
      out(i, j) = lo + u * (hi - lo);
    }
  }
  return out;
}

}  // namespace brand
