#pragma once

#include <Eigen/Dense>
#include <random>
#include <utility>
#include <vector>

namespace brand {

// Latin hypercube sample of n points over the given per-dimension ranges.
// Each dimension is split into n equal strata; every stratum is hit exactly
// once, with the within-stratum offset drawn uniformly and the stratum
// order an independent random permutation per dimension.
Eigen::MatrixXd latin_hypercube(
    int n, const std::vector<std::pair<double, double>>& ranges,
    std::mt19937_64& eng);

}  // namespace brand
