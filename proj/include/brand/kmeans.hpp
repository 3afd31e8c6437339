#pragma once

#include <Eigen/Dense>
#include <random>
#include <vector>

namespace brand {

struct KMeansResult {
  Eigen::MatrixXd centers;      // k x p
  std::vector<int> assignment;  // length n, values 0..k-1
  double inertia = 0.0;         // sum of squared distances to own center
};

// Lloyd's algorithm with k-means++ seeding. Runs n_restarts independent
// seedings from the supplied engine and keeps the lowest-inertia result
// (earliest restart wins ties). Requires 1 <= k <= n. Deterministic for a
// fixed engine state; ties in point assignment go to the lower center index.
KMeansResult kmeans(const Eigen::MatrixXd& x, int k, std::mt19937_64& eng,
                    int max_iter = 25, int n_restarts = 10);

}  // namespace brand
