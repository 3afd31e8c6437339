#include "brand/kmeans.hpp"

#include <limits>
#include <string>

#include "brand/error.hpp"

namespace brand {

namespace {

// Squared distance from every row of x to each center; n x k.
Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& x,
                                  const Eigen::MatrixXd& centers) {
  const Eigen::VectorXd x_norms = x.rowwise().squaredNorm();
  const Eigen::VectorXd c_norms = centers.rowwise().squaredNorm();
  Eigen::MatrixXd d = -2.0 * (x * centers.transpose());
  d.colwise() += x_norms;
  d.rowwise() += c_norms.transpose();
  return d.cwiseMax(0.0);
}

Eigen::MatrixXd seed_plus_plus(const Eigen::MatrixXd& x, int k,
                               std::mt19937_64& eng) {
  const int n = static_cast<int>(x.rows());
  Eigen::MatrixXd centers(k, x.cols());
  std::uniform_int_distribution<int> first(0, n - 1);
  centers.row(0) = x.row(first(eng));
  Eigen::VectorXd d2 =
      (x.rowwise() - centers.row(0)).rowwise().squaredNorm();
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int c = 1; c < k; ++c) {
    const double total = d2.sum();
    int pick = 0;
    if (total > 0.0) {
      const double target = unif(eng) * total;
      double acc = 0.0;
      pick = n - 1;
      for (int i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc >= target) {
          pick = i;
          break;
        }
      }
    } else {
      pick = first(eng);  // all points coincide with chosen centers
    }
    centers.row(c) = x.row(pick);
    d2 = d2.cwiseMin(
        (x.rowwise() - centers.row(c)).rowwise().squaredNorm());
  }
  return centers;
}

KMeansResult run_once(const Eigen::MatrixXd& x, int k, std::mt19937_64& eng,
                      int max_iter) {
  const int n = static_cast<int>(x.rows());
  KMeansResult res;
  res.centers = seed_plus_plus(x, k, eng);
  res.assignment.assign(n, 0);
  for (int iter = 0; iter < max_iter; ++iter) {
    const Eigen::MatrixXd d = squared_distances(x, res.centers);
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      d.row(i).minCoeff(&best);
      if (best != res.assignment[i]) {
        res.assignment[i] = best;
        changed = true;
      }
    }
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, x.cols());
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(k);
    for (int i = 0; i < n; ++i) {
      sums.row(res.assignment[i]) += x.row(i);
      counts[res.assignment[i]] += 1.0;
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0.0) {
        res.centers.row(c) = sums.row(c) / counts[c];
      } else {
        // Re-seed an empty cluster at the point farthest from its center.
        Eigen::Index far = 0;
        d.rowwise().minCoeff().maxCoeff(&far);
        res.centers.row(c) = x.row(far);
        changed = true;
      }
    }
    if (!changed && iter > 0) break;
  }
  const Eigen::MatrixXd d = squared_distances(x, res.centers);
  res.inertia = 0.0;
  for (int i = 0; i < n; ++i) {
    int best = 0;
    res.inertia += d.row(i).minCoeff(&best);
    res.assignment[i] = best;
  }
  return res;
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& x, int k, std::mt19937_64& eng,
                    int max_iter, int n_restarts) {
  const int n = static_cast<int>(x.rows());
  if (k < 1 || k > n) {
    throw ConfigError("k-means requires 1 <= k <= n, got k=" +
                      std::to_string(k) + " with n=" + std::to_string(n));
  }
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < n_restarts; ++r) {
    KMeansResult cur = run_once(x, k, eng, max_iter);
    // Keep the first run unconditionally so overflowing inertia (inf vs
    // inf) can never yield an empty result.
    if (r == 0 || cur.inertia < best.inertia) best = std::move(cur);
  }
  return best;
}

}  // namespace brand
