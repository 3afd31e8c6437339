#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "brand/types.hpp"

namespace brand {

struct MrcdConfig {
  double h_frac = 0.75;  // subset fraction in (0.5, 1]; h = ceil(h_frac * n)
  double rho = 0.1;      // shrinkage weight on the target matrix
  int n_starts = 50;     // elemental starts
  int n_keep = 10;       // starts iterated to convergence
  int max_csteps = 100;  // cap on concentration steps per kept start
  std::uint64_t seed = 0;
  int threads = 1;
  Eigen::MatrixXd target;  // SPD shrinkage target; empty means identity
};

struct RobustEstimate {
  Eigen::VectorXd location;
  Eigen::MatrixXd covariance;  // rho * target + (1-rho) * c * subset cov
  std::vector<int> support;    // the h retained row indices, ascending
  double objective = 0.0;      // log det of covariance; lower is better
};

// Consistency factor for the scatter of the h/n = alpha fraction of points
// closest to the center under a Gaussian model:
//   c(alpha) = alpha / F_{chi2(p+2)}(chi2_p quantile at alpha),
// so that c(1) = 1 and the blended estimate stays Fisher-consistent.
double mcd_consistency_factor(double alpha, int p);

// Location and regularized scatter of the given row subset. Subsets smaller
// than 2 rows contribute a zero sample covariance.
RobustEstimate subset_estimate(const Eigen::MatrixXd& x,
                               const std::vector<int>& subset,
                               const Eigen::MatrixXd& target, double rho,
                               double consistency);

// One concentration step: rank all rows by Mahalanobis distance under the
// current estimate and return the h closest (ties broken by lower index),
// sorted ascending. The objective never increases along these steps.
std::vector<int> c_step(const Eigen::MatrixXd& x, const RobustEstimate& est,
                        int h);

// Regularized minimum-covariance-determinant estimate over random elemental
// starts. Deterministic for fixed config; parallel and serial runs agree.
RobustEstimate mrcd_estimate(const Eigen::MatrixXd& x, const MrcdConfig& cfg);

struct ElicitConfig {
  double lambda_obs = 200.0;  // prior precision scale per known class
  double dof_offset = 200.0;  // prior dof = p + 1 + dof_offset
  MrcdConfig mrcd;
};

struct ElicitationResult {
  std::vector<NIWParams> priors;          // one per class 1..J
  std::vector<RobustEstimate> estimates;  // matching robust fits
  std::vector<std::string> warnings;
};

// Per-class robust location/scatter turned into Normal-Inverse-Wishart
// priors: mean = robust location, precision scale = lambda_obs,
// dof = p + 1 + dof_offset, scale = dof_offset * robust scatter (so the
// prior mean of Sigma equals the scatter). Classes with fewer than p + 2
// members fall back to the full-class blended estimate with a warning.
ElicitationResult elicit_known_priors(const Eigen::MatrixXd& train_x,
                                      const std::vector<int>& labels,
                                      const ElicitConfig& cfg);

}  // namespace brand
