#pragma once

#include <Eigen/Dense>
#include <vector>

#include "brand/mrcd.hpp"
#include "brand/types.hpp"

namespace brand {

struct PriorConfig {
  double alpha = 0.1;          // shared Dirichlet weight for all J+1 slots
  double gamma = 5.0;          // stick-breaking concentration
  int truncation = 10;         // novelty components T
  double novelty_lambda = 0.1;
  ElicitConfig elicit;         // robust per-class prior settings
};

// Novelty base measure from the training block only: mean = grand mean,
// precision scale = novelty_lambda, dof = p + 2 (smallest integer giving
// the inverse-Wishart a finite mean), scale = (p+1) times the training
// covariance so the implied expected covariance is the inflated sample one.
NIWParams default_novelty_prior(const Eigen::MatrixXd& train_x,
                                double novelty_lambda = 0.1);

struct BuiltPriors {
  Hyperparams hyper;
  ElicitationResult elicitation;
};

// Stage one: robust per-class estimates become known-class priors, the
// training block sets the novelty base measure, and the weight
// hyperparameters come from the config.
BuiltPriors build_hyperparams(const Eigen::MatrixXd& train_x,
                              const std::vector<int>& labels,
                              const PriorConfig& config);

}  // namespace brand
