#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "brand/linalg.hpp"

namespace brand {

// Normal-Inverse-Wishart parameter quadruple. Serves as prior, variational
// posterior, and sampled-atom parameterization alike.
struct NIWParams {
  Eigen::VectorXd mean;
  double precision_scale = 1.0;  // lambda
  double dof = 1.0;              // nu
  SpdMatrix scale;               // Psi

  NIWParams() = default;
  // Validates precision_scale > 0 and dof > p - 1; the SpdMatrix argument
  // is positive definite by construction.
  NIWParams(Eigen::VectorXd mean, double precision_scale, double dof,
            SpdMatrix scale);

  int dim() const { return static_cast<int>(mean.size()); }
};

// Model hyperparameters. alpha is indexed novelty-first: alpha[0] is the
// novelty weight alpha_0, alpha[j] belongs to known class j.
struct Hyperparams {
  Eigen::VectorXd alpha;                // length J+1
  double gamma = 1.0;                   // stick-breaking concentration
  std::vector<NIWParams> known_priors;  // length J
  NIWParams novelty_prior;
  int truncation = 1;                   // T

  int num_known() const { return static_cast<int>(known_priors.size()); }
  int num_components() const { return num_known() + truncation; }
  // Throws ConfigError on violated invariants.
  void validate(int dim) const;
};

// Mean-field variational parameters. Responsibility column layout: columns
// 0..J-1 are the known classes 1..J, columns J..J+T-1 the novelty
// components 1..T. eta follows the alpha convention (index 0 = novelty).
struct VariationalState {
  Eigen::VectorXd eta;               // length J+1
  Eigen::VectorXd stick_a, stick_b;  // length T-1
  std::vector<NIWParams> obs_niw;    // length J
  std::vector<NIWParams> nov_niw;    // length T
  Eigen::MatrixXd resp;              // M x (J+T)

  int num_known() const { return static_cast<int>(obs_niw.size()); }
  int truncation() const { return static_cast<int>(nov_niw.size()); }
};

// Labeled training block plus unlabeled test block. Train labels are
// contiguous class ids 1..J; test labels, when present, are arbitrary
// ground-truth ids used only for evaluation.
struct Dataset {
  Eigen::MatrixXd train_x;
  std::vector<int> train_labels;
  Eigen::MatrixXd test_x;
  std::optional<std::vector<int>> test_labels;

  int dim() const { return static_cast<int>(train_x.cols()); }
  int num_train() const { return static_cast<int>(train_x.rows()); }
  int num_test() const { return static_cast<int>(test_x.rows()); }
  // Number of distinct training classes; labels must cover 1..J.
  int num_classes() const;
  // Row indices of training class j (1-based).
  std::vector<int> class_rows(int j) const;
  void validate() const;
};

}  // namespace brand
