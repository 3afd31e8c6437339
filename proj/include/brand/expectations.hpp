#pragma once

#include <Eigen/Dense>

#include "brand/types.hpp"

namespace brand {

// E[log|Sigma^-1|] under Sigma ~ IW(dof, scale):
//   sum_{l=1}^p digamma((dof - l + 1) / 2) + p log 2 - log|scale|.
double expected_logdet_precision(const NIWParams& niw);

// E[log N(y | mu, Sigma)] under (mu, Sigma) ~ NIW(niw). Exact:
//   -p/2 log(2 pi) + 1/2 E[log|Sigma^-1|]
//   - 1/2 (p / precision_scale + dof * (y - mean)' scale^-1 (y - mean)).
double expected_gaussian_loglik(const Eigen::VectorXd& y, const NIWParams& niw);

// Precomputed pieces of expected_gaussian_loglik for evaluating many points
// against one NIW. loglik_rows treats each row of y as one observation.
class GaussianLoglikCache {
 public:
  explicit GaussianLoglikCache(const NIWParams& niw);
  double loglik(const Eigen::VectorXd& y) const;
  Eigen::VectorXd loglik_rows(const Eigen::MatrixXd& y) const;

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd scale_chol_l_;
  double dof_;
  double const_term_;
};

// E[log pi_k] = digamma(eta_k) - digamma(sum eta) under pi ~ Dir(eta).
Eigen::VectorXd expected_log_dirichlet_weights(const Eigen::VectorXd& eta);

// E[log v_k] and E[log(1 - v_k)] for independent v_k ~ Beta(a_k, b_k),
// k = 1..T-1. The final stick v_T is pinned to 1 and carries no moment.
struct StickMoments {
  Eigen::VectorXd log_v;    // digamma(a) - digamma(a + b)
  Eigen::VectorXd log_1mv;  // digamma(b) - digamma(a + b)
};
StickMoments stick_log_moments(const Eigen::VectorXd& a,
                               const Eigen::VectorXd& b);

// Expected log stick-breaking weight of each truncated novelty component:
//   entry t: E[log v_t] + sum_{l<t} E[log(1 - v_l)],  t = 1..T,
// with E[log v_T] = 0 because the last stick takes all remaining mass.
Eigen::VectorXd novelty_log_weights(const StickMoments& moments);

// E_q[log NIW(mu, Sigma | prior)] where q is the NIW `post`. Exact in all
// terms, including the IW normalizer and exponent.
double expected_log_niw_prior(const NIWParams& post, const NIWParams& prior);

// E_q[log q(mu, Sigma)] for q = NIW(post); the negative-entropy term.
// Algebraically equal to expected_log_niw_prior(post, post).
double niw_variational_self_term(const NIWParams& post);

}  // namespace brand
