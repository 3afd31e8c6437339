#include "brand/expectations.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "brand/error.hpp"
#include "brand/special.hpp"

namespace brand {

namespace {
constexpr double kLog2Pi = 1.8378770664093454835606594728112;
constexpr double kLog2 = std::numbers::ln2;
}  // namespace

double expected_logdet_precision(const NIWParams& niw) {
  const int p = niw.dim();
  double acc = 0.0;
  for (int l = 1; l <= p; ++l) {
    acc += digamma(0.5 * (niw.dof - l + 1));
  }
  return acc + p * kLog2 - niw.scale.log_det();
}

double expected_gaussian_loglik(const Eigen::VectorXd& y,
                                const NIWParams& niw) {
  const int p = niw.dim();
  if (y.size() != p) {
    throw ConfigError("observation dimension " + std::to_string(y.size()) +
                      " does not match NIW dimension " + std::to_string(p));
  }
  const double maha = niw.scale.inv_quad(y - niw.mean);
  return -0.5 * p * kLog2Pi + 0.5 * expected_logdet_precision(niw) -
         0.5 * (p / niw.precision_scale + niw.dof * maha);
}

GaussianLoglikCache::GaussianLoglikCache(const NIWParams& niw)
    : mean_(niw.mean),
      scale_chol_l_(niw.scale.llt().matrixL()),
      dof_(niw.dof) {
  const int p = niw.dim();
  const_term_ = -0.5 * p * kLog2Pi + 0.5 * expected_logdet_precision(niw) -
                0.5 * p / niw.precision_scale;
}

double GaussianLoglikCache::loglik(const Eigen::VectorXd& y) const {
  const Eigen::VectorXd z =
      scale_chol_l_.triangularView<Eigen::Lower>().solve(y - mean_);
  return const_term_ - 0.5 * dof_ * z.squaredNorm();
}

Eigen::VectorXd GaussianLoglikCache::loglik_rows(
    const Eigen::MatrixXd& y) const {
  Eigen::MatrixXd centered = y.rowwise() - mean_.transpose();
  const Eigen::MatrixXd z =
      scale_chol_l_.triangularView<Eigen::Lower>().solve(centered.transpose());
  return (const_term_ -
          0.5 * dof_ * z.colwise().squaredNorm().array())
      .matrix()
      .transpose();
}

Eigen::VectorXd expected_log_dirichlet_weights(const Eigen::VectorXd& eta) {
  if ((eta.array() <= 0.0).any()) {
    throw ConfigError("Dirichlet parameters must be positive");
  }
  const double psi_total = digamma(eta.sum());
  Eigen::VectorXd out(eta.size());
  for (Eigen::Index k = 0; k < eta.size(); ++k) {
    out[k] = digamma(eta[k]) - psi_total;
  }
  return out;
}

StickMoments stick_log_moments(const Eigen::VectorXd& a,
                               const Eigen::VectorXd& b) {
  if (a.size() != b.size()) {
    throw ConfigError("stick Beta parameter vectors must have equal length");
  }
  if ((a.array() <= 0.0).any() || (b.array() <= 0.0).any()) {
    throw ConfigError("stick Beta parameters must be positive");
  }
  StickMoments m;
  m.log_v.resize(a.size());
  m.log_1mv.resize(a.size());
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    const double psi_sum = digamma(a[k] + b[k]);
    m.log_v[k] = digamma(a[k]) - psi_sum;
    m.log_1mv[k] = digamma(b[k]) - psi_sum;
  }
  return m;
}

Eigen::VectorXd novelty_log_weights(const StickMoments& moments) {
  const Eigen::Index t_minus_1 = moments.log_v.size();
  Eigen::VectorXd out(t_minus_1 + 1);
  double tail = 0.0;  // running sum of E[log(1 - v_l)] for l < t
  for (Eigen::Index t = 0; t < t_minus_1; ++t) {
    out[t] = moments.log_v[t] + tail;
    tail += moments.log_1mv[t];
  }
  out[t_minus_1] = tail;  // last component: E[log v_T] = 0
  return out;
}

double expected_log_niw_prior(const NIWParams& post, const NIWParams& prior) {
  const int p = post.dim();
  if (prior.dim() != p) {
    throw ConfigError("NIW prior and posterior dimensions differ");
  }
  const double elogdet = expected_logdet_precision(post);
  const Eigen::VectorXd diff = post.mean - prior.mean;
  const double maha = post.scale.inv_quad(diff);
  const double tr_term = post.scale.trace_inv_product(prior.scale.matrix());
  return 0.5 * p * (std::log(prior.precision_scale) - kLog2Pi) +
         0.5 * (prior.dof + p + 2) * elogdet -
         0.5 * prior.precision_scale *
             (p / post.precision_scale + post.dof * maha) +
         0.5 * prior.dof * prior.scale.log_det() -
         0.5 * prior.dof * p * kLog2 - log_multigamma(0.5 * prior.dof, p) -
         0.5 * post.dof * tr_term;
}

double niw_variational_self_term(const NIWParams& post) {
  const int p = post.dim();
  const double elogdet = expected_logdet_precision(post);
  return 0.5 * p * (std::log(post.precision_scale) - kLog2Pi) - 0.5 * p +
         0.5 * post.dof * post.scale.log_det() - 0.5 * post.dof * p * kLog2 -
         log_multigamma(0.5 * post.dof, p) - 0.5 * post.dof * p +
         0.5 * (post.dof + p + 2) * elogdet;
}

}  // namespace brand
