#include "brand/linalg.hpp"

#include <cmath>

#include "brand/error.hpp"

namespace brand {

namespace {

Eigen::LLT<Eigen::MatrixXd> factorize(const Eigen::MatrixXd& m,
                                      const std::string& role) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw NumericalError("Cholesky factorization of " + role +
                         ": matrix is not square (" + std::to_string(m.rows()) +
                         "x" + std::to_string(m.cols()) + ")");
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (((m - m.transpose()).cwiseAbs().maxCoeff()) > 1e-8 * scale) {
    throw NumericalError("Cholesky factorization of " + role +
                         ": matrix is not symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("Cholesky factorization of " + role +
                         " failed: matrix is not positive definite");
  }
  return llt;
}

double log_det_from_llt(const Eigen::LLT<Eigen::MatrixXd>& llt) {
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

}  // namespace

SpdMatrix::SpdMatrix(Eigen::MatrixXd m, const std::string& role)
    : mat_(std::move(m)), llt_(factorize(mat_, role)) {
  log_det_ = log_det_from_llt(llt_);
}

SpdMatrix SpdMatrix::identity(int p) {
  return SpdMatrix(Eigen::MatrixXd::Identity(p, p), "identity");
}

double SpdMatrix::inv_quad(const Eigen::VectorXd& x) const {
  // x^T A^{-1} x = ||L^{-1} x||^2
  return llt_.matrixL().solve(x).squaredNorm();
}

double SpdMatrix::trace_inv_product(const Eigen::MatrixXd& b) const {
  return llt_.solve(b).trace();
}

Eigen::MatrixXd SpdMatrix::inverse() const {
  return llt_.solve(Eigen::MatrixXd::Identity(dim(), dim()));
}

double logdet_spd(const Eigen::MatrixXd& a, const std::string& role) {
  return log_det_from_llt(factorize(a, role));
}

}  // namespace brand
