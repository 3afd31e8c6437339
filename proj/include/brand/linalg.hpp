#pragma once

#include <Eigen/Dense>
#include <string>

namespace brand {

// Symmetric positive-definite matrix with its Cholesky factor cached at
// construction. Immutable: any "mutation" happens by constructing a new
// instance, so the cached factor can never go stale.
class SpdMatrix {
 public:
  SpdMatrix() = default;

  // Throws NumericalError naming `role` if m is not symmetric or the
  // factorization fails.
  explicit SpdMatrix(Eigen::MatrixXd m, const std::string& role = "SPD matrix");

  static SpdMatrix identity(int p);

  const Eigen::MatrixXd& matrix() const { return mat_; }
  int dim() const { return static_cast<int>(mat_.rows()); }
  double log_det() const { return log_det_; }
  const Eigen::LLT<Eigen::MatrixXd>& llt() const { return llt_; }

  // x^T A^{-1} x
  double inv_quad(const Eigen::VectorXd& x) const;
  // tr(A^{-1} B)
  double trace_inv_product(const Eigen::MatrixXd& b) const;
  Eigen::MatrixXd inverse() const;

 private:
  Eigen::MatrixXd mat_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  double log_det_ = 0.0;
};

// Log-determinant of an SPD matrix via Cholesky. Throws NumericalError
// naming `role` when the factorization fails.
double logdet_spd(const Eigen::MatrixXd& a, const std::string& role = "matrix");

}  // namespace brand
