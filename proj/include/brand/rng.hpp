#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <initializer_list>
#include <random>

#include "brand/linalg.hpp"
#include "brand/types.hpp"

namespace brand {

// SplitMix64 output function; used to derive independent engine seeds.
std::uint64_t splitmix64(std::uint64_t& state);

// Deterministic engine for the stream identified by (seed, path). Distinct
// paths give statistically independent streams; the same path always
// reproduces the same draws regardless of what other streams consumed.
std::mt19937_64 make_engine(std::uint64_t seed,
                            std::initializer_list<std::uint64_t> path);

double draw_gamma(std::mt19937_64& eng, double shape, double rate);
double draw_beta(std::mt19937_64& eng, double a, double b);
double draw_chi_squared(std::mt19937_64& eng, double dof);
Eigen::VectorXd draw_dirichlet(std::mt19937_64& eng,
                               const Eigen::VectorXd& alpha);

// Multivariate normal with the given mean and covariance Cholesky factor
// (lower triangular L with cov = L L^T).
Eigen::VectorXd draw_mvn(std::mt19937_64& eng, const Eigen::VectorXd& mean,
                         const Eigen::MatrixXd& cov_chol_l);

// Wishart draw W ~ W_p(dof, scale) by Bartlett decomposition.
Eigen::MatrixXd draw_wishart(std::mt19937_64& eng, double dof,
                             const SpdMatrix& scale);

// Inverse-Wishart draw S ~ IW(dof, scale), i.e. S^-1 ~ W_p(dof, scale^-1).
Eigen::MatrixXd draw_inverse_wishart(std::mt19937_64& eng, double dof,
                                     const SpdMatrix& scale);

struct GaussianParams {
  Eigen::VectorXd mean;
  SpdMatrix cov;
};

// Joint draw (mu, Sigma) from the Normal-Inverse-Wishart distribution:
// Sigma ~ IW(dof, scale), mu | Sigma ~ N(mean, Sigma / precision_scale).
GaussianParams draw_niw(std::mt19937_64& eng, const NIWParams& niw);

}  // namespace brand
