#include "brand/rng.hpp"

#include <string>

#include "brand/error.hpp"

namespace brand {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::mt19937_64 make_engine(std::uint64_t seed,
                            std::initializer_list<std::uint64_t> path) {
  std::uint64_t state = seed;
  std::uint64_t mixed = splitmix64(state);
  for (std::uint64_t id : path) {
    state ^= splitmix64(state) + id;
    mixed = splitmix64(state);
  }
  return std::mt19937_64(mixed);
}

double draw_gamma(std::mt19937_64& eng, double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0)) {
    throw ConfigError("gamma draw requires positive shape and rate");
  }
  std::gamma_distribution<double> dist(shape, 1.0 / rate);
  return dist(eng);
}

double draw_beta(std::mt19937_64& eng, double a, double b) {
  const double x = draw_gamma(eng, a, 1.0);
  const double y = draw_gamma(eng, b, 1.0);
  return x / (x + y);
}

double draw_chi_squared(std::mt19937_64& eng, double dof) {
  return draw_gamma(eng, 0.5 * dof, 0.5);
}

Eigen::VectorXd draw_dirichlet(std::mt19937_64& eng,
                               const Eigen::VectorXd& alpha) {
  Eigen::VectorXd g(alpha.size());
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    g[i] = draw_gamma(eng, alpha[i], 1.0);
  }
  const double total = g.sum();
  if (!(total > 0.0)) {
    throw NumericalError("Dirichlet draw underflowed to zero total mass");
  }
  return g / total;
}

Eigen::VectorXd draw_mvn(std::mt19937_64& eng, const Eigen::VectorXd& mean,
                         const Eigen::MatrixXd& cov_chol_l) {
  std::normal_distribution<double> std_normal(0.0, 1.0);
  Eigen::VectorXd z(mean.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = std_normal(eng);
  return mean + cov_chol_l * z;
}

Eigen::MatrixXd draw_wishart(std::mt19937_64& eng, double dof,
                             const SpdMatrix& scale) {
  const int p = scale.dim();
  if (!(dof > p - 1)) {
    throw ConfigError("Wishart dof must exceed dim - 1, got " +
                      std::to_string(dof));
  }
  std::normal_distribution<double> std_normal(0.0, 1.0);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(p, p);
  for (int i = 0; i < p; ++i) {
    a(i, i) = std::sqrt(draw_chi_squared(eng, dof - i));
    for (int j = 0; j < i; ++j) a(i, j) = std_normal(eng);
  }
  const Eigen::MatrixXd l = scale.llt().matrixL();
  const Eigen::MatrixXd la = l * a;
  return la * la.transpose();
}

Eigen::MatrixXd draw_inverse_wishart(std::mt19937_64& eng, double dof,
                                     const SpdMatrix& scale) {
  const SpdMatrix scale_inv(scale.inverse(), "inverse-Wishart scale inverse");
  const Eigen::MatrixXd w = draw_wishart(eng, dof, scale_inv);
  const SpdMatrix w_spd(w, "inverse-Wishart precision draw");
  return w_spd.inverse();
}

GaussianParams draw_niw(std::mt19937_64& eng, const NIWParams& niw) {
  Eigen::MatrixXd sigma = draw_inverse_wishart(eng, niw.dof, niw.scale);
  SpdMatrix cov(std::move(sigma), "NIW covariance draw");
  const Eigen::MatrixXd mean_chol =
      (cov.matrix() / niw.precision_scale).llt().matrixL();
  Eigen::VectorXd mu = draw_mvn(eng, niw.mean, mean_chol);
  return GaussianParams{std::move(mu), std::move(cov)};
}

}  // namespace brand
