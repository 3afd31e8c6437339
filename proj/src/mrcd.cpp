#include "brand/mrcd.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include "brand/error.hpp"
#include "brand/linalg.hpp"
#include "brand/parallel.hpp"
#include "brand/rng.hpp"

namespace brand {

namespace {

constexpr std::uint64_t kMrcdStream = 0x6d726364ULL;  // stream tag

// Sorted h row indices closest in Mahalanobis distance; ties to lower index.
std::vector<int> closest_rows(const Eigen::MatrixXd& x,
                              const Eigen::VectorXd& location,
                              const SpdMatrix& cov, int h) {
  const Eigen::MatrixXd centered = x.rowwise() - location.transpose();
  const Eigen::MatrixXd z = cov.llt().matrixL().solve(centered.transpose());
  const Eigen::VectorXd d2 = z.colwise().squaredNorm();
  std::vector<int> order(x.rows());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return d2[a] < d2[b]; });
  order.resize(h);
  std::sort(order.begin(), order.end());
  return order;
}

}  // namespace

double mcd_consistency_factor(double alpha, int p) {
  if (!(alpha > 0.0) || alpha > 1.0) {
    throw ConfigError("consistency factor needs alpha in (0, 1]");
  }
  if (alpha == 1.0) return 1.0;
  const boost::math::chi_squared chi_p(p);
  const boost::math::chi_squared chi_p2(p + 2);
  const double q = boost::math::quantile(chi_p, alpha);
  return alpha / boost::math::cdf(chi_p2, q);
}

RobustEstimate subset_estimate(const Eigen::MatrixXd& x,
                               const std::vector<int>& subset,
                               const Eigen::MatrixXd& target, double rho,
                               double consistency) {
  const int p = static_cast<int>(x.cols());
  const int m = static_cast<int>(subset.size());
  if (m < 1) throw ConfigError("subset estimate needs at least one row");
  RobustEstimate est;
  est.location = Eigen::VectorXd::Zero(p);
  for (int idx : subset) est.location += x.row(idx).transpose();
  est.location /= m;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(p, p);
  if (m >= 2) {
    for (int idx : subset) {
      const Eigen::VectorXd d = x.row(idx).transpose() - est.location;
      cov.noalias() += d * d.transpose();
    }
    cov /= (m - 1);
  }
  est.covariance = rho * target + (1.0 - rho) * consistency * cov;
  est.support = subset;
  std::sort(est.support.begin(), est.support.end());
  est.objective = logdet_spd(est.covariance, "regularized scatter");
  return est;
}

std::vector<int> c_step(const Eigen::MatrixXd& x, const RobustEstimate& est,
                        int h) {
  const SpdMatrix cov(est.covariance, "concentration-step scatter");
  return closest_rows(x, est.location, cov, h);
}

RobustEstimate mrcd_estimate(const Eigen::MatrixXd& x, const MrcdConfig& cfg) {
  const int n = static_cast<int>(x.rows());
  const int p = static_cast<int>(x.cols());
  if (n < 2) throw DataError("robust estimation needs at least two rows");
  if (!(cfg.h_frac > 0.5) || cfg.h_frac > 1.0) {
    throw ConfigError("h_frac must lie in (0.5, 1]");
  }
  if (!(cfg.rho > 0.0) || cfg.rho >= 1.0) {
    throw ConfigError("rho must lie in (0, 1)");
  }
  const int h = std::min(n, static_cast<int>(std::ceil(cfg.h_frac * n)));
  const double consistency =
      mcd_consistency_factor(static_cast<double>(h) / n, p);
  Eigen::MatrixXd target = cfg.target;
  if (target.size() == 0) {
    target = Eigen::MatrixXd::Identity(p, p);
  } else if (target.rows() != p || target.cols() != p) {
    throw ConfigError("shrinkage target must be p x p");
  }

  auto refine = [&](RobustEstimate est, int max_steps) {
    std::vector<int> subset = est.support;
    for (int step = 0; step < max_steps; ++step) {
      std::vector<int> next = c_step(x, est, h);
      RobustEstimate cand =
          subset_estimate(x, next, target, cfg.rho, consistency);
      const bool converged = (next == subset);
      subset = std::move(next);
      est = std::move(cand);
      if (converged) break;
    }
    return est;
  };

  // Full-sample shortcut: h = n leaves nothing to search over.
  if (h >= n) {
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    return subset_estimate(x, all, target, cfg.rho, consistency);
  }

  const int elemental_size = std::min(p + 1, n);
  const int n_starts = std::max(1, cfg.n_starts);
  std::vector<RobustEstimate> starts(n_starts);
  parallel_for(n_starts, cfg.threads, [&](std::size_t s) {
    std::mt19937_64 eng =
        make_engine(cfg.seed, {kMrcdStream, static_cast<std::uint64_t>(s)});
    // Elemental subset drawn without replacement.
    std::vector<int> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<int> subset;
    subset.reserve(elemental_size);
    for (int i = 0; i < elemental_size; ++i) {
      std::uniform_int_distribution<int> pick(i, n - 1);
      std::swap(pool[i], pool[pick(eng)]);
      subset.push_back(pool[i]);
    }
    RobustEstimate est =
        subset_estimate(x, subset, target, cfg.rho, consistency);
    // Two concentration steps promote the elemental start to an h-subset.
    starts[s] = refine(std::move(est), 2);
  });

  std::vector<int> order(n_starts);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return starts[a].objective < starts[b].objective;
  });
  const int n_keep = std::min(std::max(1, cfg.n_keep), n_starts);

  std::vector<RobustEstimate> finals(n_keep);
  parallel_for(n_keep, cfg.threads, [&](std::size_t i) {
    finals[i] = refine(starts[order[i]], cfg.max_csteps);
  });

  int best = 0;
  for (int i = 1; i < n_keep; ++i) {
    if (finals[i].objective < finals[best].objective) best = i;
  }
  return finals[best];
}

ElicitationResult elicit_known_priors(const Eigen::MatrixXd& train_x,
                                      const std::vector<int>& labels,
                                      const ElicitConfig& cfg) {
  const int p = static_cast<int>(train_x.cols());
  int num_classes = 0;
  for (int lab : labels) num_classes = std::max(num_classes, lab);
  if (num_classes < 1) throw DataError("no training classes found");

  ElicitationResult out;
  out.priors.reserve(num_classes);
  out.estimates.reserve(num_classes);
  const double dof = p + 1 + cfg.dof_offset;

  for (int j = 1; j <= num_classes; ++j) {
    std::vector<int> rows;
    for (int i = 0; i < static_cast<int>(labels.size()); ++i) {
      if (labels[i] == j) rows.push_back(i);
    }
    const int nj = static_cast<int>(rows.size());
    if (nj == 0) {
      throw DataError("training class " + std::to_string(j) + " is empty");
    }
    Eigen::MatrixXd xj(nj, p);
    for (int i = 0; i < nj; ++i) xj.row(i) = train_x.row(rows[i]);

    RobustEstimate est;
    if (nj < p + 2) {
      // Too few members for subset search; blend the full-class scatter
      // with the identity target and flag it.
      std::vector<int> all(nj);
      std::iota(all.begin(), all.end(), 0);
      est = subset_estimate(xj, all, Eigen::MatrixXd::Identity(p, p),
                            cfg.mrcd.rho, 1.0);
      out.warnings.push_back(
          "class " + std::to_string(j) + " has only " + std::to_string(nj) +
          " members (need " + std::to_string(p + 2) +
          " for a robust fit); using the regularized full-class estimate");
    } else {
      MrcdConfig per_class = cfg.mrcd;
      per_class.seed = cfg.mrcd.seed + static_cast<std::uint64_t>(j);
      est = mrcd_estimate(xj, per_class);
    }

    SpdMatrix scale(cfg.dof_offset * est.covariance,
                    "elicited prior scale for class " + std::to_string(j));
    out.priors.emplace_back(est.location, cfg.lambda_obs, dof,
                            std::move(scale));
    out.estimates.push_back(std::move(est));
  }
  return out;
}

}  // namespace brand
