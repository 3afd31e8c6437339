#include "support.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace testsup {

namespace {

constexpr double kLogPi = 1.1447298858494001741434273513531;
constexpr double kLog2Pi = 1.8378770664093454835606594728112;

double log_multigamma(double a, int p) {
  double out = 0.25 * p * (p - 1) * kLogPi;
  for (int i = 1; i <= p; ++i) out += std::lgamma(a + 0.5 * (1 - i));
  return out;
}

double logdet(const Eigen::MatrixXd& a) {
  const Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("test oracle: matrix not SPD");
  }
  return 2.0 * Eigen::MatrixXd(llt.matrixL()).diagonal().array().log().sum();
}

}  // namespace

McSummary summarize(const std::vector<double>& draws) {
  McSummary out;
  const double n = static_cast<double>(draws.size());
  out.mean = std::accumulate(draws.begin(), draws.end(), 0.0) / n;
  double ss = 0.0;
  for (double d : draws) ss += (d - out.mean) * (d - out.mean);
  out.se = std::sqrt(ss / (n * (n - 1.0)));
  return out;
}

Eigen::MatrixXd random_spd(std::mt19937_64& eng, int p, double base) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd a(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) a(i, j) = normal(eng);
  return a * a.transpose() + base * Eigen::MatrixXd::Identity(p, p);
}

brand::NIWParams random_niw(std::mt19937_64& eng, int p) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal;
  Eigen::VectorXd mean(p);
  for (int i = 0; i < p; ++i) mean[i] = 3.0 * normal(eng);
  const double lambda = 0.2 + 5.0 * unif(eng);
  // Keep dof comfortably above p + 3 so the log-density draws have finite
  // variance and the Monte-Carlo standard errors stay small.
  const double dof = p + 3.0 + 6.0 * unif(eng);
  return brand::NIWParams(mean, lambda, dof,
                          brand::SpdMatrix(random_spd(eng, p, 1.0)));
}

double log_mvn_pdf(const Eigen::VectorXd& y, const Eigen::VectorXd& mean,
                   const Eigen::MatrixXd& cov) {
  const int p = static_cast<int>(y.size());
  const Eigen::LLT<Eigen::MatrixXd> llt(cov);
  const Eigen::VectorXd z = llt.matrixL().solve(y - mean);
  return -0.5 * p * kLog2Pi - 0.5 * logdet(cov) - 0.5 * z.squaredNorm();
}

double log_iw_pdf(const Eigen::MatrixXd& sigma, double dof,
                  const Eigen::MatrixXd& scale) {
  const int p = static_cast<int>(sigma.rows());
  const Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  const double trace_term =
      llt.solve(scale).trace();  // tr(scale * sigma^-1)
  return 0.5 * dof * logdet(scale) - 0.5 * dof * p * std::log(2.0) -
         log_multigamma(0.5 * dof, p) -
         0.5 * (dof + p + 1) * logdet(sigma) - 0.5 * trace_term;
}

double log_niw_pdf(const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma,
                   const brand::NIWParams& par) {
  return log_mvn_pdf(mu, par.mean, sigma / par.precision_scale) +
         log_iw_pdf(sigma, par.dof, par.scale.matrix());
}

double niw_marginal_loglik(const Eigen::MatrixXd& y,
                           const brand::NIWParams& prior) {
  const int n = static_cast<int>(y.rows());
  const int p = static_cast<int>(y.cols());
  if (n == 0) return 0.0;
  const Eigen::VectorXd ybar = y.colwise().mean();
  Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(p, p);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd d = y.row(i).transpose() - ybar;
    scatter += d * d.transpose();
  }
  const double l0 = prior.precision_scale, v0 = prior.dof;
  const double ln = l0 + n, vn = v0 + n;
  const Eigen::VectorXd dm = ybar - prior.mean;
  const Eigen::MatrixXd psi_n =
      prior.scale.matrix() + scatter + (l0 * n / ln) * (dm * dm.transpose());
  return -0.5 * n * p * kLogPi + 0.5 * p * (std::log(l0) - std::log(ln)) +
         log_multigamma(0.5 * vn, p) - log_multigamma(0.5 * v0, p) +
         0.5 * v0 * prior.scale.log_det() - 0.5 * vn * logdet(psi_n);
}

double log_label_sequence_prior(const std::vector<int>& labels, int num_known,
                                const Eigen::VectorXd& alpha, double gamma,
                                int truncation) {
  std::vector<int> known_counts(num_known, 0);
  std::vector<int> nov_counts(truncation, 0);
  for (int lab : labels) {
    if (lab <= num_known) {
      ++known_counts[lab - 1];
    } else {
      ++nov_counts[lab - num_known - 1];
    }
  }
  const int n0 =
      std::accumulate(nov_counts.begin(), nov_counts.end(), 0);
  const int m = static_cast<int>(labels.size());

  // Dirichlet block: E[pi_0^{n0} prod_j pi_j^{n_j}] for one fixed sequence.
  const double a_sum = alpha.sum();
  double out = std::lgamma(a_sum) - std::lgamma(a_sum + m);
  out += std::lgamma(alpha[0] + n0) - std::lgamma(alpha[0]);
  for (int j = 1; j <= num_known; ++j) {
    out += std::lgamma(alpha[j] + known_counts[j - 1]) - std::lgamma(alpha[j]);
  }

  // Stick block: E[v_l^{m_l} (1-v_l)^{r_l}] per independent Beta(1, gamma)
  // stick, r_l the mass of later novelty components; v_T is pinned to 1.
  int tail = n0;
  for (int l = 0; l < truncation - 1; ++l) {
    const int ml = nov_counts[l];
    tail -= ml;
    out += std::lgamma(1.0 + ml) + std::lgamma(gamma + tail) +
           std::lgamma(1.0 + gamma) - std::lgamma(1.0 + gamma + ml + tail) -
           std::lgamma(gamma);
  }
  return out;
}

namespace {

struct PairCounts {
  double same_same = 0, same_diff = 0, diff_same = 0, diff_diff = 0;
};

PairCounts count_pairs(const std::vector<int>& a, const std::vector<int>& b) {
  PairCounts c;
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool in_a = a[i] == a[j];
      const bool in_b = b[i] == b[j];
      if (in_a && in_b) ++c.same_same;
      else if (in_a) ++c.same_diff;
      else if (in_b) ++c.diff_same;
      else ++c.diff_diff;
    }
  }
  return c;
}

}  // namespace

double pair_rand_adjusted(const std::vector<int>& a,
                          const std::vector<int>& b) {
  const PairCounts c = count_pairs(a, b);
  const double num = 2.0 * (c.same_same * c.diff_diff - c.same_diff * c.diff_same);
  const double den = (c.same_same + c.same_diff) * (c.same_diff + c.diff_diff) +
                     (c.same_same + c.diff_same) * (c.diff_same + c.diff_diff);
  if (den == 0.0) return (c.same_diff == 0 && c.diff_same == 0) ? 1.0 : 0.0;
  return num / den;
}

double pair_fowlkes_mallows(const std::vector<int>& a,
                            const std::vector<int>& b) {
  const PairCounts c = count_pairs(a, b);
  const double pa = c.same_same + c.same_diff;
  const double pb = c.same_same + c.diff_same;
  if (pa == 0.0 || pb == 0.0) return 0.0;
  return c.same_same / std::sqrt(pa * pb);
}

std::vector<int> random_partition(std::mt19937_64& eng, int n, int k) {
  std::uniform_int_distribution<int> pick(1, k);
  std::vector<int> out(n);
  for (int& v : out) v = pick(eng);
  return out;
}

TempDir::TempDir() {
  std::random_device rd;
  const auto base = std::filesystem::temp_directory_path();
  for (int attempt = 0; attempt < 100; ++attempt) {
    auto candidate = base / ("brand_test_" + std::to_string(rd()));
    if (std::filesystem::create_directory(candidate)) {
      path_ = candidate;
      return;
    }
  }
  throw std::runtime_error("could not create scratch directory");
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace testsup
