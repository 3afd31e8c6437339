#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "brand/rng.hpp"
#include "brand/types.hpp"

// Oracle helpers shared by the unit and acceptance suites. Everything here
// is written independently of the library's own expectation code so the two
// can disagree when one of them is wrong.
namespace testsup {

struct McSummary {
  double mean = 0.0;
  double se = 0.0;  // standard error of the mean
};

McSummary summarize(const std::vector<double>& draws);

// Random SPD matrix A A^T + base I.
Eigen::MatrixXd random_spd(std::mt19937_64& eng, int p, double base = 0.5);

// Randomized but well-conditioned NIW parameter set for oracle sweeps.
brand::NIWParams random_niw(std::mt19937_64& eng, int p);

// Exact log densities.
double log_mvn_pdf(const Eigen::VectorXd& y, const Eigen::VectorXd& mean,
                   const Eigen::MatrixXd& cov);
double log_iw_pdf(const Eigen::MatrixXd& sigma, double dof,
                  const Eigen::MatrixXd& scale);
double log_niw_pdf(const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma,
                   const brand::NIWParams& par);

// Marginal likelihood of the rows of y under a single Gaussian component
// with the given NIW prior (conjugate evidence, closed form).
double niw_marginal_loglik(const Eigen::MatrixXd& y,
                           const brand::NIWParams& prior);

// Exact log prior probability of one label sequence under the two-level
// weight construction: Dirichlet(alpha) over the J+1 top slots with all
// novelty labels pooled into slot 0, and independent Beta(1, gamma) sticks
// subdividing the novelty slot at truncation T (last stick pinned to 1).
// Labels: 1..J known, J+t for novelty component t.
double log_label_sequence_prior(const std::vector<int>& labels, int num_known,
                                const Eigen::VectorXd& alpha, double gamma,
                                int truncation);

// Exhaustive O(n^2) pair-counting implementations.
double pair_rand_adjusted(const std::vector<int>& a, const std::vector<int>& b);
double pair_fowlkes_mallows(const std::vector<int>& a,
                            const std::vector<int>& b);

// Uniformly random labeling of n items over 1..k.
std::vector<int> random_partition(std::mt19937_64& eng, int n, int k);

// Self-deleting scratch directory for file round-trip tests.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const {
    return (path_ / name).string();
  }

 private:
  std::filesystem::path path_;
};

}  // namespace testsup
