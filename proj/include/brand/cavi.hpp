#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "brand/types.hpp"

namespace brand {

enum class InitMethod {
  kKMeansLhs,  // k-means centers + Latin-hypercube scaled hyperparameters
  kRandom,     // novelty means drawn from random test rows
};

struct CaviConfig {
  double tol = 1e-9;       // absolute ELBO-change stopping threshold
  double rel_tol = 1e-12;  // relative guard added on top of tol
  int max_iter = 500;
  int n_starts = 20;
  std::uint64_t seed = 0;
  int threads = 1;
  InitMethod init = InitMethod::kKMeansLhs;
};

// Additive pieces of the evidence lower bound. total() is the ELBO; the
// *_self fields are E[log q] terms and enter with a minus sign.
struct ElboBreakdown {
  double data = 0.0;             // responsibility-weighted E[log N(y | theta)]
  double weights = 0.0;          // responsibility-weighted E[log mixture wt]
  double dirichlet_prior = 0.0;  // E[log Dir(pi | alpha)]
  double stick_prior = 0.0;      // E[log Beta(v | 1, gamma)] over sticks
  double niw_prior = 0.0;        // E[log NIW(theta | prior)] over components
  double resp_self = 0.0;        // sum phi log phi
  double dirichlet_self = 0.0;   // E[log q(pi)]
  double stick_self = 0.0;       // E[log q(v)]
  double niw_self = 0.0;         // E[log q(theta)]

  double total() const {
    return data + weights + dirichlet_prior + stick_prior + niw_prior -
           resp_self - dirichlet_self - stick_self - niw_self;
  }
};

struct FitResult {
  VariationalState state;
  std::vector<double> elbo_trace;  // ELBO after each completed sweep
  double elbo = 0.0;
  int iterations = 0;
  bool converged = false;
  int run_index = 0;
  std::vector<int> map_labels;  // arg-max labels, 1..J known, J+1..J+T novel
};

struct MultiStartResult {
  FitResult best;
  std::vector<double> final_elbos;  // one per start, index = run index
  std::vector<std::vector<double>> traces;  // full ELBO trace per start
  double wall_seconds = 0.0;
};

// --- Coordinate updates -----------------------------------------------------
// Responsibility columns 0..J-1 belong to known classes 1..J, columns
// J..J+T-1 to novelty components 1..T (matching VariationalState::resp).

// Row-normalized responsibilities from the current variational parameters,
// computed through log-sum-exp. Throws NumericalError if a row has no
// finite component score.
Eigen::MatrixXd update_responsibilities(const VariationalState& state,
                                        const Eigen::MatrixXd& test_x);

// Dirichlet update: eta_0 = alpha_0 + total novelty mass, eta_j = alpha_j +
// column mass of known class j. alpha and the result are novelty-first.
Eigen::VectorXd update_eta(const Eigen::MatrixXd& resp,
                           const Eigen::VectorXd& alpha, int num_known);

struct StickParams {
  Eigen::VectorXd a, b;  // length T-1
};

// Stick updates: a_k = 1 + mass of novelty component k, b_k = gamma + mass
// of novelty components k+1..T.
StickParams update_stick_betas(const Eigen::MatrixXd& resp, double gamma,
                               int num_known);

// Conjugate NIW update with fractional weights. A zero total weight returns
// the prior unchanged.
NIWParams update_niw(const NIWParams& prior, const Eigen::MatrixXd& y,
                     const Eigen::VectorXd& weights);

// --- Objective --------------------------------------------------------------

ElboBreakdown compute_elbo_terms(const VariationalState& state,
                                 const Eigen::MatrixXd& test_x,
                                 const Hyperparams& hyper);
double compute_elbo(const VariationalState& state,
                    const Eigen::MatrixXd& test_x, const Hyperparams& hyper);

// --- Driver -----------------------------------------------------------------

// Starting point for one run: known-class blocks copy their priors; novelty
// means come from k-means on the test set (or random rows); eta, the
// novelty precision scale, and the novelty dof are scaled by a
// Latin-hypercube design row selected by run_index.
VariationalState initialize_state(const Eigen::MatrixXd& test_x,
                                  const Hyperparams& hyper,
                                  const CaviConfig& config, int run_index);

// One coordinate-ascent run to convergence. Sweep order: responsibilities,
// Dirichlet, sticks, NIW atoms, then the ELBO.
FitResult run_cavi(const Eigen::MatrixXd& test_x, const Hyperparams& hyper,
                   const CaviConfig& config, int run_index = 0);

// All starts, keeping the highest-ELBO run (lowest run index on ties).
// Parallel and serial execution select the same winner.
MultiStartResult multi_start_cavi(const Eigen::MatrixXd& test_x,
                                  const Hyperparams& hyper,
                                  const CaviConfig& config);

// --- Classification post-processing ----------------------------------------

// Arg-max component per row, reported as labels: known classes keep their
// ids 1..J, novelty component t becomes J + t.
std::vector<int> map_assignments(const Eigen::MatrixXd& resp);

// Posterior probability that each row is a novelty (sum over the novelty
// block).
Eigen::VectorXd novelty_mass(const Eigen::MatrixXd& resp, int num_known);

}  // namespace brand
