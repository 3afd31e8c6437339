#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <vector>

#include "brand/rng.hpp"
#include "brand/types.hpp"

namespace brand {

// Blocked Gibbs sampler over the same two-level mixture the variational fit
// targets, with its own (typically larger) novelty truncation. Serves as
// the sampling-based reference implementation.
struct GibbsConfig {
  int truncation = 5;  // novelty components T'
  int burn_in = 20000;
  int samples = 10000;
  std::uint64_t seed = 0;
  int cocluster_thin = 10;  // co-clustering uses every k-th kept draw
};

struct GibbsState {
  std::vector<int> labels;  // 1..J known, J+1..J+T' novelty
  Eigen::VectorXd pi;       // J+1 weights, novelty-first like alpha
  Eigen::VectorXd sticks;   // length T', last entry pinned to 1
  std::vector<GaussianParams> atoms;  // J known then T' novelty components
};

struct GibbsSummary {
  Eigen::MatrixXd coclustering;   // M x M mean same-component indicator
  std::vector<int> map_labels;    // most frequent component per row
  Eigen::MatrixXd counts_trace;   // samples x (J+T') occupancy counts
  Eigen::MatrixXd atom_mean_avg;  // (J+T') x p average of atom means
  Eigen::VectorXd mean_counts;    // average occupancy per component
  double wall_seconds = 0.0;
};

// Parameters drawn from their priors; labels then drawn conditionally.
GibbsState init_gibbs(const Eigen::MatrixXd& test_x, const Hyperparams& hyper,
                      const GibbsConfig& config, std::mt19937_64& eng);

// Label full conditional: known component k gets pi_k N(y | atom_k), novelty
// component t gets pi_0 v_t prod_{l<t}(1 - v_l) N(y | atom_{J+t}).
void sample_labels(GibbsState& state, const Eigen::MatrixXd& test_x,
                   const Hyperparams& hyper, std::mt19937_64& eng);

// pi | labels ~ Dirichlet(alpha + counts) with all novelty rows pooled into
// count 0; sticks v_k | labels ~ Beta(1 + n_{J+k}, gamma + tail counts).
void sample_weights(GibbsState& state, const Hyperparams& hyper,
                    std::mt19937_64& eng);

// Atoms from their conjugate posteriors given hard assignments; empty
// components draw from the prior.
void sample_atoms(GibbsState& state, const Eigen::MatrixXd& test_x,
                  const Hyperparams& hyper, std::mt19937_64& eng);

GibbsSummary run_gibbs(const Eigen::MatrixXd& test_x,
                       const Hyperparams& hyper, const GibbsConfig& config);

}  // namespace brand
