#include "brand/gibbs.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "brand/cavi.hpp"
#include "brand/error.hpp"
#include "brand/linalg.hpp"

namespace brand {

namespace {

constexpr std::uint64_t kGibbsStream = 0x67696273ULL;
constexpr double kLog2Pi = 1.8378770664093454835606594728112;

// log N(y | mean, cov) for every row of y.
Eigen::VectorXd gaussian_loglik_rows(const Eigen::MatrixXd& y,
                                     const GaussianParams& g) {
  const int p = static_cast<int>(y.cols());
  const Eigen::MatrixXd centered = y.rowwise() - g.mean.transpose();
  const Eigen::MatrixXd z =
      g.cov.llt().matrixL().solve(centered.transpose());
  const double c = -0.5 * p * kLog2Pi - 0.5 * g.cov.log_det();
  return (c - 0.5 * z.colwise().squaredNorm().array()).matrix().transpose();
}

int categorical_from_logs(const Eigen::VectorXd& log_w,
                          std::mt19937_64& eng) {
  const double m = log_w.maxCoeff();
  if (!std::isfinite(m)) {
    throw NumericalError("label draw has no finite component weight");
  }
  const Eigen::ArrayXd w = (log_w.array() - m).exp();
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double target = unif(eng) * w.sum();
  double acc = 0.0;
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    acc += w[k];
    if (acc >= target) return static_cast<int>(k);
  }
  return static_cast<int>(w.size()) - 1;
}

std::vector<int> component_counts(const GibbsState& state, int total) {
  std::vector<int> counts(total, 0);
  for (int lab : state.labels) ++counts[lab - 1];
  return counts;
}

}  // namespace

GibbsState init_gibbs(const Eigen::MatrixXd& test_x, const Hyperparams& hyper,
                      const GibbsConfig& config, std::mt19937_64& eng) {
  if (config.truncation < 1) {
    throw ConfigError("sampler truncation must be at least 1");
  }
  const int num_known = hyper.num_known();
  GibbsState state;
  state.pi = draw_dirichlet(eng, hyper.alpha);
  state.sticks.resize(config.truncation);
  for (int t = 0; t < config.truncation - 1; ++t) {
    state.sticks[t] = draw_beta(eng, 1.0, hyper.gamma);
  }
  state.sticks[config.truncation - 1] = 1.0;
  state.atoms.reserve(num_known + config.truncation);
  for (int j = 0; j < num_known; ++j) {
    state.atoms.push_back(draw_niw(eng, hyper.known_priors[j]));
  }
  for (int t = 0; t < config.truncation; ++t) {
    state.atoms.push_back(draw_niw(eng, hyper.novelty_prior));
  }
  state.labels.assign(test_x.rows(), 1);
  sample_labels(state, test_x, hyper, eng);
  return state;
}

void sample_labels(GibbsState& state, const Eigen::MatrixXd& test_x,
                   const Hyperparams& hyper, std::mt19937_64& eng) {
  const int num_known = hyper.num_known();
  const int truncation = static_cast<int>(state.sticks.size());
  const int total = num_known + truncation;
  const Eigen::Index m = test_x.rows();

  Eigen::VectorXd log_weight(total);
  for (int j = 0; j < num_known; ++j) {
    log_weight[j] = std::log(state.pi[j + 1]);
  }
  double tail = std::log(state.pi[0]);
  for (int t = 0; t < truncation; ++t) {
    log_weight[num_known + t] = tail + std::log(state.sticks[t]);
    tail += std::log1p(-state.sticks[t]);
  }

  Eigen::MatrixXd scores(m, total);
  for (int k = 0; k < total; ++k) {
    scores.col(k) =
        gaussian_loglik_rows(test_x, state.atoms[k]).array() + log_weight[k];
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    state.labels[i] = categorical_from_logs(scores.row(i).transpose(), eng) + 1;
  }
}

void sample_weights(GibbsState& state, const Hyperparams& hyper,
                    std::mt19937_64& eng) {
  const int num_known = hyper.num_known();
  const int truncation = static_cast<int>(state.sticks.size());
  const std::vector<int> counts =
      component_counts(state, num_known + truncation);

  Eigen::VectorXd dir_param(num_known + 1);
  int novelty_total = 0;
  for (int t = 0; t < truncation; ++t) novelty_total += counts[num_known + t];
  dir_param[0] = hyper.alpha[0] + novelty_total;
  for (int j = 0; j < num_known; ++j) {
    dir_param[j + 1] = hyper.alpha[j + 1] + counts[j];
  }
  state.pi = draw_dirichlet(eng, dir_param);

  int tail = novelty_total;
  for (int t = 0; t < truncation - 1; ++t) {
    tail -= counts[num_known + t];
    state.sticks[t] =
        draw_beta(eng, 1.0 + counts[num_known + t], hyper.gamma + tail);
  }
  state.sticks[truncation - 1] = 1.0;
}

void sample_atoms(GibbsState& state, const Eigen::MatrixXd& test_x,
                  const Hyperparams& hyper, std::mt19937_64& eng) {
  const int num_known = hyper.num_known();
  const int total = static_cast<int>(state.atoms.size());
  const Eigen::Index m = test_x.rows();
  Eigen::VectorXd indicator(m);
  for (int k = 0; k < total; ++k) {
    const NIWParams& prior =
        k < num_known ? hyper.known_priors[k] : hyper.novelty_prior;
    for (Eigen::Index i = 0; i < m; ++i) {
      indicator[i] = state.labels[i] == k + 1 ? 1.0 : 0.0;
    }
    // update_niw returns the prior itself when the component is empty.
    const NIWParams posterior = update_niw(prior, test_x, indicator);
    state.atoms[k] = draw_niw(eng, posterior);
  }
}

GibbsSummary run_gibbs(const Eigen::MatrixXd& test_x,
                       const Hyperparams& hyper, const GibbsConfig& config) {
  if (config.samples < 1) throw ConfigError("need at least one kept sample");
  const int num_known = hyper.num_known();
  const int total = num_known + config.truncation;
  const Eigen::Index m = test_x.rows();
  const int p = static_cast<int>(test_x.cols());
  hyper.validate(p);

  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 eng = make_engine(config.seed, {kGibbsStream});
  GibbsState state;
  try {
    state = init_gibbs(test_x, hyper, config, eng);
  } catch (const NumericalError& e) {
    throw NumericalError(std::string("initialization: ") + e.what());
  }

  int sweep_index = 0;
  auto sweep = [&] {
    ++sweep_index;
    try {
      sample_weights(state, hyper, eng);
      sample_atoms(state, test_x, hyper, eng);
      sample_labels(state, test_x, hyper, eng);
    } catch (const NumericalError& e) {
      throw NumericalError("sweep " + std::to_string(sweep_index) + ": " +
                           e.what());
    }
  };
  for (int it = 0; it < config.burn_in; ++it) sweep();

  GibbsSummary out;
  out.coclustering = Eigen::MatrixXd::Zero(m, m);
  out.counts_trace = Eigen::MatrixXd::Zero(config.samples, total);
  out.atom_mean_avg = Eigen::MatrixXd::Zero(total, p);
  Eigen::MatrixXi label_freq = Eigen::MatrixXi::Zero(m, total);
  int cocluster_draws = 0;

  for (int s = 0; s < config.samples; ++s) {
    sweep();
    const std::vector<int> counts = component_counts(state, total);
    for (int k = 0; k < total; ++k) {
      out.counts_trace(s, k) = counts[k];
      out.atom_mean_avg.row(k) += state.atoms[k].mean.transpose();
    }
    for (Eigen::Index i = 0; i < m; ++i) {
      ++label_freq(i, state.labels[i] - 1);
    }
    if (s % std::max(1, config.cocluster_thin) == 0) {
      ++cocluster_draws;
      std::vector<std::vector<int>> groups(total);
      for (Eigen::Index i = 0; i < m; ++i) {
        groups[state.labels[i] - 1].push_back(static_cast<int>(i));
      }
      for (const auto& g : groups) {
        for (std::size_t a = 0; a < g.size(); ++a) {
          for (std::size_t b = a; b < g.size(); ++b) {
            out.coclustering(g[a], g[b]) += 1.0;
          }
        }
      }
    }
  }

  out.coclustering /= std::max(1, cocluster_draws);
  const Eigen::MatrixXd mirrored =
      out.coclustering.selfadjointView<Eigen::Upper>();
  out.coclustering = mirrored;
  out.atom_mean_avg /= config.samples;
  out.mean_counts = out.counts_trace.colwise().mean();
  out.map_labels.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    int best = 0;
    label_freq.row(i).maxCoeff(&best);  // first max wins ties
    out.map_labels[i] = best + 1;
  }
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return out;
}

}  // namespace brand
