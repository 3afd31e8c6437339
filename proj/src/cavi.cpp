#include "brand/cavi.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "brand/error.hpp"
#include "brand/expectations.hpp"
#include "brand/kmeans.hpp"
#include "brand/lhs.hpp"
#include "brand/parallel.hpp"
#include "brand/rng.hpp"

namespace brand {

namespace {

constexpr std::uint64_t kLhsStream = 0x6c6873ULL;
constexpr std::uint64_t kInitStream = 0x696e6974ULL;

// Per-row log scores for every component (before normalization).
Eigen::MatrixXd component_log_scores(const VariationalState& state,
                                     const Eigen::MatrixXd& test_x) {
  const int num_known = state.num_known();
  const int truncation = state.truncation();
  const Eigen::Index m = test_x.rows();
  const Eigen::VectorXd elogpi = expected_log_dirichlet_weights(state.eta);
  const StickMoments moments =
      stick_log_moments(state.stick_a, state.stick_b);
  const Eigen::VectorXd cumw = novelty_log_weights(moments);

  Eigen::MatrixXd scores(m, num_known + truncation);
  for (int j = 0; j < num_known; ++j) {
    const GaussianLoglikCache cache(state.obs_niw[j]);
    scores.col(j) = cache.loglik_rows(test_x).array() + elogpi[j + 1];
  }
  for (int t = 0; t < truncation; ++t) {
    const GaussianLoglikCache cache(state.nov_niw[t]);
    scores.col(num_known + t) =
        cache.loglik_rows(test_x).array() + elogpi[0] + cumw[t];
  }
  return scores;
}

double log_dirichlet_normalizer(const Eigen::VectorXd& alpha) {
  double acc = std::lgamma(alpha.sum());
  for (Eigen::Index k = 0; k < alpha.size(); ++k) {
    acc -= std::lgamma(alpha[k]);
  }
  return acc;
}

}  // namespace

Eigen::MatrixXd update_responsibilities(const VariationalState& state,
                                        const Eigen::MatrixXd& test_x) {
  Eigen::MatrixXd scores = component_log_scores(state, test_x);
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    const double row_max = scores.row(i).maxCoeff();
    if (!std::isfinite(row_max)) {
      throw NumericalError("responsibility row " + std::to_string(i) +
                           " has no finite component score");
    }
    const Eigen::ArrayXd shifted = scores.row(i).array() - row_max;
    const double norm = shifted.exp().sum();
    scores.row(i) = (shifted - std::log(norm)).exp();
  }
  return scores;
}

Eigen::VectorXd update_eta(const Eigen::MatrixXd& resp,
                           const Eigen::VectorXd& alpha, int num_known) {
  const int truncation = static_cast<int>(resp.cols()) - num_known;
  if (truncation < 1 || alpha.size() != num_known + 1) {
    throw ConfigError("responsibility/alpha shapes are inconsistent");
  }
  Eigen::VectorXd eta(num_known + 1);
  eta[0] = alpha[0] + resp.rightCols(truncation).sum();
  for (int j = 0; j < num_known; ++j) {
    eta[j + 1] = alpha[j + 1] + resp.col(j).sum();
  }
  return eta;
}

StickParams update_stick_betas(const Eigen::MatrixXd& resp, double gamma,
                               int num_known) {
  const int truncation = static_cast<int>(resp.cols()) - num_known;
  if (truncation < 1) {
    throw ConfigError("responsibility matrix has no novelty columns");
  }
  const Eigen::VectorXd mass =
      resp.rightCols(truncation).colwise().sum();
  StickParams out;
  out.a.resize(truncation - 1);
  out.b.resize(truncation - 1);
  double tail = mass.sum();
  for (int k = 0; k < truncation - 1; ++k) {
    tail -= mass[k];
    out.a[k] = 1.0 + mass[k];
    out.b[k] = gamma + tail;
  }
  return out;
}

NIWParams update_niw(const NIWParams& prior, const Eigen::MatrixXd& y,
                     const Eigen::VectorXd& weights) {
  if (y.rows() != weights.size()) {
    throw ConfigError("weight count does not match row count");
  }
  const double total = weights.sum();
  if (total <= 0.0) return prior;

  const Eigen::VectorXd w = weights / total;
  const Eigen::VectorXd ybar = y.transpose() * w;
  Eigen::MatrixXd centered = y.rowwise() - ybar.transpose();
  Eigen::MatrixXd scatter =
      centered.transpose() * w.asDiagonal() * centered * total;

  const double lambda_n = prior.precision_scale + total;
  const Eigen::VectorXd mean_n =
      (prior.precision_scale * prior.mean + total * ybar) / lambda_n;
  const Eigen::VectorXd shift = ybar - prior.mean;
  Eigen::MatrixXd scale_n =
      prior.scale.matrix() + scatter +
      (prior.precision_scale * total / lambda_n) * shift * shift.transpose();
  return NIWParams(mean_n, lambda_n, prior.dof + total,
                   SpdMatrix(std::move(scale_n), "updated NIW scale"));
}

ElboBreakdown compute_elbo_terms(const VariationalState& state,
                                 const Eigen::MatrixXd& test_x,
                                 const Hyperparams& hyper) {
  const int num_known = state.num_known();
  const int truncation = state.truncation();
  ElboBreakdown out;

  const Eigen::VectorXd elogpi = expected_log_dirichlet_weights(state.eta);
  const StickMoments moments =
      stick_log_moments(state.stick_a, state.stick_b);
  const Eigen::VectorXd cumw = novelty_log_weights(moments);
  const Eigen::VectorXd col_mass = state.resp.colwise().sum();

  for (int j = 0; j < num_known; ++j) {
    const GaussianLoglikCache cache(state.obs_niw[j]);
    out.data += state.resp.col(j).dot(cache.loglik_rows(test_x));
    out.weights += col_mass[j] * elogpi[j + 1];
  }
  for (int t = 0; t < truncation; ++t) {
    const GaussianLoglikCache cache(state.nov_niw[t]);
    out.data += state.resp.col(num_known + t).dot(cache.loglik_rows(test_x));
    out.weights += col_mass[num_known + t] * (elogpi[0] + cumw[t]);
  }

  out.dirichlet_prior = log_dirichlet_normalizer(hyper.alpha);
  for (int k = 0; k <= num_known; ++k) {
    out.dirichlet_prior += (hyper.alpha[k] - 1.0) * elogpi[k];
  }

  for (int k = 0; k < truncation - 1; ++k) {
    out.stick_prior +=
        std::log(hyper.gamma) + (hyper.gamma - 1.0) * moments.log_1mv[k];
  }

  for (int j = 0; j < num_known; ++j) {
    out.niw_prior +=
        expected_log_niw_prior(state.obs_niw[j], hyper.known_priors[j]);
    out.niw_self += niw_variational_self_term(state.obs_niw[j]);
  }
  for (int t = 0; t < truncation; ++t) {
    out.niw_prior +=
        expected_log_niw_prior(state.nov_niw[t], hyper.novelty_prior);
    out.niw_self += niw_variational_self_term(state.nov_niw[t]);
  }

  out.resp_self = (state.resp.array() > 0.0)
                      .select(state.resp.array() *
                                  state.resp.array().max(1e-300).log(),
                              0.0)
                      .sum();

  out.dirichlet_self = log_dirichlet_normalizer(state.eta);
  for (Eigen::Index k = 0; k < state.eta.size(); ++k) {
    out.dirichlet_self += (state.eta[k] - 1.0) * elogpi[k];
  }

  for (int k = 0; k < truncation - 1; ++k) {
    const double a = state.stick_a[k];
    const double b = state.stick_b[k];
    out.stick_self += std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                      (a - 1.0) * moments.log_v[k] +
                      (b - 1.0) * moments.log_1mv[k];
  }
  return out;
}

double compute_elbo(const VariationalState& state,
                    const Eigen::MatrixXd& test_x, const Hyperparams& hyper) {
  return compute_elbo_terms(state, test_x, hyper).total();
}

VariationalState initialize_state(const Eigen::MatrixXd& test_x,
                                  const Hyperparams& hyper,
                                  const CaviConfig& config, int run_index) {
  const int num_known = hyper.num_known();
  const int truncation = hyper.truncation;
  const int p = static_cast<int>(test_x.cols());
  hyper.validate(p);
  if (run_index < 0 || run_index >= config.n_starts) {
    throw ConfigError("run index " + std::to_string(run_index) +
                      " outside 0.." + std::to_string(config.n_starts - 1));
  }

  // One shared design over (eta scale, precision multiplier, dof
  // multiplier); each run takes its own row.
  std::mt19937_64 lhs_eng = make_engine(config.seed, {kLhsStream});
  const Eigen::MatrixXd design = latin_hypercube(
      config.n_starts, {{0.1, 1.0}, {1.0, 10.0}, {1.0, 10.0}}, lhs_eng);
  const double eta_scale = design(run_index, 0);
  const double lambda_mult = design(run_index, 1);
  const double dof_mult = design(run_index, 2);

  VariationalState state;
  state.eta = Eigen::VectorXd::Constant(num_known + 1, eta_scale);
  state.stick_a = Eigen::VectorXd::Ones(truncation - 1);
  state.stick_b = Eigen::VectorXd::Constant(truncation - 1, hyper.gamma);
  state.obs_niw = hyper.known_priors;

  if (test_x.rows() < truncation) {
    throw ConfigError("cannot place " + std::to_string(truncation) +
                      " novelty centers among " +
                      std::to_string(test_x.rows()) + " test rows");
  }
  std::mt19937_64 eng =
      make_engine(config.seed,
                  {kInitStream, static_cast<std::uint64_t>(run_index)});
  Eigen::MatrixXd centers(truncation, p);
  if (config.init == InitMethod::kKMeansLhs) {
    centers = kmeans(test_x, truncation, eng).centers;
  } else {
    std::uniform_int_distribution<int> pick(
        0, static_cast<int>(test_x.rows()) - 1);
    for (int t = 0; t < truncation; ++t) centers.row(t) = test_x.row(pick(eng));
  }

  const NIWParams& base = hyper.novelty_prior;
  state.nov_niw.reserve(truncation);
  for (int t = 0; t < truncation; ++t) {
    state.nov_niw.emplace_back(centers.row(t).transpose(),
                               base.precision_scale * lambda_mult,
                               base.dof * dof_mult, base.scale);
  }
  state.resp =
      Eigen::MatrixXd::Zero(test_x.rows(), num_known + truncation);
  return state;
}

FitResult run_cavi(const Eigen::MatrixXd& test_x, const Hyperparams& hyper,
                   const CaviConfig& config, int run_index) {
  FitResult res;
  res.run_index = run_index;
  res.state = initialize_state(test_x, hyper, config, run_index);
  double prev = -std::numeric_limits<double>::infinity();
  for (int iter = 1; iter <= config.max_iter; ++iter) {
    res.state.resp = update_responsibilities(res.state, test_x);
    res.state.eta = update_eta(res.state.resp, hyper.alpha, hyper.num_known());
    StickParams sticks = update_stick_betas(res.state.resp, hyper.gamma,
                                            hyper.num_known());
    res.state.stick_a = std::move(sticks.a);
    res.state.stick_b = std::move(sticks.b);
    for (int j = 0; j < hyper.num_known(); ++j) {
      res.state.obs_niw[j] =
          update_niw(hyper.known_priors[j], test_x, res.state.resp.col(j));
    }
    for (int t = 0; t < hyper.truncation; ++t) {
      res.state.nov_niw[t] = update_niw(
          hyper.novelty_prior, test_x,
          res.state.resp.col(hyper.num_known() + t));
    }
    const double elbo = compute_elbo(res.state, test_x, hyper);
    if (std::isnan(elbo) || std::isinf(elbo)) {
      throw NumericalError("objective diverged at iteration " +
                           std::to_string(iter));
    }
    res.elbo_trace.push_back(elbo);
    res.elbo = elbo;
    res.iterations = iter;
    // An infinite tolerance accepts the very first sweep.
    if (std::isinf(config.tol) ||
        (iter > 1 && std::abs(elbo - prev) <
                         config.tol + config.rel_tol * std::abs(prev))) {
      res.converged = true;
      break;
    }
    prev = elbo;
  }
  res.map_labels = map_assignments(res.state.resp);
  return res;
}

MultiStartResult multi_start_cavi(const Eigen::MatrixXd& test_x,
                                  const Hyperparams& hyper,
                                  const CaviConfig& config) {
  if (config.n_starts < 1) throw ConfigError("need at least one start");
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<FitResult> runs(config.n_starts);
  std::vector<std::string> failures(config.n_starts);
  std::vector<char> ok(config.n_starts, 0);
  parallel_for(config.n_starts, config.threads, [&](std::size_t r) {
    try {
      runs[r] = run_cavi(test_x, hyper, config, static_cast<int>(r));
      ok[r] = 1;
    } catch (const NumericalError& e) {
      failures[r] = e.what();  // a diverged start only loses its vote
    }
  });
  MultiStartResult out;
  out.final_elbos.assign(config.n_starts,
                         -std::numeric_limits<double>::infinity());
  out.traces.resize(config.n_starts);
  int best = -1;
  for (int r = 0; r < config.n_starts; ++r) {
    out.traces[r] = runs[r].elbo_trace;
    if (!ok[r]) continue;
    out.final_elbos[r] = runs[r].elbo;
    if (best < 0 || runs[r].elbo > runs[best].elbo) best = r;
  }
  if (best < 0) {
    throw NumericalError("all " + std::to_string(config.n_starts) +
                         " starts diverged; first failure: " + failures[0]);
  }
  out.best = std::move(runs[best]);
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return out;
}

std::vector<int> map_assignments(const Eigen::MatrixXd& resp) {
  std::vector<int> labels(resp.rows());
  for (Eigen::Index i = 0; i < resp.rows(); ++i) {
    int best = 0;
    resp.row(i).maxCoeff(&best);
    labels[i] = best + 1;  // known cols map to 1..J, novelty to J+1..J+T
  }
  return labels;
}

Eigen::VectorXd novelty_mass(const Eigen::MatrixXd& resp, int num_known) {
  const int truncation = static_cast<int>(resp.cols()) - num_known;
  return resp.rightCols(truncation).rowwise().sum();
}

}  // namespace brand
