#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "brand/error.hpp"
#include "brand/gibbs.hpp"
#include "brand/metrics.hpp"
#include "brand/rng.hpp"
#include "support.hpp"

using brand::GibbsConfig;
using brand::GibbsState;
using brand::Hyperparams;
using brand::NIWParams;
using brand::SpdMatrix;

namespace {

NIWParams niw1d(double mean, double lambda, double dof, double scale) {
  return NIWParams(Eigen::VectorXd::Constant(1, mean), lambda, dof,
                   SpdMatrix(Eigen::MatrixXd::Constant(1, 1, scale)));
}

Hyperparams two_class_hyper(int truncation = 2) {
  Hyperparams hyper;
  hyper.alpha = Eigen::VectorXd::Constant(3, 0.5);
  hyper.gamma = 3.0;
  hyper.truncation = truncation;
  hyper.known_priors = {niw1d(-4.0, 50.0, 40.0, 20.0),
                        niw1d(4.0, 50.0, 40.0, 20.0)};
  hyper.novelty_prior = niw1d(0.0, 0.1, 3.0, 30.0);
  return hyper;
}

}  // namespace

TEST_SUITE("gibbs") {

TEST_CASE("label draw matches the hand-computed conditional") {
  // Fix every parameter; only the label is random. Two components in one
  // dimension whose posterior assignment probability is computable on
  // paper, then checked against the empirical draw frequency.
  Hyperparams hyper;
  hyper.alpha = Eigen::VectorXd::Constant(2, 1.0);
  hyper.gamma = 2.0;
  hyper.truncation = 1;
  hyper.known_priors = {niw1d(0.0, 1.0, 5.0, 5.0)};
  hyper.novelty_prior = niw1d(2.0, 1.0, 5.0, 5.0);

  GibbsState state;
  state.pi = Eigen::VectorXd(2);
  state.pi << 0.3, 0.7;  // novelty first
  state.sticks = Eigen::VectorXd::Ones(1);
  state.atoms = {
      {Eigen::VectorXd::Constant(1, 0.0),
       SpdMatrix(Eigen::MatrixXd::Constant(1, 1, 1.0))},
      {Eigen::VectorXd::Constant(1, 2.0),
       SpdMatrix(Eigen::MatrixXd::Constant(1, 1, 0.5))},
  };
  Eigen::MatrixXd y(1, 1);
  y << 1.2;
  state.labels = {1};

  const double log_w1 =
      std::log(0.7) + testsup::log_mvn_pdf(
                          y.row(0).transpose(), state.atoms[0].mean,
                          state.atoms[0].cov.matrix());
  const double log_w2 =
      std::log(0.3) + std::log(1.0) +  // single stick takes all mass
      testsup::log_mvn_pdf(y.row(0).transpose(), state.atoms[1].mean,
                           state.atoms[1].cov.matrix());
  const double p2 = 1.0 / (1.0 + std::exp(log_w1 - log_w2));

  auto eng = brand::make_engine(71, {0});
  const int n = 40000;
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    brand::sample_labels(state, y, hyper, eng);
    if (state.labels[0] == 2) ++hits;
  }
  const double phat = static_cast<double>(hits) / n;
  const double se = std::sqrt(p2 * (1 - p2) / n);
  CHECK(std::abs(phat - p2) < 4.0 * se);
}

TEST_CASE("weight draw follows the conjugate dirichlet") {
  // Freeze labels; the top-level weights are then exact Dirichlet draws
  // with parameter alpha + counts.
  Hyperparams hyper = two_class_hyper(2);
  GibbsState state;
  state.sticks = Eigen::VectorXd::Ones(2);
  state.pi = Eigen::VectorXd::Constant(3, 1.0 / 3);
  state.atoms.resize(4);
  // 10 rows in class 1, 6 in class 2, 3 in novelty 1, 1 in novelty 2.
  state.labels.clear();
  state.labels.insert(state.labels.end(), 10, 1);
  state.labels.insert(state.labels.end(), 6, 2);
  state.labels.insert(state.labels.end(), 3, 3);
  state.labels.insert(state.labels.end(), 1, 4);

  auto eng = brand::make_engine(72, {0});
  const int n = 30000;
  std::vector<double> pi0, pi1, stick0;
  for (int i = 0; i < n; ++i) {
    brand::sample_weights(state, hyper, eng);
    pi0.push_back(state.pi[0]);
    pi1.push_back(state.pi[1]);
    stick0.push_back(state.sticks[0]);
    CHECK(state.sticks[1] == 1.0);  // last stick always pinned
  }
  // alpha + counts = (0.5 + 4, 0.5 + 10, 0.5 + 6), total 21.5.
  const auto s0 = testsup::summarize(pi0);
  const auto s1 = testsup::summarize(pi1);
  CHECK(std::abs(s0.mean - 4.5 / 21.5) < 4.0 * s0.se);
  CHECK(std::abs(s1.mean - 10.5 / 21.5) < 4.0 * s1.se);
  // First stick: Beta(1 + 3, gamma + tail) = Beta(4, 4) with gamma = 3 and
  // one label on the later stick.
  const auto st = testsup::summarize(stick0);
  CHECK(std::abs(st.mean - 0.5) < 4.0 * st.se);
}

TEST_CASE("empty tail sticks revert to their prior") {
  Hyperparams hyper = two_class_hyper(3);
  GibbsState state;
  state.sticks = Eigen::VectorXd::Ones(3);
  state.pi = Eigen::VectorXd::Constant(3, 1.0 / 3);
  state.atoms.resize(5);
  state.labels = std::vector<int>(12, 1);  // nothing novel anywhere

  auto eng = brand::make_engine(73, {0});
  std::vector<double> s0;
  for (int i = 0; i < 30000; ++i) {
    brand::sample_weights(state, hyper, eng);
    s0.push_back(state.sticks[0]);
  }
  // Beta(1, gamma) has mean 1 / (1 + gamma).
  const auto st = testsup::summarize(s0);
  CHECK(std::abs(st.mean - 1.0 / (1.0 + hyper.gamma)) < 4.0 * st.se);
}

TEST_CASE("atom draw concentrates on a singleton's posterior") {
  // One observation pinned to one component; repeated conditional draws of
  // that atom should average to the conjugate posterior mean.
  Hyperparams hyper;
  hyper.alpha = Eigen::VectorXd::Constant(2, 1.0);
  hyper.gamma = 2.0;
  hyper.truncation = 1;
  hyper.known_priors = {niw1d(0.0, 2.0, 6.0, 4.0)};
  hyper.novelty_prior = niw1d(0.0, 1.0, 6.0, 4.0);

  Eigen::MatrixXd y(1, 1);
  y << 3.0;
  GibbsState state;
  state.pi = Eigen::VectorXd::Constant(2, 0.5);
  state.sticks = Eigen::VectorXd::Ones(1);
  state.atoms.resize(2);
  state.atoms[0] = {Eigen::VectorXd::Zero(1), SpdMatrix::identity(1)};
  state.atoms[1] = {Eigen::VectorXd::Zero(1), SpdMatrix::identity(1)};
  state.labels = {1};

  auto eng = brand::make_engine(74, {0});
  std::vector<double> means;
  for (int i = 0; i < 30000; ++i) {
    brand::sample_atoms(state, y, hyper, eng);
    means.push_back(state.atoms[0].mean[0]);
  }
  // Posterior mean = (lambda * m0 + y) / (lambda + 1) = 3 / 3 = 1.
  const auto s = testsup::summarize(means);
  CHECK(std::abs(s.mean - 1.0) < 4.0 * s.se);
}

TEST_CASE("full sampler on separated clusters") {
  // 25 rows near each known mean, 10 rows far away at 12.
  Eigen::MatrixXd x(60, 1);
  for (int i = 0; i < 25; ++i) x(i, 0) = -4.0 + 0.04 * (i - 12);
  for (int i = 0; i < 25; ++i) x(25 + i, 0) = 4.0 + 0.04 * (i - 12);
  for (int i = 0; i < 10; ++i) x(50 + i, 0) = 12.0 + 0.05 * (i - 5);
  const Hyperparams hyper = two_class_hyper(3);

  GibbsConfig cfg;
  cfg.truncation = 3;
  cfg.burn_in = 400;
  cfg.samples = 600;
  cfg.seed = 5;
  const auto out = brand::run_gibbs(x, hyper, cfg);

  SUBCASE("map labels recover the partition") {
    std::vector<int> truth(60);
    for (int i = 0; i < 60; ++i) truth[i] = i < 25 ? 1 : (i < 50 ? 2 : 3);
    CHECK(brand::adjusted_rand_index(truth, out.map_labels) >= 0.95);
    for (int i = 0; i < 25; ++i) CHECK(out.map_labels[i] == 1);
    for (int i = 25; i < 50; ++i) CHECK(out.map_labels[i] == 2);
    for (int i = 50; i < 60; ++i) CHECK(out.map_labels[i] > 2);
  }

  SUBCASE("co-clustering matrix is a symmetric unit-diagonal probability") {
    REQUIRE(out.coclustering.rows() == 60);
    CHECK((out.coclustering - out.coclustering.transpose())
              .lpNorm<Eigen::Infinity>() == 0.0);
    for (int i = 0; i < 60; ++i) {
      CHECK(out.coclustering(i, i) == 1.0);
    }
    CHECK(out.coclustering.minCoeff() >= 0.0);
    CHECK(out.coclustering.maxCoeff() <= 1.0);
    // Same-cluster rows nearly always co-occur, cross-cluster rows rarely.
    CHECK(out.coclustering(0, 1) > 0.9);
    CHECK(out.coclustering(0, 30) < 0.1);
    CHECK(out.coclustering(0, 55) < 0.1);
  }

  SUBCASE("summary shapes and occupancy") {
    CHECK(out.counts_trace.rows() == 600);
    CHECK(out.counts_trace.cols() == 5);  // 2 known + 3 sampler components
    // Every sweep accounts for every row exactly once.
    for (int s = 0; s < 600; ++s) {
      CHECK(out.counts_trace.row(s).sum() == 60.0);
    }
    CHECK(out.mean_counts.size() == 5);
    CHECK(out.mean_counts[0] == doctest::Approx(25.0).epsilon(0.1));
    CHECK(out.mean_counts[1] == doctest::Approx(25.0).epsilon(0.1));
    CHECK(out.atom_mean_avg.rows() == 5);
    CHECK(out.atom_mean_avg(0, 0) == doctest::Approx(-4.0).epsilon(0.1));
    CHECK(out.atom_mean_avg(1, 0) == doctest::Approx(4.0).epsilon(0.1));
    CHECK(out.wall_seconds > 0.0);
  }

  SUBCASE("two seeds agree on the partition") {
    GibbsConfig other = cfg;
    other.seed = 17;
    const auto out2 = brand::run_gibbs(x, hyper, other);
    CHECK(brand::adjusted_rand_index(out.map_labels, out2.map_labels) >=
          0.95);
  }

  SUBCASE("deterministic for a fixed seed") {
    const auto rerun = brand::run_gibbs(x, hyper, cfg);
    CHECK(rerun.map_labels == out.map_labels);
    CHECK(rerun.coclustering == out.coclustering);
    CHECK(rerun.counts_trace == out.counts_trace);
  }
}

TEST_CASE("sampler configuration and failure handling") {
  const Hyperparams hyper = two_class_hyper();
  Eigen::MatrixXd x(4, 1);
  x << -4.0, -4.1, 4.0, 4.1;

  SUBCASE("invalid sizes") {
    GibbsConfig cfg;
    cfg.samples = 0;
    CHECK_THROWS_AS(brand::run_gibbs(x, hyper, cfg), brand::ConfigError);
    GibbsConfig cfg2;
    cfg2.truncation = 0;
    auto eng = brand::make_engine(1, {0});
    CHECK_THROWS_AS(brand::init_gibbs(x, hyper, cfg2, eng),
                    brand::ConfigError);
  }

  SUBCASE("non-finite data is reported with its phase") {
    Eigen::MatrixXd bad(2, 1);
    bad << 0.0, std::numeric_limits<double>::quiet_NaN();
    GibbsConfig cfg;
    cfg.burn_in = 5;
    cfg.samples = 5;
    CHECK_THROWS_WITH_AS(brand::run_gibbs(bad, hyper, cfg),
                         doctest::Contains("initialization"),
                         brand::NumericalError);
  }
}

}  // TEST_SUITE
