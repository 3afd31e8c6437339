#include "brand/pipeline.hpp"

#include "brand/error.hpp"

namespace brand {

NIWParams default_novelty_prior(const Eigen::MatrixXd& train_x,
                                double novelty_lambda) {
  const int p = static_cast<int>(train_x.cols());
  const int n = static_cast<int>(train_x.rows());
  if (n < 2) throw DataError("novelty prior needs at least two training rows");
  const Eigen::VectorXd grand_mean = train_x.colwise().mean();
  const Eigen::MatrixXd centered = train_x.rowwise() - grand_mean.transpose();
  const Eigen::MatrixXd cov =
      centered.transpose() * centered / (n - 1);
  SpdMatrix scale((p + 1) * cov, "novelty prior scale");
  return NIWParams(grand_mean, novelty_lambda, p + 2, std::move(scale));
}

BuiltPriors build_hyperparams(const Eigen::MatrixXd& train_x,
                              const std::vector<int>& labels,
                              const PriorConfig& config) {
  BuiltPriors out;
  out.elicitation = elicit_known_priors(train_x, labels, config.elicit);
  const int num_known = static_cast<int>(out.elicitation.priors.size());
  out.hyper.alpha =
      Eigen::VectorXd::Constant(num_known + 1, config.alpha);
  out.hyper.gamma = config.gamma;
  out.hyper.truncation = config.truncation;
  out.hyper.known_priors = out.elicitation.priors;
  out.hyper.novelty_prior =
      default_novelty_prior(train_x, config.novelty_lambda);
  out.hyper.validate(static_cast<int>(train_x.cols()));
  return out;
}

}  // namespace brand
