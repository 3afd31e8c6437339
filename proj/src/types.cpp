#include "brand/types.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "brand/error.hpp"

namespace brand {

NIWParams::NIWParams(Eigen::VectorXd mean_in, double precision_scale_in,
                     double dof_in, SpdMatrix scale_in)
    : mean(std::move(mean_in)),
      precision_scale(precision_scale_in),
      dof(dof_in),
      scale(std::move(scale_in)) {
  const int p = dim();
  if (scale.dim() != p) {
    throw ConfigError("NIW scale matrix dimension " +
                      std::to_string(scale.dim()) +
                      " does not match mean dimension " + std::to_string(p));
  }
  if (!(precision_scale > 0.0)) {
    throw ConfigError("NIW precision scale must be positive, got " +
                      std::to_string(precision_scale));
  }
  if (!(dof > p - 1)) {
    throw ConfigError("NIW degrees of freedom must exceed dim - 1, got " +
                      std::to_string(dof) + " with dim " + std::to_string(p));
  }
}

void Hyperparams::validate(int dim) const {
  const int J = num_known();
  if (alpha.size() != J + 1) {
    throw ConfigError("alpha must have length J+1 = " + std::to_string(J + 1) +
                      ", got " + std::to_string(alpha.size()));
  }
  if ((alpha.array() <= 0.0).any()) {
    throw ConfigError("all Dirichlet weights alpha must be positive");
  }
  if (!(gamma > 0.0)) {
    throw ConfigError("stick-breaking concentration gamma must be positive");
  }
  if (truncation < 1) {
    throw ConfigError("truncation level must be at least 1");
  }
  for (int j = 0; j < J; ++j) {
    if (known_priors[j].dim() != dim) {
      throw ConfigError("known-class prior " + std::to_string(j + 1) +
                        " has dimension " +
                        std::to_string(known_priors[j].dim()) + ", expected " +
                        std::to_string(dim));
    }
  }
  if (novelty_prior.dim() != dim) {
    throw ConfigError("novelty prior has dimension " +
                      std::to_string(novelty_prior.dim()) + ", expected " +
                      std::to_string(dim));
  }
}

int Dataset::num_classes() const {
  std::set<int> seen(train_labels.begin(), train_labels.end());
  if (seen.empty()) return 0;
  const int J = *seen.rbegin();
  if (*seen.begin() < 1 || static_cast<int>(seen.size()) != J) {
    throw DataError("training labels must cover 1..J contiguously");
  }
  return J;
}

std::vector<int> Dataset::class_rows(int j) const {
  std::vector<int> rows;
  for (int i = 0; i < static_cast<int>(train_labels.size()); ++i) {
    if (train_labels[i] == j) rows.push_back(i);
  }
  return rows;
}

void Dataset::validate() const {
  if (train_x.rows() != static_cast<Eigen::Index>(train_labels.size())) {
    throw DataError("training label count " +
                    std::to_string(train_labels.size()) +
                    " does not match training row count " +
                    std::to_string(train_x.rows()));
  }
  if (train_x.rows() == 0) throw DataError("training set is empty");
  if (train_x.cols() == 0) throw DataError("training set has no features");
  if (test_x.rows() == 0) throw DataError("test set is empty");
  if (test_x.cols() != train_x.cols()) {
    throw DataError("test dimension " + std::to_string(test_x.cols()) +
                    " does not match training dimension " +
                    std::to_string(train_x.cols()));
  }
  if (test_labels && test_x.rows() !=
                         static_cast<Eigen::Index>(test_labels->size())) {
    throw DataError("test label count does not match test row count");
  }
  if (!train_x.allFinite() || !test_x.allFinite()) {
    throw DataError("data matrices contain non-finite entries");
  }
  num_classes();  // throws if labels are not contiguous 1..J
}

}  // namespace brand
