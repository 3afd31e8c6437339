#include "brand/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>

#include "brand/error.hpp"

namespace brand {

namespace {

void check_sizes(const std::vector<int>& truth,
                 const std::vector<int>& predicted) {
  if (truth.empty()) throw ConfigError("label vectors are empty");
  if (truth.size() != predicted.size()) {
    throw ConfigError("label vectors differ in length: " +
                      std::to_string(truth.size()) + " vs " +
                      std::to_string(predicted.size()));
  }
}

double choose2(double n) { return 0.5 * n * (n - 1.0); }

double log_factorial(double n) { return std::lgamma(n + 1.0); }

struct Contingency {
  Eigen::MatrixXd counts;  // truth x predicted
  Eigen::VectorXd row_sums, col_sums;
  double n = 0.0;
};

Contingency contingency(const ConfusionMatrix& cm) {
  Contingency c;
  c.counts = cm.counts.cast<double>();
  c.row_sums = c.counts.rowwise().sum();
  c.col_sums = c.counts.colwise().sum();
  c.n = c.counts.sum();
  return c;
}

}  // namespace

ConfusionMatrix confusion_matrix(const std::vector<int>& truth,
                                 const std::vector<int>& predicted) {
  check_sizes(truth, predicted);
  std::map<int, int> truth_index, pred_index;
  for (int t : truth) truth_index.emplace(t, 0);
  for (int p : predicted) pred_index.emplace(p, 0);
  ConfusionMatrix cm;
  for (auto& [label, idx] : truth_index) {
    idx = static_cast<int>(cm.truth_labels.size());
    cm.truth_labels.push_back(label);
  }
  for (auto& [label, idx] : pred_index) {
    idx = static_cast<int>(cm.predicted_labels.size());
    cm.predicted_labels.push_back(label);
  }
  cm.counts = Eigen::MatrixXi::Zero(
      static_cast<int>(cm.truth_labels.size()),
      static_cast<int>(cm.predicted_labels.size()));
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ++cm.counts(truth_index[truth[i]], pred_index[predicted[i]]);
  }
  return cm;
}

double adjusted_rand_index(const std::vector<int>& truth,
                           const std::vector<int>& predicted) {
  const Contingency c = contingency(confusion_matrix(truth, predicted));
  double index = 0.0;
  for (Eigen::Index i = 0; i < c.counts.rows(); ++i) {
    for (Eigen::Index j = 0; j < c.counts.cols(); ++j) {
      index += choose2(c.counts(i, j));
    }
  }
  double sum_rows = 0.0, sum_cols = 0.0;
  for (Eigen::Index i = 0; i < c.row_sums.size(); ++i) {
    sum_rows += choose2(c.row_sums[i]);
  }
  for (Eigen::Index j = 0; j < c.col_sums.size(); ++j) {
    sum_cols += choose2(c.col_sums[j]);
  }
  const double total_pairs = choose2(c.n);
  const double expected =
      total_pairs > 0.0 ? sum_rows * sum_cols / total_pairs : 0.0;
  const double max_index = 0.5 * (sum_rows + sum_cols);
  const double denom = max_index - expected;
  if (std::abs(denom) < 1e-12) {
    return index >= max_index - 1e-12 ? 1.0 : 0.0;
  }
  return (index - expected) / denom;
}

double adjusted_mutual_info(const std::vector<int>& truth,
                            const std::vector<int>& predicted) {
  const ConfusionMatrix cm = confusion_matrix(truth, predicted);
  const Contingency c = contingency(cm);
  const double n = c.n;
  const Eigen::Index rows = c.counts.rows(), cols = c.counts.cols();

  // Two copies of the same trivial partition agree perfectly; a lump
  // against singletons must fall through to the generic formula (it
  // scores 0 there).
  const bool both_lump = rows == 1 && cols == 1;
  const bool both_split = rows == static_cast<Eigen::Index>(n) &&
                          cols == static_cast<Eigen::Index>(n);
  if (both_lump || both_split) return 1.0;

  double mi = 0.0, h_truth = 0.0, h_pred = 0.0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (c.row_sums[i] > 0.0) {
      h_truth -= c.row_sums[i] / n * std::log(c.row_sums[i] / n);
    }
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double nij = c.counts(i, j);
      if (nij > 0.0) {
        mi += nij / n * std::log(n * nij / (c.row_sums[i] * c.col_sums[j]));
      }
    }
  }
  for (Eigen::Index j = 0; j < cols; ++j) {
    if (c.col_sums[j] > 0.0) {
      h_pred -= c.col_sums[j] / n * std::log(c.col_sums[j] / n);
    }
  }

  // Expected MI under random partitions with these margins; the inner sum
  // runs over the feasible hypergeometric support.
  double emi = 0.0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double a = c.row_sums[i];
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double b = c.col_sums[j];
      const double lo = std::max(1.0, a + b - n);
      const double hi = std::min(a, b);
      for (double nij = lo; nij <= hi; nij += 1.0) {
        const double log_term = std::log(n * nij / (a * b));
        const double log_prob =
            log_factorial(a) + log_factorial(b) + log_factorial(n - a) +
            log_factorial(n - b) - log_factorial(n) - log_factorial(nij) -
            log_factorial(a - nij) - log_factorial(b - nij) -
            log_factorial(n - a - b + nij);
        emi += nij / n * log_term * std::exp(log_prob);
      }
    }
  }

  const double denom = std::max(h_truth, h_pred) - emi;
  if (std::abs(denom) < 1e-12) return 0.0;
  return (mi - emi) / denom;
}

double fowlkes_mallows(const std::vector<int>& truth,
                       const std::vector<int>& predicted,
                       std::string* warning) {
  const Contingency c = contingency(confusion_matrix(truth, predicted));
  double together_both = 0.0;
  for (Eigen::Index i = 0; i < c.counts.rows(); ++i) {
    for (Eigen::Index j = 0; j < c.counts.cols(); ++j) {
      together_both += choose2(c.counts(i, j));
    }
  }
  double together_truth = 0.0, together_pred = 0.0;
  for (Eigen::Index i = 0; i < c.row_sums.size(); ++i) {
    together_truth += choose2(c.row_sums[i]);
  }
  for (Eigen::Index j = 0; j < c.col_sums.size(); ++j) {
    together_pred += choose2(c.col_sums[j]);
  }
  if (together_truth <= 0.0 || together_pred <= 0.0) {
    if (warning) {
      *warning =
          "a partition has no co-clustered pairs; the pair-based index is "
          "defined as 0";
    }
    return 0.0;
  }
  return together_both / std::sqrt(together_truth * together_pred);
}

std::optional<double> novelty_f1(const std::vector<int>& truth,
                                 const std::vector<int>& predicted,
                                 const std::set<int>& novelty_ids,
                                 int num_known) {
  check_sizes(truth, predicted);
  double tp = 0.0, fp = 0.0, fn = 0.0;
  bool any_true_novelty = false;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool truth_novel = novelty_ids.count(truth[i]) > 0;
    const bool pred_novel = predicted[i] > num_known;
    any_true_novelty = any_true_novelty || truth_novel;
    if (truth_novel && pred_novel) ++tp;
    if (!truth_novel && pred_novel) ++fp;
    if (truth_novel && !pred_novel) ++fn;
  }
  if (!any_true_novelty) return std::nullopt;
  const double denom = 2.0 * tp + fp + fn;
  return denom > 0.0 ? 2.0 * tp / denom : 0.0;
}

std::optional<double> novelty_f1(const std::vector<int>& truth,
                                 const std::vector<int>& predicted,
                                 int num_known) {
  std::set<int> novelty_ids;
  for (int t : truth) {
    if (t > num_known) novelty_ids.insert(t);
  }
  return novelty_f1(truth, predicted, novelty_ids, num_known);
}

}  // namespace brand
