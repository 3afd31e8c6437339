#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "brand/types.hpp"

namespace brand {

struct LabeledMatrix {
  Eigen::MatrixXd x;
  std::optional<std::vector<int>> labels;
};

// Comma-separated numeric table. A first line with any non-numeric token is
// treated as a header; a header column named "label" (last position) is
// split off into integer labels. Throws DataError on ragged rows or
// unparseable fields.
LabeledMatrix load_csv(const std::string& path);

// Writes a header (f1..fp, plus "label" when labels are present) and one
// row per observation with round-trip (%.17g) precision.
void save_csv(const std::string& path, const Eigen::MatrixXd& x,
              const std::optional<std::vector<int>>& labels = std::nullopt);

struct StatlogData {
  Eigen::MatrixXd x;        // n x 36 spectral values
  std::vector<int> labels;  // original class ids
};

// Whitespace-separated rows of 36 integer features followed by a class id.
StatlogData load_statlog(const std::string& path);

// Divides every feature value (train and test alike) by factor. Labels are
// untouched. Throws ConfigError when factor is zero.
Dataset rescale(Dataset data, double factor);

struct StatlogSplit {
  Eigen::MatrixXd train_x;
  std::vector<int> train_labels;  // remapped to contiguous 1..J
  Eigen::MatrixXd test_x;
  std::vector<int> test_labels;   // known classes 1..J, held-out J+1..
  std::map<int, int> label_map;   // original class id -> remapped id
};

// Builds the novelty-detection split: the listed classes are removed from
// the training set (they stay in the test set as ground-truth novelties),
// remaining classes are renumbered contiguously from 1, and every value in
// both sets is divided by `rescale`.
StatlogSplit prepare_statlog(const StatlogData& train, const StatlogData& test,
                             const std::vector<int>& holdout_classes,
                             double rescale = 4.5);

}  // namespace brand
