#pragma once

#include <Eigen/Dense>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace brand {

struct ConfusionMatrix {
  std::vector<int> truth_labels;      // sorted distinct truth ids
  std::vector<int> predicted_labels;  // sorted distinct predicted ids
  Eigen::MatrixXi counts;             // truth (rows) by predicted (cols)
};

ConfusionMatrix confusion_matrix(const std::vector<int>& truth,
                                 const std::vector<int>& predicted);

// Pair-counting Rand index corrected for chance. Returns 1 when the
// partitions agree perfectly (including the degenerate all-trivial case).
double adjusted_rand_index(const std::vector<int>& truth,
                           const std::vector<int>& predicted);

// Mutual information adjusted for chance with max normalization; the
// expected MI uses the exact hypergeometric model over contingency tables.
// Two trivial partitions score 1; a vanishing denominator scores 0.
double adjusted_mutual_info(const std::vector<int>& truth,
                            const std::vector<int>& predicted);

// Geometric mean of pairwise precision and recall. When either partition
// has no co-clustered pairs at all the index is defined as 0 and, if
// `warning` is non-null, an explanatory message is stored there.
double fowlkes_mallows(const std::vector<int>& truth,
                       const std::vector<int>& predicted,
                       std::string* warning = nullptr);

// F1 of the binary novelty decision. A truth label is novel when it is in
// novelty_ids; a prediction is novel when its cluster id exceeds num_known.
// Empty when the truth contains no novelties, so the score is undefined.
std::optional<double> novelty_f1(const std::vector<int>& truth,
                                 const std::vector<int>& predicted,
                                 const std::set<int>& novelty_ids,
                                 int num_known);

// Convenience form treating every truth label above num_known as novel.
std::optional<double> novelty_f1(const std::vector<int>& truth,
                                 const std::vector<int>& predicted,
                                 int num_known);

}  // namespace brand
