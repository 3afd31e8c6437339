#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "brand/cavi.hpp"
#include "brand/metrics.hpp"
#include "brand/types.hpp"

namespace brand {

// Everything the fit command knows once inference finishes.
struct ReportInputs {
  const MultiStartResult& fit;
  const Hyperparams& hyper;
  const CaviConfig& cavi;
  int num_test = 0;
  int dim = 0;
  std::optional<std::vector<int>> truth;  // test labels when available
  std::vector<std::string> warnings;
};

// Machine-readable summary: configuration echo, winning run, expected
// weights, per-row assignments and novelty probabilities, and (when truth
// labels exist) external clustering metrics plus the confusion matrix.
nlohmann::json build_report(const ReportInputs& in);

// {truth_labels, predicted_labels, counts} with counts as a row-major array.
nlohmann::json confusion_to_json(const ConfusionMatrix& cm);

// Writes report.json, elbo_trace.csv (every start), assignments.csv and,
// when the report carries a confusion matrix, confusion.csv into dir.
void write_report_files(const std::string& dir, const nlohmann::json& report,
                        const MultiStartResult& fit);

}  // namespace brand
