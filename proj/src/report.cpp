#include "brand/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "brand/error.hpp"
#include "brand/version.hpp"

namespace brand {

namespace {

std::vector<double> to_vec(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

void write_or_throw(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << content;
  if (!out) throw DataError("write to '" + path + "' failed");
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

nlohmann::json build_report(const ReportInputs& in) {
  const VariationalState& state = in.fit.best.state;
  const int num_known = state.num_known();
  nlohmann::json report;
  report["version"] = kVersion;

  report["model"] = {
      {"num_known", num_known},
      {"truncation", state.truncation()},
      {"gamma", in.hyper.gamma},
      {"alpha", to_vec(in.hyper.alpha)},
  };
  report["inference"] = {
      {"n_starts", in.cavi.n_starts},
      {"tol", in.cavi.tol},
      {"rel_tol", in.cavi.rel_tol},
      {"max_iter", in.cavi.max_iter},
      {"seed", in.cavi.seed},
      {"threads", in.cavi.threads},
      {"init",
       in.cavi.init == InitMethod::kKMeansLhs ? "kmeans" : "random"},
  };
  report["data"] = {{"num_test", in.num_test}, {"dim", in.dim}};
  // No timings in here: the same seed must reproduce the file byte for byte.
  report["fit"] = {
      {"elbo", in.fit.best.elbo},
      {"iterations", in.fit.best.iterations},
      {"converged", in.fit.best.converged},
      {"run_index", in.fit.best.run_index},
      {"final_elbos", in.fit.final_elbos},
  };

  const Eigen::VectorXd expected_pi = state.eta / state.eta.sum();
  report["weights"] = {
      {"eta", to_vec(state.eta)},
      {"expected_pi", to_vec(expected_pi)},
      {"stick_a", to_vec(state.stick_a)},
      {"stick_b", to_vec(state.stick_b)},
  };

  const std::vector<int> assignments = map_assignments(state.resp);
  std::vector<int> map_sizes(num_known + state.truncation(), 0);
  for (int lab : assignments) ++map_sizes[lab - 1];
  // Tiny novelty clusters read as stray outliers rather than new classes;
  // the flag is informational only and never feeds back into inference.
  const int outlier_cutoff =
      std::max(3, static_cast<int>(0.001 * in.num_test));

  const Eigen::VectorXd col_mass = state.resp.colwise().sum();
  nlohmann::json components = nlohmann::json::array();
  for (int j = 0; j < num_known; ++j) {
    components.push_back({{"label", j + 1},
                          {"type", "known"},
                          {"mass", col_mass[j]},
                          {"map_size", map_sizes[j]},
                          {"mean", to_vec(state.obs_niw[j].mean)}});
  }
  for (int t = 0; t < state.truncation(); ++t) {
    const int size = map_sizes[num_known + t];
    components.push_back({{"label", num_known + t + 1},
                          {"type", "novelty"},
                          {"mass", col_mass[num_known + t]},
                          {"map_size", size},
                          {"outlier", size > 0 && size < outlier_cutoff},
                          {"mean", to_vec(state.nov_niw[t].mean)}});
  }
  report["components"] = std::move(components);
  report["assignments"] = assignments;
  report["novelty_probability"] = to_vec(novelty_mass(state.resp, num_known));

  std::vector<std::string> warnings = in.warnings;
  if (in.truth) {
    nlohmann::json metrics;
    metrics["ari"] = adjusted_rand_index(*in.truth, assignments);
    metrics["ami"] = adjusted_mutual_info(*in.truth, assignments);
    std::string fmi_warning;
    metrics["fmi"] = fowlkes_mallows(*in.truth, assignments, &fmi_warning);
    if (!fmi_warning.empty()) warnings.push_back(fmi_warning);
    if (const auto f1 = novelty_f1(*in.truth, assignments, num_known)) {
      metrics["novelty_f1"] = *f1;
    }
    report["metrics"] = std::move(metrics);
    report["confusion"] =
        confusion_to_json(confusion_matrix(*in.truth, assignments));
  }

  report["warnings"] = warnings;
  return report;
}

nlohmann::json confusion_to_json(const ConfusionMatrix& cm) {
  nlohmann::json counts = nlohmann::json::array();
  for (Eigen::Index i = 0; i < cm.counts.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < cm.counts.cols(); ++j) {
      row.push_back(cm.counts(i, j));
    }
    counts.push_back(std::move(row));
  }
  return {{"truth_labels", cm.truth_labels},
          {"predicted_labels", cm.predicted_labels},
          {"counts", std::move(counts)}};
}

void write_report_files(const std::string& dir, const nlohmann::json& report,
                        const MultiStartResult& fit) {
  write_or_throw(dir + "/report.json", report.dump(2) + "\n");

  std::string trace = "run,iteration,elbo\n";
  for (std::size_t r = 0; r < fit.traces.size(); ++r) {
    for (std::size_t i = 0; i < fit.traces[r].size(); ++i) {
      trace += std::to_string(r) + "," + std::to_string(i + 1) + "," +
               fmt(fit.traces[r][i]) + "\n";
    }
  }
  write_or_throw(dir + "/elbo_trace.csv", trace);

  const auto& assignments = report.at("assignments");
  const auto& nov_prob = report.at("novelty_probability");
  std::string assign = "row,assignment,novelty_probability\n";
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    assign += std::to_string(i) + "," +
              std::to_string(assignments[i].get<int>()) + "," +
              fmt(nov_prob[i].get<double>()) + "\n";
  }
  write_or_throw(dir + "/assignments.csv", assign);

  if (report.contains("confusion")) {
    const auto& cm = report.at("confusion");
    std::string csv = "truth";
    for (const auto& p : cm.at("predicted_labels")) {
      csv += ",pred_" + std::to_string(p.get<int>());
    }
    csv += "\n";
    const auto& counts = cm.at("counts");
    const auto& truth_labels = cm.at("truth_labels");
    for (std::size_t i = 0; i < counts.size(); ++i) {
      csv += std::to_string(truth_labels[i].get<int>());
      for (const auto& v : counts[i]) {
        csv += "," + std::to_string(v.get<int>());
      }
      csv += "\n";
    }
    write_or_throw(dir + "/confusion.csv", csv);
  }
}

}  // namespace brand
