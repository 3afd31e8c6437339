#include "brand/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "brand/error.hpp"

namespace brand {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    // Trim surrounding whitespace.
    const auto first = field.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
      fields.emplace_back();
    } else {
      const auto last = field.find_last_not_of(" \t\r");
      fields.push_back(field.substr(first, last - first + 1));
    }
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

}  // namespace

LabeledMatrix load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::string line;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> header;
  bool first = true;
  std::size_t width = 0;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    const std::vector<std::string> fields = split_csv_line(line);
    if (first) {
      first = false;
      double ignored;
      const bool numeric = std::all_of(
          fields.begin(), fields.end(),
          [&](const std::string& f) { return parse_double(f, ignored); });
      if (!numeric) {
        header = fields;
        width = fields.size();
        continue;
      }
      width = fields.size();
    }
    if (fields.size() != width) {
      throw DataError("'" + path + "' line " + std::to_string(line_no) +
                      ": expected " + std::to_string(width) +
                      " fields, got " + std::to_string(fields.size()));
    }
    std::vector<double> row(width);
    for (std::size_t j = 0; j < width; ++j) {
      if (!parse_double(fields[j], row[j])) {
        throw DataError("'" + path + "' line " + std::to_string(line_no) +
                        ": unparseable value '" + fields[j] + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError("'" + path + "' contains no data rows");

  // A file with only a label column is fine; metric evaluation needs
  // nothing else.
  const bool has_label_col = !header.empty() && header.back() == "label";
  const std::size_t feature_cols = has_label_col ? width - 1 : width;

  LabeledMatrix out;
  out.x.resize(static_cast<Eigen::Index>(rows.size()),
               static_cast<Eigen::Index>(feature_cols));
  if (has_label_col) out.labels.emplace();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < feature_cols; ++j) out.x(i, j) = rows[i][j];
    if (has_label_col) {
      const double lab = rows[i].back();
      if (lab != std::floor(lab)) {
        throw DataError("'" + path + "' has non-integer label " +
                        std::to_string(lab));
      }
      out.labels->push_back(static_cast<int>(lab));
    }
  }
  return out;
}

void save_csv(const std::string& path, const Eigen::MatrixXd& x,
              const std::optional<std::vector<int>>& labels) {
  if (labels && static_cast<Eigen::Index>(labels->size()) != x.rows()) {
    throw DataError("label count does not match row count");
  }
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    out << (j ? "," : "") << "f" << (j + 1);
  }
  if (labels) out << ",label";
  out << "\n";
  char buf[64];
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", x(i, j));
      out << (j ? "," : "") << buf;
    }
    if (labels) out << "," << (*labels)[i];
    out << "\n";
  }
  if (!out) throw DataError("write to '" + path + "' failed");
}

StatlogData load_statlog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  constexpr int kFeatures = 36;
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::stringstream ss(line);
    std::vector<double> values;
    double v;
    while (ss >> v) values.push_back(v);
    if (static_cast<int>(values.size()) != kFeatures + 1) {
      throw DataError("'" + path + "' line " + std::to_string(line_no) +
                      ": " + std::to_string(values.size()) +
                      " values, expected " + std::to_string(kFeatures + 1));
    }
    labels.push_back(static_cast<int>(values.back()));
    values.pop_back();
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw DataError("'" + path + "' contains no rows");
  StatlogData out;
  out.x.resize(static_cast<Eigen::Index>(rows.size()), kFeatures);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int j = 0; j < kFeatures; ++j) out.x(i, j) = rows[i][j];
  }
  out.labels = std::move(labels);
  return out;
}

Dataset rescale(Dataset data, double factor) {
  if (factor == 0.0) throw ConfigError("rescale factor must be nonzero");
  data.train_x /= factor;
  data.test_x /= factor;
  return data;
}

StatlogSplit prepare_statlog(const StatlogData& train, const StatlogData& test,
                             const std::vector<int>& holdout_classes,
                             double rescale) {
  if (rescale == 0.0) throw ConfigError("rescale factor must be nonzero");
  const std::set<int> holdout(holdout_classes.begin(), holdout_classes.end());

  // Kept classes keep ascending order and become 1..J; held-out classes
  // follow as J+1.. in ascending order of their original ids.
  std::set<int> all_classes(train.labels.begin(), train.labels.end());
  all_classes.insert(test.labels.begin(), test.labels.end());
  StatlogSplit out;
  int next_id = 0;
  for (int c : all_classes) {
    if (!holdout.count(c)) out.label_map[c] = ++next_id;
  }
  for (int c : all_classes) {
    if (holdout.count(c)) out.label_map[c] = ++next_id;
  }

  std::vector<int> keep_rows;
  for (std::size_t i = 0; i < train.labels.size(); ++i) {
    if (!holdout.count(train.labels[i])) {
      keep_rows.push_back(static_cast<int>(i));
    }
  }
  if (keep_rows.empty()) throw DataError("all training classes held out");

  out.train_x.resize(static_cast<Eigen::Index>(keep_rows.size()),
                     train.x.cols());
  for (std::size_t i = 0; i < keep_rows.size(); ++i) {
    out.train_x.row(i) = train.x.row(keep_rows[i]);
    out.train_labels.push_back(out.label_map.at(train.labels[keep_rows[i]]));
  }
  out.test_x = test.x;
  for (int lab : test.labels) out.test_labels.push_back(out.label_map.at(lab));

  out.train_x /= rescale;
  out.test_x /= rescale;
  return out;
}

}  // namespace brand
