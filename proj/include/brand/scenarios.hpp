#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "brand/types.hpp"

namespace brand {

// Three synthetic studies. SS1 has one fixed variant; SS2 comes in simple
// and complex noise levels; SS3 comes in low- and high-overlap versions.
enum class Study { kSS1, kSS2, kSS3 };
enum class Variant { kDefault, kSimple, kComplex, kLowOverlap, kHighOverlap };

Study parse_study(const std::string& name);
Variant parse_variant(const std::string& name);
std::string study_name(Study study);
std::string variant_name(Variant variant);

struct ComponentSpec {
  Eigen::Vector2d mean2d;  // leading two coordinates of the mean
  double var = 1.0;        // shared variance of the leading block
  double corr = 0.0;       // correlation of the leading block
  int n_train = 0;         // zero for novelty components
  int n_test = 0;
  bool novelty = false;
};

// Component table of a study/variant. Known components come first and get
// training labels 1..J in listed order; novelty components follow and get
// ground-truth test labels J+1, J+2, ...
std::vector<ComponentSpec> scenario_components(Study study, Variant variant);

// Full covariance in `dim` dimensions: the 2x2 leading block
// [[var, corr*var], [corr*var, var]] padded with unit variances.
Eigen::MatrixXd component_covariance(const ComponentSpec& spec, int dim);

struct ScenarioConfig {
  Study study = Study::kSS1;
  Variant variant = Variant::kDefault;
  int dim = 2;         // extra coordinates beyond the first two are iid N(0,1)
  double scale = 1.0;  // sample sizes become ceil(scale * table size)
  std::uint64_t seed = 0;
};

// Deterministic draw of the study: train rows grouped by known component,
// test rows grouped by component in table order, test labels filled with
// ground truth. Each (component, split) pair has its own random stream.
Dataset generate_scenario(const ScenarioConfig& config);

}  // namespace brand
