#include "brand/scenarios.hpp"

#include <cmath>

#include "brand/error.hpp"
#include "brand/rng.hpp"

namespace brand {

namespace {

constexpr std::uint64_t kScenarioStream = 0x7363656eULL;

Variant resolve_variant(Study study, Variant variant) {
  switch (study) {
    case Study::kSS1:
      if (variant != Variant::kDefault) {
        throw ConfigError("study ss1 has no variants");
      }
      return Variant::kDefault;
    case Study::kSS2:
      if (variant == Variant::kDefault) return Variant::kSimple;
      if (variant == Variant::kSimple || variant == Variant::kComplex) {
        return variant;
      }
      throw ConfigError("study ss2 accepts variants simple or complex");
    case Study::kSS3:
      if (variant == Variant::kDefault) return Variant::kLowOverlap;
      if (variant == Variant::kLowOverlap ||
          variant == Variant::kHighOverlap) {
        return variant;
      }
      throw ConfigError("study ss3 accepts variants low or high");
  }
  throw ConfigError("unknown study");
}

int scaled(double scale, int n) {
  return static_cast<int>(std::ceil(scale * n));
}

Eigen::MatrixXd draw_component(const ComponentSpec& spec, int n, int dim,
                               std::mt19937_64& eng) {
  const Eigen::MatrixXd cov = component_covariance(spec, dim);
  const Eigen::MatrixXd chol = cov.llt().matrixL();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
  mean.head(2) = spec.mean2d;
  std::normal_distribution<double> std_normal(0.0, 1.0);
  Eigen::MatrixXd x(n, dim);
  Eigen::VectorXd z(dim);
  for (int i = 0; i < n; ++i) {
    for (int d = 0; d < dim; ++d) z[d] = std_normal(eng);
    x.row(i) = (mean + chol * z).transpose();
  }
  return x;
}

}  // namespace

Study parse_study(const std::string& name) {
  if (name == "ss1") return Study::kSS1;
  if (name == "ss2") return Study::kSS2;
  if (name == "ss3") return Study::kSS3;
  throw ConfigError("unknown study '" + name + "' (expected ss1, ss2, ss3)");
}

Variant parse_variant(const std::string& name) {
  if (name.empty() || name == "default") return Variant::kDefault;
  if (name == "simple") return Variant::kSimple;
  if (name == "complex") return Variant::kComplex;
  if (name == "low") return Variant::kLowOverlap;
  if (name == "high") return Variant::kHighOverlap;
  throw ConfigError("unknown variant '" + name +
                    "' (expected default, simple, complex, low, high)");
}

std::string study_name(Study study) {
  switch (study) {
    case Study::kSS1:
      return "ss1";
    case Study::kSS2:
      return "ss2";
    case Study::kSS3:
      return "ss3";
  }
  return "?";
}

std::string variant_name(Variant variant) {
  switch (variant) {
    case Variant::kDefault:
      return "default";
    case Variant::kSimple:
      return "simple";
    case Variant::kComplex:
      return "complex";
    case Variant::kLowOverlap:
      return "low";
    case Variant::kHighOverlap:
      return "high";
  }
  return "?";
}

std::vector<ComponentSpec> scenario_components(Study study, Variant variant) {
  variant = resolve_variant(study, variant);
  std::vector<ComponentSpec> c;
  switch (study) {
    case Study::kSS1:
      c = {
          {{-5.0, -5.0}, 1.0, 0.9, 300, 200, false},
          {{-4.0, -4.0}, 2.0, 0.0, 300, 200, false},
          {{4.0, 4.0}, 2.0, 0.0, 300, 250, false},
          {{0.0, 0.0}, 1.0, -0.75, 0, 90, true},
          {{5.0, -10.0}, 1.0, 0.9, 0, 100, true},
          {{5.0, -10.0}, 1.0, 0.9, 0, 100, true},
          {{-10.0, -10.0}, 0.1, 0.0, 0, 60, true},
      };
      break;
    case Study::kSS2: {
      const bool complex_noise = variant == Variant::kComplex;
      const double var = complex_noise ? 0.75 : 0.2;
      const double var_center = complex_noise ? 0.375 : 0.2;
      c = {
          {{2.0, 2.0}, var, 0.0, 500, 200, false},
          {{-2.0, -2.0}, var, 0.0, 500, 200, false},
          {{2.0, -2.0}, var, 0.0, 0, 200, true},
          {{-2.0, 2.0}, var, 0.0, 0, 200, true},
          {{0.0, 0.0}, var_center, 0.0, 0, 200, true},
      };
      break;
    }
    case Study::kSS3: {
      const double boost = variant == Variant::kHighOverlap ? 6.0 : 1.0;
      c = {
          {{-5.0, 5.0}, 0.5 * boost, 0.0, 50, 1950, false},
          {{5.0, 5.0}, 0.5 * boost, 0.0, 50, 1950, false},
          {{5.0, -5.0}, 0.5 * boost, 0.0, 50, 1950, false},
          {{0.0, 0.0}, 0.5 * boost, 0.8, 0, 2000, true},
          {{0.0, 0.0}, 0.5 * boost, -0.8, 0, 2000, true},
          {{-5.0, 5.0}, 1.5 * boost, 0.0, 0, 100, true},
      };
      break;
    }
  }
  return c;
}

Eigen::MatrixXd component_covariance(const ComponentSpec& spec, int dim) {
  if (dim < 2) throw ConfigError("scenario dimension must be at least 2");
  Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(dim, dim);
  cov(0, 0) = spec.var;
  cov(1, 1) = spec.var;
  cov(0, 1) = cov(1, 0) = spec.corr * spec.var;
  return cov;
}

Dataset generate_scenario(const ScenarioConfig& config) {
  if (!(config.scale > 0.0)) {
    throw ConfigError("scenario scale must be positive");
  }
  const auto components = scenario_components(config.study, config.variant);

  int n_train = 0, n_test = 0, num_known = 0;
  for (const auto& spec : components) {
    if (!spec.novelty) {
      n_train += scaled(config.scale, spec.n_train);
      ++num_known;
    }
    n_test += scaled(config.scale, spec.n_test);
  }

  Dataset data;
  data.train_x.resize(n_train, config.dim);
  data.train_labels.reserve(n_train);
  data.test_x.resize(n_test, config.dim);
  std::vector<int> test_labels;
  test_labels.reserve(n_test);

  int train_row = 0, test_row = 0;
  int known_id = 0, novelty_id = num_known;
  for (std::size_t k = 0; k < components.size(); ++k) {
    const ComponentSpec& spec = components[k];
    const int label = spec.novelty ? ++novelty_id : ++known_id;
    if (!spec.novelty) {
      const int n = scaled(config.scale, spec.n_train);
      std::mt19937_64 eng = make_engine(
          config.seed, {kScenarioStream, static_cast<std::uint64_t>(k), 0});
      data.train_x.middleRows(train_row, n) =
          draw_component(spec, n, config.dim, eng);
      data.train_labels.insert(data.train_labels.end(), n, label);
      train_row += n;
    }
    const int n = scaled(config.scale, spec.n_test);
    std::mt19937_64 eng = make_engine(
        config.seed, {kScenarioStream, static_cast<std::uint64_t>(k), 1});
    data.test_x.middleRows(test_row, n) =
        draw_component(spec, n, config.dim, eng);
    test_labels.insert(test_labels.end(), n, label);
    test_row += n;
  }
  data.test_labels = std::move(test_labels);
  data.validate();
  return data;
}

}  // namespace brand
