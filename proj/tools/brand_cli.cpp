// Command-line front end: simulate | fit | evaluate | compare-mcmc.
#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "brand/cavi.hpp"
#include "brand/error.hpp"
#include "brand/gibbs.hpp"
#include "brand/io.hpp"
#include "brand/metrics.hpp"
#include "brand/parallel.hpp"
#include "brand/pipeline.hpp"
#include "brand/report.hpp"
#include "brand/scenarios.hpp"
#include "brand/version.hpp"

namespace {

using nlohmann::json;

struct FitOptions {
  std::string train_path, test_path, out_dir;
  brand::PriorConfig prior;
  brand::CaviConfig cavi;
  std::string init_name = "kmeans";
};

// Expands every "--config file" into the flags the file defines, mapping
// "[section] key = v" onto the dotted aliases ("--section.key=v"). The
// parser itself never sees --config: its own config support only applies
// sections to subcommands, not to option aliases. File-derived flags go
// last, and every option keeps its first value, so explicit flags win.
std::vector<std::string> expand_config_args(int argc, char** argv) {
  std::vector<std::string> out, from_file;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    std::string path;
    if (arg == "--config" && i + 1 < argc) {
      path = argv[++i];
    } else if (arg.rfind("--config=", 0) == 0) {
      path = arg.substr(9);
    } else {
      out.push_back(arg);
      continue;
    }
    std::ifstream in(path);
    if (!in) {
      throw brand::ConfigError("cannot open config file '" + path + "'");
    }
    for (const CLI::ConfigItem& item : CLI::ConfigINI().from_config(in)) {
      if (item.name == "--" || item.name == "++") continue;  // section markers
      std::string name = item.name;
      for (auto it = item.parents.rbegin(); it != item.parents.rend(); ++it) {
        name = *it + "." + name;
      }
      if (item.inputs.size() == 1) {
        from_file.push_back("--" + name + "=" + item.inputs.front());
      } else {
        from_file.push_back("--" + name);
        from_file.insert(from_file.end(), item.inputs.begin(),
                         item.inputs.end());
      }
    }
  }
  out.insert(out.end(), from_file.begin(), from_file.end());
  return out;
}

// Documents --config in help output; the value is consumed before parsing.
void add_config_stub(CLI::App* cmd) {
  static std::string ignored;
  cmd->add_option("--config", ignored,
                  "INI config file; sections [data], [cavi] and "
                  "[hyperparams] map onto the dotted flag aliases");
}

// Shared flag set for every command that runs the two-stage fit. Dotted
// aliases let a --config INI file group keys under [hyperparams], [cavi]
// and [data]; command-line flags override file values.
void add_fit_options(CLI::App* cmd, FitOptions& opt) {
  cmd->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeFirst);
  add_config_stub(cmd);
  cmd->add_option("--train,--data.train", opt.train_path,
                  "training CSV (features plus label column)")
      ->required();
  cmd->add_option("--test,--data.test", opt.test_path,
                  "test CSV (label column optional, used for metrics)")
      ->required();
  cmd->add_option("--out,--out-dir,--data.out", opt.out_dir,
                  "output directory")
      ->required();

  cmd->add_option("--alpha,--hyperparams.alpha", opt.prior.alpha,
                  "shared Dirichlet weight for the J+1 mixture slots")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--gamma,--hyperparams.gamma", opt.prior.gamma,
                  "stick-breaking concentration")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--truncation,--hyperparams.truncation",
                  opt.prior.truncation, "novelty truncation level T")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--novelty-lambda,--hyperparams.novelty-lambda",
                  opt.prior.novelty_lambda,
                  "precision scale of the novelty base measure")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--lambda-obs,--hyperparams.lambda-obs",
                  opt.prior.elicit.lambda_obs,
                  "precision scale of the elicited known-class priors")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--dof-offset,--hyperparams.dof-offset",
                  opt.prior.elicit.dof_offset,
                  "known-class prior dof = p + 1 + offset")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--h-frac,--hyperparams.h-frac",
                  opt.prior.elicit.mrcd.h_frac,
                  "robust-subset fraction for the per-class scatter")
      ->capture_default_str();
  cmd->add_option("--rho,--hyperparams.rho", opt.prior.elicit.mrcd.rho,
                  "shrinkage weight toward the identity target")
      ->capture_default_str();

  cmd->add_option("--tol,--cavi.tol", opt.cavi.tol,
                  "absolute ELBO-change stopping threshold")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--rel-tol,--cavi.rel-tol", opt.cavi.rel_tol,
                  "relative ELBO-change guard")
      ->capture_default_str();
  cmd->add_option("--max-iter,--cavi.max-iter", opt.cavi.max_iter,
                  "iteration cap per start")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--n-starts,--cavi.n-starts", opt.cavi.n_starts,
                  "number of independent initializations")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--seed,--cavi.seed", opt.cavi.seed, "master seed")
      ->capture_default_str();
  cmd->add_option("--threads,--cavi.threads", opt.cavi.threads,
                  "worker threads (0 = all hardware threads)")
      ->capture_default_str();
  cmd->add_option("--init,--cavi.init", opt.init_name,
                  "initialization: kmeans or random")
      ->check(CLI::IsMember({"kmeans", "random"}))
      ->capture_default_str();
}

void finalize_fit_options(FitOptions& opt) {
  if (opt.cavi.threads <= 0) opt.cavi.threads = brand::default_thread_count();
  opt.cavi.init = opt.init_name == "random" ? brand::InitMethod::kRandom
                                            : brand::InitMethod::kKMeansLhs;
  opt.prior.elicit.mrcd.seed = opt.cavi.seed;
  opt.prior.elicit.mrcd.threads = opt.cavi.threads;
}

brand::Dataset load_dataset(const FitOptions& opt) {
  const brand::LabeledMatrix train = brand::load_csv(opt.train_path);
  if (!train.labels) {
    throw brand::DataError("'" + opt.train_path +
                           "' needs a label column for training");
  }
  const brand::LabeledMatrix test = brand::load_csv(opt.test_path);
  brand::Dataset data;
  data.train_x = train.x;
  data.train_labels = *train.labels;
  data.test_x = test.x;
  data.test_labels = test.labels;
  data.validate();
  return data;
}

struct FitOutcome {
  brand::Dataset data;
  brand::BuiltPriors priors;
  brand::MultiStartResult fit;
};

FitOutcome run_fit(const FitOptions& opt) {
  FitOutcome out;
  out.data = load_dataset(opt);
  out.priors =
      brand::build_hyperparams(out.data.train_x, out.data.train_labels,
                               opt.prior);
  out.fit = brand::multi_start_cavi(out.data.test_x, out.priors.hyper,
                                    opt.cavi);
  return out;
}

json report_from_outcome(const FitOptions& opt, const FitOutcome& outcome) {
  brand::ReportInputs inputs{
      outcome.fit,
      outcome.priors.hyper,
      opt.cavi,
      outcome.data.num_test(),
      outcome.data.dim(),
      outcome.data.test_labels,
      outcome.priors.elicitation.warnings,
  };
  return brand::build_report(inputs);
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw brand::DataError("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

int cmd_simulate(const brand::ScenarioConfig& cfg,
                 const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const brand::Dataset data = brand::generate_scenario(cfg);
  brand::save_csv(out_dir + "/train.csv", data.train_x, data.train_labels);
  brand::save_csv(out_dir + "/test.csv", data.test_x, data.test_labels);

  const auto components =
      brand::scenario_components(cfg.study, cfg.variant);
  json manifest = {
      {"version", brand::kVersion},
      {"study", brand::study_name(cfg.study)},
      {"variant", brand::variant_name(cfg.variant)},
      {"dim", cfg.dim},
      {"scale", cfg.scale},
      {"seed", cfg.seed},
      {"num_train", data.num_train()},
      {"num_test", data.num_test()},
      {"num_known", data.num_classes()},
      {"num_components", components.size()},
  };
  write_json(out_dir + "/manifest.json", manifest);
  std::cout << "wrote " << data.num_train() << " train rows and "
            << data.num_test() << " test rows to " << out_dir << "\n";
  return 0;
}

int cmd_fit(const FitOptions& opt) {
  std::filesystem::create_directories(opt.out_dir);
  const FitOutcome outcome = run_fit(opt);
  const json report = report_from_outcome(opt, outcome);
  brand::write_report_files(opt.out_dir, report, outcome.fit);
  for (const auto& w : outcome.priors.elicitation.warnings) {
    std::cerr << "warning: " << w << "\n";
  }
  std::cout << "elbo " << outcome.fit.best.elbo << " after "
            << outcome.fit.best.iterations << " iterations (run "
            << outcome.fit.best.run_index << ", "
            << (outcome.fit.best.converged ? "converged" : "iteration cap")
            << "); outputs in " << opt.out_dir << "\n";
  return 0;
}

// A label source is either a fit's report.json (assignments array) or a CSV
// whose label column carries the partition; a bare single-column file also
// counts as labels.
struct LabelFile {
  std::vector<int> labels;
  std::optional<int> num_known;  // only report.json inputs know this
};

LabelFile read_labels(const std::string& path) {
  LabelFile out;
  if (path.size() > 5 && path.compare(path.size() - 5, 5, ".json") == 0) {
    std::ifstream in(path);
    if (!in) throw brand::DataError("cannot open '" + path + "'");
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw brand::DataError("'" + path + "': " + e.what());
    }
    out.labels = j.at("assignments").get<std::vector<int>>();
    if (j.contains("model")) {
      out.num_known = j.at("model").at("num_known").get<int>();
    }
    return out;
  }
  const brand::LabeledMatrix m = brand::load_csv(path);
  if (m.labels) {
    out.labels = *m.labels;
  } else if (m.x.cols() == 1) {
    out.labels.reserve(static_cast<std::size_t>(m.x.rows()));
    for (Eigen::Index i = 0; i < m.x.rows(); ++i) {
      out.labels.push_back(static_cast<int>(std::lround(m.x(i, 0))));
    }
  } else {
    throw brand::DataError("'" + path + "' has no label column");
  }
  return out;
}

int cmd_evaluate(const std::string& truth_path, const std::string& pred_path,
                 int num_known, const std::string& out_path) {
  const LabelFile truth = read_labels(truth_path);
  const LabelFile pred = read_labels(pred_path);
  if (truth.labels.size() != pred.labels.size()) {
    throw brand::DataError(
        "'" + truth_path + "' has " + std::to_string(truth.labels.size()) +
        " labels but '" + pred_path + "' has " +
        std::to_string(pred.labels.size()));
  }
  if (num_known <= 0) num_known = pred.num_known.value_or(0);

  std::string fmi_warning;
  json metrics = {
      {"ari", brand::adjusted_rand_index(truth.labels, pred.labels)},
      {"ami", brand::adjusted_mutual_info(truth.labels, pred.labels)},
      {"fmi",
       brand::fowlkes_mallows(truth.labels, pred.labels, &fmi_warning)},
  };
  if (!fmi_warning.empty()) std::cerr << "warning: " << fmi_warning << "\n";
  if (num_known > 0) {
    if (const auto f1 =
            brand::novelty_f1(truth.labels, pred.labels, num_known)) {
      metrics["novelty_f1"] = *f1;
    }
  }
  metrics["confusion"] =
      brand::confusion_to_json(brand::confusion_matrix(truth.labels,
                                                       pred.labels));
  std::cout << metrics.dump(2) << "\n";
  if (!out_path.empty()) write_json(out_path, metrics);
  return 0;
}

int cmd_compare_mcmc(const FitOptions& opt, brand::GibbsConfig gibbs_cfg,
                     bool force) {
  std::filesystem::create_directories(opt.out_dir);
  FitOutcome outcome;
  outcome.data = load_dataset(opt);
  // The sampler is quadratic in sweeps times rows; refuse silly sizes.
  if (!force && outcome.data.num_test() > 2000) {
    throw brand::ConfigError(
        "test set has " + std::to_string(outcome.data.num_test()) +
        " rows; the sampler comparison is meant for at most 2000 "
        "(pass --force to run anyway)");
  }
  outcome.priors = brand::build_hyperparams(
      outcome.data.train_x, outcome.data.train_labels, opt.prior);
  outcome.fit = brand::multi_start_cavi(outcome.data.test_x,
                                        outcome.priors.hyper, opt.cavi);
  const json report = report_from_outcome(opt, outcome);
  brand::write_report_files(opt.out_dir, report, outcome.fit);

  if (gibbs_cfg.truncation <= 0) {
    gibbs_cfg.truncation = opt.prior.truncation + 5;
  }
  gibbs_cfg.seed = opt.cavi.seed;
  const brand::GibbsSummary gibbs = brand::run_gibbs(
      outcome.data.test_x, outcome.priors.hyper, gibbs_cfg);

  const std::vector<int> vb_labels =
      brand::map_assignments(outcome.fit.best.state.resp);
  json comparison = {
      {"version", brand::kVersion},
      {"vb",
       {{"elbo", outcome.fit.best.elbo},
        {"iterations", outcome.fit.best.iterations},
        {"labels", vb_labels},
        {"wall_seconds", outcome.fit.wall_seconds}}},
      {"gibbs",
       {{"truncation", gibbs_cfg.truncation},
        {"burn_in", gibbs_cfg.burn_in},
        {"samples", gibbs_cfg.samples},
        {"labels", gibbs.map_labels},
        {"wall_seconds", gibbs.wall_seconds},
        {"mean_counts",
         std::vector<double>(gibbs.mean_counts.data(),
                             gibbs.mean_counts.data() +
                                 gibbs.mean_counts.size())}}},
      {"agreement",
       {{"ari", brand::adjusted_rand_index(gibbs.map_labels, vb_labels)},
        {"ami", brand::adjusted_mutual_info(gibbs.map_labels, vb_labels)}}},
      {"speedup_vs_gibbs",
       gibbs.wall_seconds / std::max(outcome.fit.wall_seconds, 1e-12)},
  };
  if (outcome.data.test_labels) {
    const auto& truth = *outcome.data.test_labels;
    comparison["vb"]["ari_vs_truth"] =
        brand::adjusted_rand_index(truth, vb_labels);
    comparison["gibbs"]["ari_vs_truth"] =
        brand::adjusted_rand_index(truth, gibbs.map_labels);
  }
  write_json(opt.out_dir + "/comparison.json", comparison);
  std::cout << "vb " << outcome.fit.wall_seconds << "s, sampler "
            << gibbs.wall_seconds << "s; agreement ari "
            << comparison["agreement"]["ari"].get<double>()
            << "; outputs in " << opt.out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-stage Bayesian novelty detection for labeled training "
               "data and an unlabeled test set"};
  app.set_version_flag("--version", brand::kVersion);
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "generate a synthetic study");
  sim->option_defaults()->multi_option_policy(
      CLI::MultiOptionPolicy::TakeFirst);
  add_config_stub(sim);
  std::string study_name = "ss1", variant_name = "default", sim_out;
  brand::ScenarioConfig scen;
  sim->add_option("--study", study_name, "ss1, ss2 or ss3")->required();
  sim->add_option("--variant", variant_name,
                  "default, simple, complex, low or high");
  sim->add_option("--dim,--p", scen.dim, "data dimension (>= 2)")
      ->capture_default_str();
  sim->add_option("--scale,--q", scen.scale,
                  "multiplies every component sample size")
      ->capture_default_str();
  sim->add_option("--seed", scen.seed, "generator seed")
      ->capture_default_str();
  sim->add_option("--out,--out-dir", sim_out, "output directory")
      ->required();

  // fit
  auto* fit = app.add_subcommand("fit", "elicit priors and run inference");
  FitOptions fit_opt;
  add_fit_options(fit, fit_opt);

  // evaluate
  auto* eval = app.add_subcommand(
      "evaluate", "score a predicted partition against ground-truth labels");
  eval->option_defaults()->multi_option_policy(
      CLI::MultiOptionPolicy::TakeFirst);
  add_config_stub(eval);
  std::string eval_truth, eval_pred, eval_out;
  int eval_num_known = 0;
  eval->add_option("--truth,--test", eval_truth,
                   "true labels: CSV label column or single-column file")
      ->required();
  eval->add_option("--predicted,--report", eval_pred,
                   "predicted labels: CSV, single-column file, or a fit's "
                   "report.json")
      ->required();
  eval->add_option("--num-known", eval_num_known,
                   "known-class count for the novelty F1 (0 = read it from "
                   "report.json when available)");
  eval->add_option("--out", eval_out, "optional metrics JSON path");

  // compare-mcmc
  auto* cmp = app.add_subcommand(
      "compare-mcmc", "run inference and the reference sampler side by side");
  FitOptions cmp_opt;
  add_fit_options(cmp, cmp_opt);
  brand::GibbsConfig gibbs_cfg;
  gibbs_cfg.truncation = 0;  // resolved to T + 5 unless overridden
  cmp->add_option("--gibbs-truncation", gibbs_cfg.truncation,
                  "sampler truncation (default: T + 5)");
  cmp->add_option("--burn-in", gibbs_cfg.burn_in, "burn-in sweeps")
      ->capture_default_str();
  cmp->add_option("--samples", gibbs_cfg.samples, "kept sweeps")
      ->capture_default_str();
  cmp->add_option("--cocluster-thin", gibbs_cfg.cocluster_thin,
                  "thinning for the co-clustering average")
      ->capture_default_str();
  bool cmp_force = false;
  cmp->add_flag("--force", cmp_force,
                "run the sampler even on test sets above 2000 rows");

  try {
    std::vector<std::string> args = expand_config_args(argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const brand::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (sim->parsed()) {
      scen.study = brand::parse_study(study_name);
      scen.variant = brand::parse_variant(variant_name);
      return cmd_simulate(scen, sim_out);
    }
    if (fit->parsed()) {
      finalize_fit_options(fit_opt);
      return cmd_fit(fit_opt);
    }
    if (eval->parsed()) {
      return cmd_evaluate(eval_truth, eval_pred, eval_num_known, eval_out);
    }
    if (cmp->parsed()) {
      finalize_fit_options(cmp_opt);
      return cmd_compare_mcmc(cmp_opt, gibbs_cfg, cmp_force);
    }
  } catch (const brand::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const brand::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const brand::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
