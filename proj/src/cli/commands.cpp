// Copyright 2026 The PCConv Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>

#include "CLI11.hpp"
#include "pcconv/data.hpp"
#include "pcconv/filter.hpp"
#include "pcconv/fit.hpp"
#include "pcconv/graph.hpp"
#include "pcconv/model.hpp"
#include "pcconv/pcpoly.hpp"
#include "pcconv/rng.hpp"

namespace pcconv::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kFilterDevTolerance = 1e-8;
constexpr double kTwofoldDevTolerance = 1e-10;
constexpr std::size_t kOracleDefaultNodes = 50;

std::string real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Runs a validation step, reporting precondition failures as ConfigError.
template <typename F>
auto validated(F&& step) -> decltype(step()) {
  try {
    return step();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  } catch (const std::domain_error& e) {
    throw ConfigError(e.what());
  }
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

// Creates out_dir and writes run.txt. The timestamp line is the only
// non-deterministic byte range of any output.
fs::path open_out_dir(const RunConfig& config, const std::string& command) {
  const fs::path dir = config.get("out_dir");
  if (dir.empty()) throw ConfigError("out_dir must not be empty");
  fs::create_directories(dir);
  std::ofstream run(dir / "run.txt");
  run << "# timestamp=" << timestamp() << "\n";
  run << "command=" << command << "\n";
  run << config.resolved();
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

FilterParams filter_from_config(const RunConfig& config) {
  FilterParams params;
  params.t = config.get_double("t");
  params.p = config.get_double("p");
  params.eta = config.get_double("eta");
  params.N = config.get_int("N");
  params.K = config.get_int("K");
  return params;
}

std::size_t grid_size(const RunConfig& config) {
  const int grid = config.get_int("grid");
  if (grid < 2) throw ConfigError("grid must be at least 2");
  return static_cast<std::size_t>(grid);
}

ModelConfig model_config_from(const RunConfig& config) {
  ModelConfig cfg;
  const int hidden = config.get_int("hidden");
  if (hidden < 1) throw ConfigError("hidden must be positive");
  cfg.hidden = static_cast<std::size_t>(hidden);
  cfg.mlp_layers = config.get_int("mlp_layers");
  cfg.dropout = config.get_double("dropout");
  cfg.t = config.get_double("t");
  cfg.p = config.get_double("p");
  cfg.eta = config.get_double("eta");
  cfg.N = config.get_int("N");
  cfg.K = config.get_int("K");
  cfg.mode = parse_model_mode(config.get("mode"));
  // Placeholders until the dataset is known.
  cfg.in_dim = 1;
  cfg.n_classes = 1;
  cfg.validate();
  return cfg;
}

TrainConfig train_config_from(const RunConfig& config) {
  TrainConfig cfg;
  cfg.learning_rate = config.get_double("lr");
  cfg.weight_decay = config.get_double("weight_decay");
  if (!config.get("theta_lr").empty()) cfg.theta_learning_rate = config.get_double("theta_lr");
  cfg.max_epochs = config.get_int("max_epochs");
  cfg.patience = config.get_int("patience");
  cfg.seed = config.get_u64("seed");
  cfg.validate();
  if (cfg.theta_learning_rate == 0.0) throw ConfigError("theta_lr must be positive");
  return cfg;
}

struct SplitSpec {
  enum class Kind { kCitation, kSparse, kRatio } kind = Kind::kRatio;
  double train = 0.6;
  double val = 0.2;
};

SplitSpec parse_split(const std::string& text) {
  if (text == "citation") return {SplitSpec::Kind::kCitation};
  if (text == "sparse") return {SplitSpec::Kind::kSparse};
  const std::string prefix = "ratio:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string rest = text.substr(prefix.size());
    const auto slash = rest.find('/');
    if (slash != std::string::npos) {
      RunConfig scratch;
      scratch.set("theta", rest.substr(0, slash) + "," + rest.substr(slash + 1));
      const std::vector<double> fracs = scratch.get_doubles("theta");
      if (fracs.size() == 2 && fracs[0] > 0.0 && fracs[1] > 0.0 && fracs[0] + fracs[1] < 1.0) {
        return {SplitSpec::Kind::kRatio, fracs[0], fracs[1]};
      }
    }
  }
  throw ConfigError("split must be citation, sparse or ratio:TRAIN/VAL, got '" + text + "'");
}

Split make_split(const Dataset& dataset, const SplitSpec& spec, std::uint64_t seed) {
  switch (spec.kind) {
    case SplitSpec::Kind::kCitation:
      return split_sparse(dataset, seed, SparseSplitMode::kCitation);
    case SplitSpec::Kind::kSparse:
      return split_sparse(dataset, seed, SparseSplitMode::kFraction);
    case SplitSpec::Kind::kRatio:
      break;
  }
  return split_ratio(dataset, spec.train, spec.val, seed);
}

Dataset load_configured_dataset(const RunConfig& config) {
  const fs::path dir = config.get("dataset_dir");
  if (dir.empty()) throw ConfigError("dataset_dir is required");
  const bool normalize = config.get_bool("row_normalize");
  Dataset ds = load_dataset(dir);
  if (normalize) row_normalize(ds.features);
  return ds;
}

std::string history_csv(const std::vector<EpochRecord>& history) {
  std::string out = "epoch,train_loss,val_acc\n";
  for (const auto& r : history) {
    out += std::to_string(r.epoch) + "," + real(r.train_loss) + "," + real(r.val_acc) + "\n";
  }
  return out;
}

}  // namespace

int cmd_coeffs(const RunConfig& config, std::ostream& out) {
  const auto [t, N, K] = validated([&] {
    const double t = config.get_double("t");
    const int N = config.get_int("N");
    const int K = config.get_int("K");
    if (N < 0) throw ConfigError("N must be non-negative");
    if (K < 1) throw ConfigError("K must be at least 1");
    validate_diffusion_scale(t, K);
    return std::tuple{t, N, K};
  });
  const fs::path dir = open_out_dir(config, "coeffs");
  const PCCoeffTable table = build_table(t, N, K);
  std::string csv = "n,k,C\n";
  for (int n = 0; n <= N; ++n) {
    for (int k = 1; k <= K; ++k) {
      csv += std::to_string(n) + "," + std::to_string(k) + "," + real(table.at(n, k)) + "\n";
    }
  }
  write_text(dir / "coeffs.csv", csv);
  out << "wrote " << (dir / "coeffs.csv").string() << "\n";
  return kExitOk;
}

int cmd_response(const RunConfig& config, std::ostream& out) {
  const auto [params, points] = validated([&] {
    FilterParams params = filter_from_config(config);
    if (!config.get("model").empty()) {
      params = load_model(config.get("model")).filter_params();
    } else {
      params.theta = config.get_doubles("theta");
      if (params.theta.empty() && params.K >= 1) {
        // Same starting bank as a freshly initialized model.
        params.theta.assign(static_cast<std::size_t>(params.K) + 1, 1.0 / params.K);
        params.theta[0] = 1.0;
      }
    }
    params.validate();
    return std::pair{params, grid_size(config)};
  });
  const fs::path dir = open_out_dir(config, "response");
  std::string csv = "lambda,response\n";
  for (double lambda : uniform_grid(points)) {
    csv += real(lambda) + "," + real(scalar_response(params, lambda)) + "\n";
  }
  write_text(dir / "response.csv", csv);
  out << "wrote " << (dir / "response.csv").string() << "\n";
  return kExitOk;
}

int cmd_fit(const RunConfig& config, std::ostream& out) {
  struct FitSetup {
    TargetFilter target;
    std::size_t points;
    int K, N;
    double t;
  };
  const FitSetup setup = validated([&] {
    FitSetup s{target_zoo(config.get("target")), grid_size(config), config.get_int("K"),
               config.get_int("N"), config.get_double("t")};
    if (s.K < 1) throw ConfigError("K must be at least 1");
    if (s.N < s.K) throw ConfigError("fit needs N >= K");
    if (s.points < static_cast<std::size_t>(s.K) + 2) throw ConfigError("fit needs grid >= K+2");
    validate_diffusion_scale(s.t, s.K);
    return s;
  });
  const fs::path dir = open_out_dir(config, "fit");
  const FitResult fit = fit_least_squares(setup.target, setup.points, setup.K, setup.N, setup.t);
  std::string curve = "lambda,target,fitted\n";
  for (std::size_t i = 0; i < fit.grid.size(); ++i) {
    curve += real(fit.grid[i]) + "," + real(setup.target.eval(fit.grid[i])) + "," +
             real(fit.responses[i]) + "\n";
  }
  std::string theta = "k,theta\n";
  for (std::size_t k = 0; k < fit.theta.size(); ++k) {
    theta += std::to_string(k) + "," + real(fit.theta[k]) + "\n";
  }
  write_text(dir / "fit_curve.csv", curve);
  write_text(dir / "theta.csv", theta);
  out << "rmse=" << real(fit.rmse) << "\n";
  return kExitOk;
}

int cmd_synth(const RunConfig& config, std::ostream& out) {
  const SbmParams params = validated([&] {
    SbmParams p;
    const int m = config.get_int("m");
    const int d = config.get_int("features");
    if (m < 1 || d < 1) throw ConfigError("m and features must be positive");
    p.n_nodes = static_cast<std::size_t>(m);
    p.n_classes = config.get_int("classes");
    p.p_in = config.get_double("p_in");
    p.p_out = config.get_double("p_out");
    p.feature_dim = static_cast<std::size_t>(d);
    p.mu = config.get_double("mu");
    p.sigma = config.get_double("sigma");
    p.seed = config.get_u64("seed");
    p.validate();
    return p;
  });
  const fs::path dir = open_out_dir(config, "synth");
  const Dataset ds = sbm_generate(params);
  save_dataset(ds, dir);
  const std::string h = ds.graph.n_edges() > 0
                            ? real(edge_homophily(ds.graph, ds.labels))
                            : std::string("nan");
  std::string meta;
  meta += "m=" + std::to_string(params.n_nodes) + "\n";
  meta += "C=" + std::to_string(params.n_classes) + "\n";
  meta += "p_in=" + real(params.p_in) + "\n";
  meta += "p_out=" + real(params.p_out) + "\n";
  meta += "seed=" + std::to_string(params.seed) + "\n";
  meta += "edges=" + std::to_string(ds.graph.n_edges()) + "\n";
  meta += "h=" + h + "\n";
  write_text(dir / "meta.txt", meta);
  out << meta;
  return kExitOk;
}

int cmd_train(const RunConfig& config, std::ostream& out) {
  const ModelConfig model_cfg = validated([&] { return model_config_from(config); });
  const TrainConfig train_cfg = validated([&] { return train_config_from(config); });
  const SplitSpec split_spec = validated([&] { return parse_split(config.get("split")); });
  const bool normalize = validated([&] { return config.get_bool("row_normalize"); });
  static_cast<void>(normalize);
  const Dataset ds = load_configured_dataset(config);
  const Split split = validated([&] { return make_split(ds, split_spec, train_cfg.seed); });

  const fs::path dir = open_out_dir(config, "train");
  const TrainResult result = train(ds, split, model_cfg, train_cfg);
  const double test_acc = evaluate(result.model, ds, split.test);

  write_text(dir / "history.csv", history_csv(result.history));
  save_model(result.model, dir / "model.pcn");
  std::string metrics;
  metrics += "epochs_run=" + std::to_string(result.history.size()) + "\n";
  metrics += "best_epoch=" + std::to_string(result.best_epoch) + "\n";
  metrics += "best_val_acc=" + real(result.best_val_acc) + "\n";
  metrics += "test_acc=" + real(test_acc) + "\n";
  write_text(dir / "metrics.txt", metrics);
  out << metrics;
  return kExitOk;
}

int cmd_eval(const RunConfig& config, std::ostream& out) {
  const SplitSpec split_spec = validated([&] { return parse_split(config.get("split")); });
  const std::uint64_t seed = validated([&] { return config.get_u64("seed"); });
  const fs::path model_path = config.get("model").empty()
                                  ? fs::path(config.get("out_dir")) / "model.pcn"
                                  : fs::path(config.get("model"));
  const PCNetModel model = load_model(model_path);
  const Dataset ds = load_configured_dataset(config);
  if (ds.feature_dim() != model.config.in_dim ||
      ds.n_classes != model.config.n_classes) {
    throw ConfigError("dataset does not match the model's input or class count");
  }
  const Split split = validated([&] { return make_split(ds, split_spec, seed); });

  const fs::path dir = open_out_dir(config, "eval");
  const double test_acc = evaluate(model, ds, split.test);
  const std::string text = "test_acc=" + real(test_acc) + "\n";
  write_text(dir / "eval.txt", text);
  out << text;
  return kExitOk;
}

int cmd_oracle_check(const RunConfig& config, std::ostream& out) {
  struct OracleSetup {
    SbmParams graph;
    FilterParams filter;
    TwofoldParams twofold;
  };
  const OracleSetup setup = validated([&] {
    OracleSetup s;
    s.graph.n_nodes = config.is_set("m") ? static_cast<std::size_t>(config.get_int("m"))
                                         : kOracleDefaultNodes;
    s.graph.n_classes = 2;
    s.graph.p_in = 0.3;
    s.graph.p_out = 0.1;
    s.graph.feature_dim = 4;
    s.graph.seed = config.get_u64("seed");
    s.graph.validate();
    if (s.graph.n_nodes > kMaxEigenOrder) throw ConfigError("oracle-check: m must be <= 1000");
    s.filter = filter_from_config(config);
    s.filter.theta.assign(static_cast<std::size_t>(std::max(s.filter.K, 0)) + 1, 0.0);
    s.filter.validate();
    NormalizationConfig{s.filter.eta, s.filter.p, s.filter.t}.validate();
    s.twofold = {config.get_double("alpha1"), config.get_double("alpha2"), s.filter.t, s.filter.p};
    if (!psd_feasible_p(s.twofold.t, s.twofold.alpha1).contains(s.twofold.p)) {
      throw ConfigError("oracle-check: p is outside the feasible interval for (t, alpha1)");
    }
    if (!(s.twofold.alpha2 > 0.0)) throw ConfigError("oracle-check: alpha2 must be positive");
    return s;
  });
  const fs::path dir = open_out_dir(config, "oracle-check");

  const Dataset ds = sbm_generate(setup.graph);
  FilterParams filter = setup.filter;
  Rng rng = Rng(setup.graph.seed).fork(3);
  for (double& th : filter.theta) th = 2.0 * rng.uniform() - 1.0;

  const SparseMatrix laplacian =
      pc_laplacian(ds.graph, NormalizationConfig{filter.eta, filter.p, filter.t});
  const DenseMatrix fast = apply_conv(laplacian, ds.features, filter);
  const DenseMatrix oracle = spectral_oracle(laplacian.to_dense(), ds.features, filter);
  const double filter_dev = max_abs_diff(fast, oracle);
  const double filter_tol = kFilterDevTolerance * std::max(1.0, ds.features.max_abs());

  const DenseMatrix standard = standard_laplacian(ds.graph).to_dense();
  const DenseMatrix hetero_first =
      twofold_closed_form(standard, ds.features, setup.twofold, TwofoldOrder::kHeteroFirst);
  const DenseMatrix homo_first =
      twofold_closed_form(standard, ds.features, setup.twofold, TwofoldOrder::kHomoFirst);
  const double twofold_dev = max_abs_diff(hetero_first, homo_first);

  const bool pass = filter_dev <= filter_tol && twofold_dev <= kTwofoldDevTolerance;
  std::string report;
  report += "m=" + std::to_string(setup.graph.n_nodes) + "\n";
  report += "max_filter_dev=" + real(filter_dev) + "\n";
  report += "twofold_order_dev=" + real(twofold_dev) + "\n";
  report += std::string("status=") + (pass ? "pass" : "fail") + "\n";
  write_text(dir / "oracle_check.txt", report);
  out << report;
  return pass ? kExitOk : kExitRuntimeError;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using Command = std::function<int(const RunConfig&, std::ostream&)>;
  const std::vector<std::pair<std::string, Command>> commands = {
      {"coeffs", cmd_coeffs},   {"response", cmd_response}, {"fit", cmd_fit},
      {"synth", cmd_synth},     {"train", cmd_train},       {"eval", cmd_eval},
      {"oracle-check", cmd_oracle_check},
  };
  const std::map<std::string, std::string> descriptions = {
      {"coeffs", "write the Poisson-Charlier coefficient table C_n(k, t)"},
      {"response", "write the spectral response of a filter bank over [0, 2]"},
      {"fit", "least-squares fit of a filter bank to a target response"},
      {"synth", "generate a stochastic block model dataset"},
      {"train", "train PCNet on a dataset directory"},
      {"eval", "evaluate a saved model on the configured split"},
      {"oracle-check", "compare fast filtering against dense eigendecomposition oracles"},
  };

  CLI::App app{"Poisson-Charlier spectral graph filtering and PCNet node classification",
               "pcnet"};
  app.require_subcommand(1);
  std::map<std::string, std::map<std::string, std::string>> flag_values;
  std::map<std::string, std::string> config_paths;
  std::map<std::string, CLI::App*> subcommands;
  for (const auto& [name, _] : commands) {
    CLI::App* sub = app.add_subcommand(name, descriptions.at(name));
    sub->add_option("--config", config_paths[name], "key=value config file");
    for (const auto& key : known_keys()) {
      sub->add_option("--" + key.name, flag_values[name][key.name], key.help);
    }
    subcommands[name] = sub;
  }

  std::vector<char*> argv;
  std::vector<std::string> storage = args;
  if (storage.empty()) storage.emplace_back("pcnet");
  for (auto& a : storage) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  for (const auto& [name, command] : commands) {
    CLI::App* sub = subcommands[name];
    if (!sub->parsed()) continue;
    RunConfig config;
    try {
      if (!config_paths[name].empty()) config.load_file(config_paths[name]);
      for (const auto& key : known_keys()) {
        if (sub->count("--" + key.name) > 0) config.set(key.name, flag_values[name][key.name]);
      }
      return command(config, out);
    } catch (const ConfigError& e) {
      err << "pcnet " << name << ": configuration error: " << e.what() << "\n";
      return kExitConfigError;
    } catch (const std::exception& e) {
      err << "pcnet " << name << ": error: " << e.what() << "\n";
      return kExitRuntimeError;
    }
  }
  return kExitConfigError;
}

}  // namespace pcconv::cli
