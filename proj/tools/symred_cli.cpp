// symred: dataset generation, training, comparison and invariance checks.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "symred/dataset.hpp"
#include "symred/experiment.hpp"
#include "symred/model_io.hpp"
#include "symred/verify.hpp"

namespace fs = std::filesystem;
using namespace symred;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Training flags shared by train and compare; unset values keep the config.
struct TrainFlags {
  std::string data;
  std::string group;
  std::string activation;
  std::string mode;
  std::optional<double> learning_rate;
  std::optional<std::size_t> batch_size;
  std::optional<std::size_t> updates;
  std::optional<std::size_t> eval_every;
  std::optional<double> test_fraction;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string config;
};

void add_train_flags(CLI::App* cmd, TrainFlags& f) {
  cmd->add_option("--data", f.data, "Dataset JSONL file");
  cmd->add_option("--group", f.group, "Symmetry group id (default: the environment's group)");
  cmd->add_option("--activation", f.activation, "relu or tanh");
  cmd->add_option("--mode", f.mode, "delta or absolute");
  cmd->add_option("--lr", f.learning_rate, "Adam learning rate");
  cmd->add_option("--batch", f.batch_size, "Minibatch size");
  cmd->add_option("--updates", f.updates, "Number of gradient updates");
  cmd->add_option("--eval-every", f.eval_every, "Updates between evaluations");
  cmd->add_option("--test-fraction", f.test_fraction, "Held-out fraction of the dataset");
  cmd->add_option("--seed", f.seed, "Master seed");
  cmd->add_option("-o,--out", f.out, "Output directory");
  cmd->add_option("--config", f.config, "Flat key = value config file");
}

/// Defaults for the dataset's environment, then the config file, then flags.
ExperimentConfig resolve_config(const TrainFlags& f, TransitionDataset& data) {
  ExperimentConfig probe;
  if (!f.config.empty()) apply_config_file(probe, f.config);
  const std::string data_path = !f.data.empty() ? f.data : probe.dataset_path;
  if (data_path.empty()) throw UsageError("no dataset given (--data or 'data' in the config)");
  if (!fs::exists(data_path)) throw UsageError("dataset '" + data_path + "' does not exist");
  data = read_dataset_file(data_path);

  ExperimentConfig cfg;
  try {
    cfg = default_experiment(data.env_id);
  } catch (const std::invalid_argument&) {
    cfg.env_id = data.env_id;
    cfg.architectures = {{128}};
  }
  if (!f.config.empty()) apply_config_file(cfg, f.config);
  cfg.dataset_path = data_path;
  if (!f.group.empty()) cfg.group_id = f.group;
  if (!f.activation.empty()) cfg.activation = parse_activation(f.activation);
  if (!f.mode.empty()) cfg.mode = parse_mode(f.mode);
  if (f.learning_rate) cfg.train.learning_rate = *f.learning_rate;
  if (f.batch_size) cfg.train.batch_size = *f.batch_size;
  if (f.updates) cfg.train.updates = *f.updates;
  if (f.eval_every) cfg.train.eval_every = *f.eval_every;
  if (f.test_fraction) cfg.train.test_fraction = *f.test_fraction;
  if (f.seed) cfg.train.seed = *f.seed;
  if (!f.out.empty()) cfg.output_dir = f.out;
  if (cfg.output_dir.empty()) throw UsageError("no output directory given (--out or 'out')");
  if (cfg.env_id != data.env_id) {
    throw UsageError("config env '" + cfg.env_id + "' does not match dataset env '" +
                     data.env_id + "'");
  }
  cfg.validate();
  return cfg;
}

int cmd_gen_data(const std::string& env, std::optional<std::size_t> episodes,
                 std::optional<std::size_t> horizon, const std::string& policy,
                 std::optional<std::uint64_t> seed, const std::string& out) {
  DatasetRecipe recipe;
  try {
    recipe = default_dataset_recipe(env);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (episodes) recipe.episodes = *episodes;
  if (horizon) recipe.horizon = *horizon;
  if (seed) recipe.seed = *seed;
  const Policy p = parse_policy(policy);
  const TransitionDataset data = generate_dataset(env, recipe.episodes, recipe.horizon, p, recipe.seed);
  if (fs::path(out).has_parent_path()) fs::create_directories(fs::path(out).parent_path());
  write_dataset_file(out, data);
  std::cout << "wrote " << out << ": env=" << data.env_id << " count=" << data.size()
            << " n=" << data.n << " n_u=" << data.n_u << " seed=" << data.seed
            << " policy=" << to_string(p) << '\n';
  return kExitOk;
}

int cmd_train(const TrainFlags& flags, const std::string& symmetry, const std::string& hidden) {
  if (symmetry != "on" && symmetry != "off") throw UsageError("--symmetry must be on or off");
  TransitionDataset data;
  ExperimentConfig cfg = resolve_config(flags, data);
  if (!hidden.empty()) cfg.architectures = {parse_architecture(hidden)};
  const bool sym = symmetry == "on";
  if (sym && cfg.group_id.empty()) throw UsageError("no group for env '" + data.env_id + "'");

  const Architecture& arch = cfg.architectures.front();
  const std::uint64_t init_seed = derive_seed(cfg.train.seed, 0);
  std::unique_ptr<DynamicsModel> model;
  try {
    model = build_model(data, cfg.group_id, sym, arch, cfg.activation, cfg.mode, init_seed);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  std::cout << "model: " << (sym ? "symmetry group=" + cfg.group_id : std::string("baseline"))
            << " input_dim=" << model->input_dim() << " output_dim=" << model->state_dim()
            << " hidden=" << architecture_label(arch) << " mode=" << to_string(cfg.mode) << '\n';
  std::cout << "data: " << cfg.dataset_path << " count=" << data.size() << " n=" << data.n
            << " n_u=" << data.n_u << '\n';

  fs::create_directories(cfg.output_dir);
  RunOutcome run;
  run.symmetry = sym;
  run.seed = cfg.train.seed;
  run.input_dim = model->input_dim();
  int status = kExitOk;
  try {
    run.metrics = train(*model, data, cfg.train, [](const MetricRecord& m) {
      std::printf("update %6zu  train_mse %.6e  test_mse %.6e  %.1fs\n", m.update, m.train_mse,
                  m.test_mse, m.wall_time_s);
      std::fflush(stdout);
    });
  } catch (const TrainingDiverged& e) {
    std::cerr << "error: " << e.what() << '\n';
    run.diverged = true;
    run.error = e.what();
    run.metrics = e.metrics();
    status = kExitFailure;
  }
  const fs::path dir(cfg.output_dir);
  std::ofstream csv(dir / "metrics.csv");
  write_metrics_csv(csv, run.metrics);
  std::ofstream(dir / "metrics.json") << run_info_json(cfg, run) << '\n';
  if (!run.diverged) {
    save_model((dir / "model.bin").string(), *model, cfg.train.seed);
    std::cout << "wrote " << (dir / "model.bin").string() << " and "
              << (dir / "metrics.csv").string() << '\n';
  }
  return status;
}

int cmd_compare(const TrainFlags& flags, const std::string& archs, std::optional<std::size_t> runs,
                std::optional<std::size_t> jobs) {
  TransitionDataset data;
  ExperimentConfig cfg = resolve_config(flags, data);
  if (!archs.empty()) cfg.architectures = parse_architectures(archs);
  if (runs) cfg.runs = *runs;
  if (jobs) cfg.jobs = *jobs;
  cfg.validate();
  std::cout << "compare: env=" << cfg.env_id << " group=" << cfg.group_id << " grid=";
  for (std::size_t i = 0; i < cfg.architectures.size(); ++i)
    std::cout << (i ? "," : "") << architecture_label(cfg.architectures[i]);
  std::cout << " runs=" << cfg.runs << " updates=" << cfg.train.updates << '\n';

  const CompareReport report = run_compare(cfg, data, [&](const RunOutcome& r) {
    std::printf("done %s symmetry=%s run=%zu final_test_mse=%.6e%s\n",
                architecture_label(cfg.architectures[r.arch_index]).c_str(),
                r.symmetry ? "on" : "off", r.run,
                r.metrics.empty() ? 0.0 : r.metrics.back().test_mse, r.diverged ? " DIVERGED" : "");
    std::fflush(stdout);
  });
  write_compare_outputs(report, cfg, cfg.output_dir);
  std::printf("%-8s %-9s %-22s %-22s\n", "arch", "symmetry", "final_test_mse_mean",
              "final_test_mse_std");
  for (const SummaryRow& row : report.summary) {
    std::printf("%-8s %-9s %-22.6e %-22.6e\n", row.arch.c_str(), row.symmetry ? "on" : "off",
                row.final_test_mse_mean, row.final_test_mse_std);
  }
  std::cout << "report: " << (fs::path(cfg.output_dir) / "report.md").string() << '\n';
  return kExitOk;
}

int cmd_verify(bool all, const std::string& suite, const std::string& group,
               std::optional<std::size_t> samples, std::optional<std::uint64_t> seed) {
  VerifyOptions opts;
  if (samples) opts.samples = *samples;
  if (seed) opts.seed = *seed;
  const std::string s = all || suite.empty() ? "all" : suite;
  const std::string g = group.empty() ? "all" : group;
  const auto names = suite_names();
  if (s != "all" && std::find(names.begin(), names.end(), s) == names.end())
    throw UsageError("unknown suite '" + s + "'");
  std::vector<SuiteResult> results;
  try {
    results = run_verify(s, g, opts);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  print_results(std::cout, results);
  bool ok = !results.empty();
  for (const auto& r : results) ok = ok && r.passed;
  return ok ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symmetry-reduced dynamics learning"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen-data", "Roll out a simulator into a JSONL dataset");
  std::string env, policy = "uniform-random", gen_out, gen_config;
  std::optional<std::size_t> episodes, horizon;
  std::optional<std::uint64_t> gen_seed;
  gen->add_option("--env", env, "parking2 or reacher")->required();
  gen->add_option("--episodes", episodes, "Number of episodes");
  gen->add_option("--horizon", horizon, "Steps per episode");
  gen->add_option("--policy", policy, "uniform-random or scripted-goal-seek");
  gen->add_option("--seed", gen_seed, "Master seed");
  gen->add_option("-o,--out", gen_out, "Output JSONL path")->required();

  auto* tr = app.add_subcommand("train", "Train one model and write metrics and the model file");
  TrainFlags train_flags;
  std::string symmetry = "on", hidden;
  add_train_flags(tr, train_flags);
  tr->add_option("--symmetry", symmetry, "on (symmetry-reduced) or off (baseline)");
  tr->add_option("--hidden", hidden, "Hidden widths, e.g. 128,128");

  auto* cmp = app.add_subcommand("compare", "Architecture grid x {symmetry on, off} x runs");
  TrainFlags compare_flags;
  std::string archs;
  std::optional<std::size_t> runs, jobs;
  add_train_flags(cmp, compare_flags);
  cmp->add_option("--archs", archs, "Grid, e.g. \"128;128,128;128,128,128\"");
  cmp->add_option("--runs", runs, "Seeds per cell");
  cmp->add_option("--jobs", jobs, "Concurrent runs (default: hardware threads)");

  auto* ver = app.add_subcommand("verify", "Run the invariance and gradient suites");
  bool all = false;
  std::string suite, group;
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> verify_seed;
  ver->add_flag("--all", all, "Run every suite on every group");
  ver->add_option("--suite", suite, "Suite name");
  ver->add_option("--group", group, "Group id, or all");
  ver->add_option("--samples", samples, "Draws per suite");
  ver->add_option("--seed", verify_seed, "Seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen) return cmd_gen_data(env, episodes, horizon, policy, gen_seed, gen_out);
    if (*tr) return cmd_train(train_flags, symmetry, hidden);
    if (*cmp) return cmd_compare(compare_flags, archs, runs, jobs);
    if (*ver) return cmd_verify(all, suite, group, samples, verify_seed);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
