#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "symred/dataset.hpp"
#include "symred/mlp.hpp"
#include "symred/model.hpp"
#include "symred/trainer.hpp"

namespace symred {

using Architecture = std::vector<std::size_t>;

struct ExperimentConfig {
  std::string env_id;
  std::string group_id;
  std::vector<Architecture> architectures;
  Activation activation = Activation::relu;
  Mode mode = Mode::delta;
  TrainConfig train;
  std::string dataset_path;
  std::string output_dir;
  std::size_t runs = 4;
  /// Concurrent training runs; 0 means one per hardware thread.
  std::size_t jobs = 0;

  void validate() const;
};

/// Hidden width 128 with 20k updates for parking2, width 64 with 10k updates
/// for reacher; the grid is 1, 2 and 3 hidden layers; 4 runs; eval every 250.
ExperimentConfig default_experiment(const std::string& env_id);

/// Group used for an environment's symmetry model.
std::string default_group_for_env(const std::string& env_id);

/// "128;128,128" -> {{128}, {128, 128}}.
std::vector<Architecture> parse_architectures(const std::string& text);
/// "128,64" -> {128, 64}.
Architecture parse_architecture(const std::string& text);
/// "2x128" for uniform widths, otherwise "128-64".
std::string architecture_label(const Architecture& arch);

/// Flat "key = value" file; '#' starts a comment. Keys: env, group, archs,
/// activation, mode, learning_rate, batch_size, updates, eval_every,
/// test_fraction, seed, data, out, runs, jobs. Throws std::invalid_argument
/// on unknown keys or unparsable values, naming the line.
void apply_config_file(ExperimentConfig& cfg, const std::string& path);
void apply_config_text(ExperimentConfig& cfg, std::istream& in, const std::string& source);

/// Builds a symmetry or baseline model over a fresh Mlp.
std::unique_ptr<DynamicsModel> build_model(const TransitionDataset& data,
                                           const std::string& group_id, bool symmetry,
                                           const Architecture& hidden, Activation activation,
                                           Mode mode, std::uint64_t init_seed);

struct RunOutcome {
  std::size_t arch_index = 0;
  bool symmetry = false;
  std::size_t run = 0;
  std::uint64_t seed = 0;
  std::size_t input_dim = 0;
  std::vector<MetricRecord> metrics;
  bool diverged = false;
  std::string error;
};

struct SummaryRow {
  std::string arch;
  bool symmetry = false;
  double final_test_mse_mean = 0;
  double final_test_mse_std = 0;  // sample standard deviation
  std::size_t completed = 0;
  std::size_t diverged = 0;
};

struct CompareReport {
  std::vector<RunOutcome> runs;
  std::vector<SummaryRow> summary;
  double seconds = 0;
};

/// Seed of run k: derive_seed(train.seed, k). Both methods of run k share
/// the seed, hence the train/test split; the Mlp init seed is
/// derive_seed(run seed, 0).
std::uint64_t run_seed(const ExperimentConfig& cfg, std::size_t run);

RunOutcome run_single(const ExperimentConfig& cfg, const TransitionDataset& data,
                      std::size_t arch_index, bool symmetry, std::size_t run);

using ProgressFn = std::function<void(const RunOutcome&)>;

/// Architecture grid x {symmetry on, off} x runs. Cells run concurrently up to
/// cfg.jobs; results are ordered by (arch, symmetry on first, run). A
/// diverged run is recorded and the rest continue.
CompareReport run_compare(const ExperimentConfig& cfg, const TransitionDataset& data,
                          const ProgressFn& progress = {});

/// Writes runs/<arch>_<sym|base>_run<k>.csv (+ .json run info), summary.csv,
/// curves.csv and report.md into `dir`.
void write_compare_outputs(const CompareReport& report, const ExperimentConfig& cfg,
                           const std::string& dir);

/// Run description (hyperparameters, seeds, dims) as a JSON object string.
std::string run_info_json(const ExperimentConfig& cfg, const RunOutcome& run);

double mean(const std::vector<double>& v);
double sample_stddev(const std::vector<double>& v);

}  // namespace symred
