#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "symred/adam.hpp"
#include "symred/dataset.hpp"
#include "symred/model.hpp"

namespace symred {

struct TrainConfig {
  double learning_rate = 1e-3;
  std::size_t batch_size = 256;
  std::size_t updates = 20000;
  std::size_t eval_every = 250;
  double test_fraction = 0.1;
  std::uint64_t seed = 0;

  void validate() const;
};

struct MetricRecord {
  std::size_t update = 0;
  /// Mean squared error of predicted next states in original coordinates.
  double train_mse = 0;
  double test_mse = 0;
  double wall_time_s = 0;
};

struct DataSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Deterministic split of [0, count): a seeded permutation whose first
/// max(1, round(test_fraction * count)) entries form the test set. Depends
/// only on (count, test_fraction, seed), never on the data values.
DataSplit split_indices(std::size_t count, double test_fraction, std::uint64_t seed);

/// Pairwise (cascade) summation in index order.
double pairwise_sum(std::span<const double> values);

/// Mean over all coordinates of (predict(x, u) - x_next)^2 on the given
/// subset, summed per sample in index order and then pairwise across samples.
double evaluate_mse(const DynamicsModel& model, const TransitionDataset& data,
                    std::span<const std::size_t> indices);

class TrainingDiverged : public std::runtime_error {
 public:
  TrainingDiverged(const std::string& what, std::vector<MetricRecord> metrics)
      : std::runtime_error(what), metrics_(std::move(metrics)) {}
  const std::vector<MetricRecord>& metrics() const { return metrics_; }

 private:
  std::vector<MetricRecord> metrics_;
};

using MetricCallback = std::function<void(const MetricRecord&)>;

/// Minibatch Adam on the mean squared error of the model's training targets.
///
/// The model's regressor must be an Mlp. Samples are built once with
/// model.training_target; minibatches walk a reshuffled permutation of the
/// training split each epoch. Metrics are recorded at update 0, every
/// eval_every updates and after the final update. Deterministic given
/// cfg.seed and the regressor's initial parameters.
///
/// Throws std::invalid_argument for an empty or mismatched dataset and
/// TrainingDiverged when the batch loss becomes non-finite.
std::vector<MetricRecord> train(DynamicsModel& model, const TransitionDataset& data,
                                const TrainConfig& cfg, const MetricCallback& on_metric = {});

/// CSV with header "update,train_mse,test_mse,wall_time_s".
void write_metrics_csv(std::ostream& out, const std::vector<MetricRecord>& metrics);

}  // namespace symred
