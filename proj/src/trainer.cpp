#include "symred/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>

#include "symred/mlp.hpp"
#include "symred/rng.hpp"

namespace symred {

void TrainConfig::validate() const {
  if (!(learning_rate > 0)) throw std::invalid_argument("learning_rate must be positive");
  if (batch_size == 0) throw std::invalid_argument("batch_size must be positive");
  if (updates == 0) throw std::invalid_argument("updates must be positive");
  if (eval_every == 0) throw std::invalid_argument("eval_every must be positive");
  if (!(test_fraction > 0 && test_fraction < 1))
    throw std::invalid_argument("test_fraction must lie strictly between 0 and 1");
}

DataSplit split_indices(std::size_t count, double test_fraction, std::uint64_t seed) {
  if (count < 2) throw std::invalid_argument("split_indices: need at least two samples");
  if (!(test_fraction > 0 && test_fraction < 1))
    throw std::invalid_argument("split_indices: test_fraction must lie in (0, 1)");
  std::vector<std::size_t> perm(count);
  for (std::size_t i = 0; i < count; ++i) perm[i] = i;
  Rng rng(derive_seed(seed, 1));
  rng.shuffle(perm);
  std::size_t n_test = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(count)));
  n_test = std::clamp<std::size_t>(n_test, 1, count - 1);
  DataSplit split;
  split.test.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_test));
  split.train.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_test), perm.end());
  return split;
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double evaluate_mse(const DynamicsModel& model, const TransitionDataset& data,
                    std::span<const std::size_t> indices) {
  if (indices.empty()) throw std::invalid_argument("evaluate_mse: empty index set");
  constexpr std::size_t kChunk = 4096;
  const auto n = static_cast<Eigen::Index>(model.state_dim());
  const auto n_u = static_cast<Eigen::Index>(model.control_dim());
  std::vector<double> per_sample(indices.size());
  for (std::size_t start = 0; start < indices.size(); start += kChunk) {
    const std::size_t len = std::min(kChunk, indices.size() - start);
    Matrix states(n, static_cast<Eigen::Index>(len));
    Matrix controls(n_u, static_cast<Eigen::Index>(len));
    Matrix truth(n, static_cast<Eigen::Index>(len));
    for (std::size_t j = 0; j < len; ++j) {
      const Transition& t = data.triples.at(indices[start + j]);
      states.col(static_cast<Eigen::Index>(j)) = t.x.values();
      controls.col(static_cast<Eigen::Index>(j)) = t.u.values();
      truth.col(static_cast<Eigen::Index>(j)) = t.x_next.values();
    }
    const Matrix pred = model.predict_batch(states, controls);
    for (std::size_t j = 0; j < len; ++j) {
      double s = 0;
      for (Eigen::Index r = 0; r < n; ++r) {
        const double d = pred(r, static_cast<Eigen::Index>(j)) - truth(r, static_cast<Eigen::Index>(j));
        s += d * d;
      }
      per_sample[start + j] = s;
    }
  }
  return pairwise_sum(per_sample) / (static_cast<double>(indices.size()) * static_cast<double>(n));
}

std::vector<MetricRecord> train(DynamicsModel& model, const TransitionDataset& data,
                                const TrainConfig& cfg, const MetricCallback& on_metric) {
  cfg.validate();
  if (data.triples.empty()) throw std::invalid_argument("train: dataset is empty");
  if (data.n != model.state_dim() || data.n_u != model.control_dim()) {
    throw std::invalid_argument("train: dataset dims (n=" + std::to_string(data.n) + ", n_u=" +
                                std::to_string(data.n_u) + ") do not match the model (n=" +
                                std::to_string(model.state_dim()) + ", n_u=" +
                                std::to_string(model.control_dim()) + ")");
  }
  auto mlp = std::dynamic_pointer_cast<Mlp>(model.regressor_ptr());
  if (!mlp) throw std::invalid_argument("train: the model's regressor is not a trainable Mlp");

  const auto t0 = std::chrono::steady_clock::now();
  const DataSplit split = split_indices(data.size(), cfg.test_fraction, cfg.seed);

  const auto in_dim = static_cast<Eigen::Index>(mlp->input_dim());
  const auto out_dim = static_cast<Eigen::Index>(mlp->output_dim());
  const auto n_train = static_cast<Eigen::Index>(split.train.size());
  Matrix inputs(in_dim, n_train);
  Matrix targets(out_dim, n_train);
  for (Eigen::Index j = 0; j < n_train; ++j) {
    const Transition& t = data.triples[split.train[static_cast<std::size_t>(j)]];
    ReducedSample s = model.training_target(t.x, t.u, t.x_next);
    inputs.col(j) = s.input;
    targets.col(j) = s.target;
  }

  std::vector<MetricRecord> metrics;
  auto record = [&](std::size_t update) {
    MetricRecord m;
    m.update = update;
    m.train_mse = evaluate_mse(model, data, split.train);
    m.test_mse = evaluate_mse(model, data, split.test);
    m.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    metrics.push_back(m);
    if (on_metric) on_metric(m);
  };

  Adam adam(static_cast<std::size_t>(mlp->parameters().size()),
            AdamConfig{cfg.learning_rate, 0.9, 0.999, 1e-8});
  Rng batch_rng(derive_seed(cfg.seed, 2));
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n_train));
  for (Eigen::Index j = 0; j < n_train; ++j) order[static_cast<std::size_t>(j)] = j;
  batch_rng.shuffle(order);
  std::size_t cursor = 0;

  const auto batch = static_cast<Eigen::Index>(std::min<std::size_t>(cfg.batch_size, split.train.size()));
  Matrix batch_in(in_dim, batch);
  Matrix batch_target(out_dim, batch);
  Mlp::Tape tape;
  const double scale = 2.0 / (static_cast<double>(batch) * static_cast<double>(out_dim));

  record(0);
  for (std::size_t update = 1; update <= cfg.updates; ++update) {
    for (Eigen::Index b = 0; b < batch; ++b) {
      if (cursor == order.size()) {
        batch_rng.shuffle(order);
        cursor = 0;
      }
      const Eigen::Index j = order[cursor++];
      batch_in.col(b) = inputs.col(j);
      batch_target.col(b) = targets.col(j);
    }
    const Matrix diff = mlp->forward(batch_in, tape) - batch_target;
    const double loss = diff.squaredNorm() / (static_cast<double>(batch) * static_cast<double>(out_dim));
    if (!std::isfinite(loss)) {
      throw TrainingDiverged("training diverged at update " + std::to_string(update) +
                                 " (non-finite batch loss)",
                             metrics);
    }
    const Vector grad = mlp->backward(tape, scale * diff);
    adam.step(mlp->parameters(), grad);
    if (update % cfg.eval_every == 0 || update == cfg.updates) {
      record(update);
      if (!std::isfinite(metrics.back().train_mse) || !std::isfinite(metrics.back().test_mse)) {
        throw TrainingDiverged("training diverged at update " + std::to_string(update) +
                                   " (non-finite evaluation error)",
                               metrics);
      }
    }
  }
  return metrics;
}

void write_metrics_csv(std::ostream& out, const std::vector<MetricRecord>& metrics) {
  out << "update,train_mse,test_mse,wall_time_s\n";
  for (const MetricRecord& m : metrics) {
    out << m.update << ',' << format_double(m.train_mse) << ',' << format_double(m.test_mse) << ','
        << format_double(m.wall_time_s) << '\n';
  }
}

}  // namespace symred
