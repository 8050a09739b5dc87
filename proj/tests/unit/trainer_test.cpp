#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "symred/dataset.hpp"
#include "symred/groups.hpp"
#include "symred/mlp.hpp"
#include "symred/trainer.hpp"
#include "symred/verify.hpp"

using namespace symred;

namespace {

std::unique_ptr<DynamicsModel> small_model(bool symmetry, std::uint64_t seed = 3,
                                           Mode mode = Mode::delta) {
  if (symmetry) {
    return std::make_unique<SymmetryReducedModel>(
        make_parking_group(), std::make_shared<Mlp>(MlpSpec{8, 24, {32}, Activation::relu, seed}),
        mode);
  }
  return std::make_unique<BaselineModel>(
      24, 4, std::make_shared<Mlp>(MlpSpec{28, 24, {32}, Activation::relu, seed}), mode);
}

TrainConfig quick(std::size_t updates, std::size_t eval_every) {
  TrainConfig c;
  c.updates = updates;
  c.eval_every = eval_every;
  c.batch_size = 64;
  c.seed = 5;
  return c;
}

const TransitionDataset& parking_small() {
  static const TransitionDataset d = generate_dataset("parking2", 20, 20, Policy::uniform_random, 1);
  return d;
}

}  // namespace

TEST(Split, SizesCoverAndDisjointness) {
  const DataSplit s = split_indices(1000, 0.1, 4);
  EXPECT_EQ(s.test.size(), 100u);
  EXPECT_EQ(s.train.size(), 900u);
  std::set<std::size_t> all(s.train.begin(), s.train.end());
  all.insert(s.test.begin(), s.test.end());
  EXPECT_EQ(all.size(), 1000u);
  EXPECT_EQ(*all.rbegin(), 999u);
}

TEST(Split, DeterministicAndSeedDependent) {
  EXPECT_EQ(split_indices(500, 0.2, 1).test, split_indices(500, 0.2, 1).test);
  EXPECT_NE(split_indices(500, 0.2, 1).test, split_indices(500, 0.2, 2).test);
}

TEST(Split, AtLeastOneTestSample) {
  EXPECT_EQ(split_indices(3, 0.01, 0).test.size(), 1u);
  EXPECT_THROW(split_indices(1, 0.5, 0), std::invalid_argument);
  EXPECT_THROW(split_indices(10, 1.0, 0), std::invalid_argument);
}

TEST(PairwiseSum, MatchesExactSums) {
  std::vector<double> v(1000);
  std::iota(v.begin(), v.end(), 1.0);
  EXPECT_EQ(pairwise_sum(v), 500500.0);
  EXPECT_EQ(pairwise_sum(std::vector<double>{}), 0.0);
  // 1 + 1e-16 * n drifts under naive summation but not pairwise.
  std::vector<double> w(1 << 20, 0.1);
  EXPECT_NEAR(pairwise_sum(w), 0.1 * (1 << 20), 1e-8);
}

TEST(EvaluateMse, MatchesHandComputation) {
  auto id = std::make_shared<FunctionRegressor>(3, 2, [](const Vector& in) {
    return Vector(in.head(2));
  });
  BaselineModel m(2, 1, id, Mode::absolute);
  TransitionDataset d;
  d.env_id = "toy";
  d.n = 2;
  d.n_u = 1;
  d.triples = {{StateVector{1, 2}, ControlVector{0}, StateVector{1, 4}},
               {StateVector{0, 0}, ControlVector{0}, StateVector{3, 0}}};
  const std::vector<std::size_t> both{0, 1}, first{0};
  EXPECT_DOUBLE_EQ(evaluate_mse(m, d, both), (4.0 + 9.0) / 4.0);
  EXPECT_DOUBLE_EQ(evaluate_mse(m, d, first), 2.0);
}

TEST(Train, MetricScheduleIncludesStartAndEnd) {
  const auto model = small_model(true);
  const auto metrics = train(*model, parking_small(), quick(105, 50));
  std::vector<std::size_t> updates;
  for (const auto& m : metrics) updates.push_back(m.update);
  EXPECT_EQ(updates, (std::vector<std::size_t>{0, 50, 100, 105}));
  for (const auto& m : metrics) {
    EXPECT_TRUE(std::isfinite(m.train_mse));
    EXPECT_GE(m.wall_time_s, 0.0);
  }
}

TEST(Train, DeterministicGivenSeeds) {
  auto a = small_model(false), b = small_model(false);
  const auto ma = train(*a, parking_small(), quick(60, 20));
  const auto mb = train(*b, parking_small(), quick(60, 20));
  ASSERT_EQ(ma.size(), mb.size());
  for (std::size_t i = 0; i < ma.size(); ++i) {
    EXPECT_EQ(ma[i].train_mse, mb[i].train_mse);
    EXPECT_EQ(ma[i].test_mse, mb[i].test_mse);
  }
  auto c = small_model(false);
  TrainConfig other = quick(60, 20);
  other.seed = 6;
  EXPECT_NE(train(*c, parking_small(), other).back().test_mse, ma.back().test_mse);
}

TEST(Train, LearnsAConstantTarget) {
  TransitionDataset d;
  d.env_id = "toy";
  d.n = 3;
  d.n_u = 1;
  Rng rng(2);
  for (int i = 0; i < 512; ++i) {
    d.triples.push_back({StateVector{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)},
                         ControlVector{rng.uniform(-1, 1)}, StateVector{0.5, -0.25, 1.0}});
  }
  BaselineModel m(3, 1, std::make_shared<Mlp>(MlpSpec{4, 3, {16}, Activation::tanh, 1}),
                  Mode::absolute);
  TrainConfig cfg = quick(2000, 500);
  cfg.learning_rate = 1e-2;
  const auto metrics = train(m, d, cfg);
  EXPECT_LT(metrics.back().test_mse, 1e-4);
  EXPECT_LT(metrics.back().test_mse, 1e-3 * metrics.front().test_mse);
}

TEST(Train, ReducesErrorOnParking) {
  const auto model = small_model(true);
  const auto metrics = train(*model, parking_small(), quick(300, 300));
  EXPECT_LT(metrics.back().test_mse, 0.5 * metrics.front().test_mse);
}

TEST(Train, OrbitCollapseLeavesSymmetryMetricsUnchanged) {
  const TransitionDataset& d = parking_small();
  const TransitionDataset moved = transform_dataset(d, *make_parking_group(), 42);
  const auto run = [](bool sym, const TransitionDataset& data) {
    auto m = small_model(sym);
    return train(*m, data, quick(200, 50));
  };
  const auto sym_a = run(true, d), sym_b = run(true, moved);
  const auto base_a = run(false, d), base_b = run(false, moved);
  ASSERT_EQ(sym_a.size(), sym_b.size());
  double base_gap = 0;
  for (std::size_t i = 0; i < sym_a.size(); ++i) {
    EXPECT_NEAR(sym_a[i].train_mse, sym_b[i].train_mse, 1e-9);
    EXPECT_NEAR(sym_a[i].test_mse, sym_b[i].test_mse, 1e-9);
    base_gap = std::max(base_gap, std::abs(base_a[i].test_mse - base_b[i].test_mse));
  }
  EXPECT_GT(base_gap, 1e-6);
}

TEST(Train, NonFiniteLossIsReportedAsDivergence) {
  TransitionDataset d = parking_small();
  for (auto& t : d.triples) t.x_next = StateVector(Vector(t.x_next.values() * 1e200));
  auto m = small_model(false, 3, Mode::absolute);
  try {
    train(*m, d, quick(10, 5));
    FAIL() << "expected divergence";
  } catch (const TrainingDiverged& e) {
    EXPECT_NE(std::string(e.what()).find("diverged"), std::string::npos);
  }
}

TEST(Train, RejectsBadInputs) {
  auto m = small_model(true);
  TrainConfig bad = quick(10, 5);
  bad.test_fraction = 0;
  EXPECT_THROW(train(*m, parking_small(), bad), std::invalid_argument);
  bad = quick(0, 5);
  EXPECT_THROW(train(*m, parking_small(), bad), std::invalid_argument);
  TransitionDataset reacher = generate_dataset("reacher", 2, 5, Policy::uniform_random, 1);
  EXPECT_THROW(train(*m, reacher, quick(10, 5)), std::invalid_argument);
  BaselineModel fn(24, 4, std::make_shared<FunctionRegressor>(28, 24, [](const Vector&) {
    return Vector(Vector::Zero(24));
  }));
  EXPECT_THROW(train(fn, parking_small(), quick(10, 5)), std::invalid_argument);
}

TEST(Metrics, CsvLayout) {
  std::ostringstream out;
  write_metrics_csv(out, {{0, 1.5, 2.5, 0.0}, {10, 0.5, 0.25, 1.0}});
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "update,train_mse,test_mse,wall_time_s");
  std::getline(in, line);
  EXPECT_EQ(line.substr(0, 2), "0,");
  int rows = 1;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 2);
}
