#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "symred/experiment.hpp"

using namespace symred;
namespace fs = std::filesystem;

namespace {

std::string read_all(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

/// CSV text with the wall_time_s column dropped.
std::string without_wall_time(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + '\n';
  return out;
}

ExperimentConfig tiny(const fs::path& out) {
  ExperimentConfig cfg = default_experiment("parking2");
  cfg.architectures = {{8}, {8, 8}, {8, 8, 8}};
  cfg.train.updates = 6;
  cfg.train.eval_every = 3;
  cfg.train.batch_size = 16;
  cfg.runs = 4;
  cfg.jobs = 2;
  cfg.output_dir = out.string();
  return cfg;
}

const TransitionDataset& data() {
  static const TransitionDataset d = generate_dataset("parking2", 4, 10, Policy::uniform_random, 3);
  return d;
}

}  // namespace

TEST(Experiment, Defaults) {
  const ExperimentConfig p = default_experiment("parking2");
  EXPECT_EQ(p.group_id, "parking2");
  EXPECT_EQ(p.architectures,
            (std::vector<Architecture>{{128}, {128, 128}, {128, 128, 128}}));
  EXPECT_EQ(p.train.updates, 20000u);
  EXPECT_EQ(p.train.eval_every, 250u);
  EXPECT_EQ(p.runs, 4u);
  const ExperimentConfig r = default_experiment("reacher");
  EXPECT_EQ(r.architectures.front(), Architecture{64});
  EXPECT_EQ(r.train.updates, 10000u);
  EXPECT_THROW(default_experiment("pendulum"), std::invalid_argument);
}

TEST(Experiment, ArchitectureParsingAndLabels) {
  EXPECT_EQ(parse_architectures("128;128,128"), (std::vector<Architecture>{{128}, {128, 128}}));
  EXPECT_EQ(parse_architecture(" 64 , 32 "), (Architecture{64, 32}));
  EXPECT_THROW(parse_architectures(""), std::invalid_argument);
  EXPECT_THROW(parse_architecture("64,-1"), std::invalid_argument);
  EXPECT_THROW(parse_architecture("64,x"), std::invalid_argument);
  EXPECT_EQ(architecture_label({128, 128}), "2x128");
  EXPECT_EQ(architecture_label({128, 64}), "128-64");
}

TEST(Experiment, ConfigText) {
  ExperimentConfig cfg = default_experiment("reacher");
  std::istringstream in(
      "# comment\n"
      "archs = 32;32,32\n"
      "activation = tanh  # trailing\n"
      "mode = absolute\n"
      "learning_rate = 0.002\n"
      "batch_size = 128\n"
      "updates = 500\n"
      "eval_every = 50\n"
      "test_fraction = 0.2\n"
      "seed = 9\n"
      "runs = 2\n"
      "jobs = 1\n"
      "data = d.jsonl\n"
      "out = o\n");
  apply_config_text(cfg, in, "cfg");
  EXPECT_EQ(cfg.architectures, (std::vector<Architecture>{{32}, {32, 32}}));
  EXPECT_EQ(cfg.activation, Activation::tanh);
  EXPECT_EQ(cfg.mode, Mode::absolute);
  EXPECT_DOUBLE_EQ(cfg.train.learning_rate, 0.002);
  EXPECT_EQ(cfg.train.batch_size, 128u);
  EXPECT_EQ(cfg.train.updates, 500u);
  EXPECT_EQ(cfg.train.eval_every, 50u);
  EXPECT_DOUBLE_EQ(cfg.train.test_fraction, 0.2);
  EXPECT_EQ(cfg.train.seed, 9u);
  EXPECT_EQ(cfg.runs, 2u);
  EXPECT_EQ(cfg.dataset_path, "d.jsonl");
  EXPECT_EQ(cfg.output_dir, "o");
}

TEST(Experiment, ConfigErrorsNameTheLine) {
  ExperimentConfig cfg;
  std::istringstream unknown("updates = 5\nbogus = 1\n");
  try {
    apply_config_text(cfg, unknown, "f.cfg");
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("f.cfg:2"), std::string::npos);
  }
  std::istringstream bad_number("updates = five\n");
  EXPECT_THROW(apply_config_text(cfg, bad_number, "f"), std::invalid_argument);
  std::istringstream no_eq("updates 5\n");
  EXPECT_THROW(apply_config_text(cfg, no_eq, "f"), std::invalid_argument);
  EXPECT_THROW(apply_config_file(cfg, "/nonexistent/x.cfg"), std::invalid_argument);
}

TEST(Experiment, Statistics) {
  EXPECT_DOUBLE_EQ(mean({1, 2, 3, 4}), 2.5);
  EXPECT_DOUBLE_EQ(sample_stddev({1, 2, 3, 4}), std::sqrt(5.0 / 3.0));
  EXPECT_EQ(sample_stddev({7}), 0.0);
}

TEST(Experiment, BuildModelChecksCompatibility) {
  const auto sym = build_model(data(), "parking2", true, {16}, Activation::relu, Mode::delta, 1);
  EXPECT_EQ(sym->input_dim(), 8u);
  const auto base = build_model(data(), "parking2", false, {16}, Activation::relu, Mode::delta, 1);
  EXPECT_EQ(base->input_dim(), 28u);
  EXPECT_THROW(build_model(data(), "reacher", true, {16}, Activation::relu, Mode::delta, 1),
               std::invalid_argument);
}

TEST(Experiment, CompareGridProducesEveryArtifact) {
  const fs::path out = fs::temp_directory_path() / "symred_compare_test";
  fs::remove_all(out);
  const ExperimentConfig cfg = tiny(out);
  const CompareReport report = run_compare(cfg, data());
  EXPECT_EQ(report.runs.size(), 24u);
  write_compare_outputs(report, cfg, out.string());

  std::size_t csvs = 0;
  for (const auto& e : fs::directory_iterator(out / "runs")) csvs += e.path().extension() == ".csv";
  EXPECT_EQ(csvs, 24u);
  EXPECT_EQ(first_line(out / "summary.csv"),
            "arch,symmetry,final_test_mse_mean,final_test_mse_std");
  EXPECT_EQ(report.summary.size(), 6u);
  EXPECT_TRUE(fs::exists(out / "curves.csv"));

  const std::string md = read_all(out / "report.md");
  EXPECT_NE(md.find("| updates | 6"), std::string::npos);
  EXPECT_NE(md.find("final_test_mse_mean"), std::string::npos);
  EXPECT_NE(read_all(out / "runs" / "1x8_sym_run0.json").find("\"learning_rate\""),
            std::string::npos);

  // Summary statistics recomputed from the per-run outcomes.
  for (const SummaryRow& row : report.summary) {
    std::vector<double> finals;
    for (const RunOutcome& r : report.runs)
      if (architecture_label(cfg.architectures[r.arch_index]) == row.arch && r.symmetry == row.symmetry)
        finals.push_back(r.metrics.back().test_mse);
    ASSERT_EQ(finals.size(), 4u);
    EXPECT_DOUBLE_EQ(row.final_test_mse_mean, mean(finals));
    EXPECT_DOUBLE_EQ(row.final_test_mse_std, sample_stddev(finals));
  }
  fs::remove_all(out);
}

TEST(Experiment, CompareIsDeterministicAcrossWorkerCounts) {
  const fs::path a = fs::temp_directory_path() / "symred_compare_a";
  const fs::path b = fs::temp_directory_path() / "symred_compare_b";
  ExperimentConfig ca = tiny(a), cb = tiny(b);
  ca.architectures = cb.architectures = {{8}};
  ca.runs = cb.runs = 2;
  ca.jobs = 1;
  cb.jobs = 3;
  write_compare_outputs(run_compare(ca, data()), ca, a.string());
  write_compare_outputs(run_compare(cb, data()), cb, b.string());
  EXPECT_EQ(read_all(a / "summary.csv"), read_all(b / "summary.csv"));
  EXPECT_EQ(without_wall_time(read_all(a / "runs" / "1x8_base_run1.csv")),
            without_wall_time(read_all(b / "runs" / "1x8_base_run1.csv")));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Experiment, MethodsOfOneRunShareTheSplitSeed) {
  const ExperimentConfig cfg = tiny("unused");
  const RunOutcome sym = run_single(cfg, data(), 0, true, 1);
  const RunOutcome base = run_single(cfg, data(), 0, false, 1);
  EXPECT_EQ(sym.seed, base.seed);
  EXPECT_NE(run_seed(cfg, 0), run_seed(cfg, 1));
}

TEST(Experiment, DivergedRunsAreFlaggedAndOthersContinue) {
  TransitionDataset wild = data();
  for (std::size_t i = 0; i < wild.size(); i += 2)
    wild.triples[i].x_next = StateVector(Vector(wild.triples[i].x_next.values() * 1e200));
  const fs::path out = fs::temp_directory_path() / "symred_compare_diverged";
  ExperimentConfig cfg = tiny(out);
  cfg.architectures = {{8}};
  cfg.runs = 2;
  cfg.mode = Mode::absolute;
  const CompareReport report = run_compare(cfg, wild);
  ASSERT_EQ(report.runs.size(), 4u);
  for (const RunOutcome& r : report.runs) EXPECT_TRUE(r.diverged);
  write_compare_outputs(report, cfg, out.string());
  EXPECT_NE(read_all(out / "report.md").find("DIVERGED"), std::string::npos);
  EXPECT_EQ(report.summary[0].diverged, 2u);
  fs::remove_all(out);
}
