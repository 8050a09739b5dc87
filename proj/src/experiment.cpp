#include "symred/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "symred/groups.hpp"
#include "symred/rng.hpp"

namespace symred {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& text, const std::string& where) {
  std::istringstream in(text);
  T v{};
  in >> v;
  if (!in || !in.eof()) throw std::invalid_argument(where + ": cannot parse '" + text + "'");
  return v;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (runs == 0) throw std::invalid_argument("runs must be at least 1");
  if (architectures.empty()) throw std::invalid_argument("architecture grid is empty");
  train.validate();
}

std::string default_group_for_env(const std::string& env_id) {
  if (env_id == "parking2" || env_id == "reacher") return env_id;
  throw std::invalid_argument("unknown environment '" + env_id + "'");
}

ExperimentConfig default_experiment(const std::string& env_id) {
  ExperimentConfig cfg;
  cfg.env_id = env_id;
  cfg.group_id = default_group_for_env(env_id);
  const std::size_t width = env_id == "reacher" ? 64 : 128;
  cfg.architectures = {{width}, {width, width}, {width, width, width}};
  cfg.train.updates = env_id == "reacher" ? 10000 : 20000;
  cfg.train.eval_every = 250;
  return cfg;
}

Architecture parse_architecture(const std::string& text) {
  Architecture arch;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto w = parse_number<long long>(item, "architecture");
    if (w <= 0) throw std::invalid_argument("architecture widths must be positive: '" + text + "'");
    arch.push_back(static_cast<std::size_t>(w));
  }
  return arch;
}

std::vector<Architecture> parse_architectures(const std::string& text) {
  std::vector<Architecture> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ';')) {
    if (trim(item).empty()) continue;
    out.push_back(parse_architecture(item));
  }
  if (out.empty()) throw std::invalid_argument("empty architecture list '" + text + "'");
  return out;
}

std::string architecture_label(const Architecture& arch) {
  if (arch.empty()) return "linear";
  if (std::all_of(arch.begin(), arch.end(), [&](std::size_t w) { return w == arch.front(); }))
    return std::to_string(arch.size()) + "x" + std::to_string(arch.front());
  std::string s;
  for (std::size_t i = 0; i < arch.size(); ++i) s += (i ? "-" : "") + std::to_string(arch[i]);
  return s;
}

void apply_config_text(ExperimentConfig& cfg, std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(line_no);
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument(where + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "env") cfg.env_id = value;
    else if (key == "group") cfg.group_id = value;
    else if (key == "archs") cfg.architectures = parse_architectures(value);
    else if (key == "activation") cfg.activation = parse_activation(value);
    else if (key == "mode") cfg.mode = parse_mode(value);
    else if (key == "learning_rate") cfg.train.learning_rate = parse_number<double>(value, where);
    else if (key == "batch_size") cfg.train.batch_size = parse_number<std::size_t>(value, where);
    else if (key == "updates") cfg.train.updates = parse_number<std::size_t>(value, where);
    else if (key == "eval_every") cfg.train.eval_every = parse_number<std::size_t>(value, where);
    else if (key == "test_fraction") cfg.train.test_fraction = parse_number<double>(value, where);
    else if (key == "seed") cfg.train.seed = parse_number<std::uint64_t>(value, where);
    else if (key == "data") cfg.dataset_path = value;
    else if (key == "out") cfg.output_dir = value;
    else if (key == "runs") cfg.runs = parse_number<std::size_t>(value, where);
    else if (key == "jobs") cfg.jobs = parse_number<std::size_t>(value, where);
    else throw std::invalid_argument(where + ": unknown key '" + key + "'");
  }
}

void apply_config_file(ExperimentConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  apply_config_text(cfg, in, path);
}

std::unique_ptr<DynamicsModel> build_model(const TransitionDataset& data,
                                           const std::string& group_id, bool symmetry,
                                           const Architecture& hidden, Activation activation,
                                           Mode mode, std::uint64_t init_seed) {
  MlpSpec spec;
  spec.output_dim = data.n;
  spec.hidden = hidden;
  spec.activation = activation;
  spec.seed = init_seed;
  if (!symmetry) {
    spec.input_dim = data.n + data.n_u;
    return std::make_unique<BaselineModel>(data.n, data.n_u, std::make_shared<Mlp>(spec), mode);
  }
  auto group = make_group(group_id);
  if (group->state_dim() != data.n || group->control_dim() != data.n_u) {
    throw std::invalid_argument("group '" + group_id + "' acts on n=" +
                                std::to_string(group->state_dim()) + ", n_u=" +
                                std::to_string(group->control_dim()) + " but the dataset has n=" +
                                std::to_string(data.n) + ", n_u=" + std::to_string(data.n_u));
  }
  spec.input_dim = group->reduced_dim() + group->control_dim();
  return std::make_unique<SymmetryReducedModel>(std::move(group), std::make_shared<Mlp>(spec), mode);
}

std::uint64_t run_seed(const ExperimentConfig& cfg, std::size_t run) {
  return derive_seed(cfg.train.seed, run);
}

RunOutcome run_single(const ExperimentConfig& cfg, const TransitionDataset& data,
                      std::size_t arch_index, bool symmetry, std::size_t run) {
  RunOutcome out;
  out.arch_index = arch_index;
  out.symmetry = symmetry;
  out.run = run;
  out.seed = run_seed(cfg, run);
  auto model = build_model(data, cfg.group_id, symmetry, cfg.architectures.at(arch_index),
                           cfg.activation, cfg.mode, derive_seed(out.seed, 0));
  out.input_dim = model->input_dim();
  TrainConfig tc = cfg.train;
  tc.seed = out.seed;
  try {
    out.metrics = train(*model, data, tc);
  } catch (const TrainingDiverged& e) {
    out.diverged = true;
    out.error = e.what();
    out.metrics = e.metrics();
  }
  return out;
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return std::nan("");
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_stddev(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

CompareReport run_compare(const ExperimentConfig& cfg, const TransitionDataset& data,
                          const ProgressFn& progress) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  struct Cell {
    std::size_t arch;
    bool symmetry;
    std::size_t run;
  };
  std::vector<Cell> cells;
  for (std::size_t a = 0; a < cfg.architectures.size(); ++a)
    for (bool sym : {true, false})
      for (std::size_t r = 0; r < cfg.runs; ++r) cells.push_back({a, sym, r});

  CompareReport report;
  report.runs.resize(cells.size());
  std::size_t jobs = cfg.jobs ? cfg.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, cells.size());
  std::atomic<std::size_t> next{0};
  std::mutex progress_mutex;
  std::exception_ptr failure;
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        report.runs[i] = run_single(cfg, data, cells[i].arch, cells[i].symmetry, cells[i].run);
      } catch (...) {
        std::lock_guard lock(progress_mutex);
        if (!failure) failure = std::current_exception();
        continue;
      }
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(report.runs[i]);
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  for (std::size_t a = 0; a < cfg.architectures.size(); ++a) {
    for (bool sym : {true, false}) {
      SummaryRow row;
      row.arch = architecture_label(cfg.architectures[a]);
      row.symmetry = sym;
      std::vector<double> finals;
      for (const RunOutcome& r : report.runs) {
        if (r.arch_index != a || r.symmetry != sym) continue;
        if (r.diverged || r.metrics.empty()) {
          ++row.diverged;
          continue;
        }
        finals.push_back(r.metrics.back().test_mse);
      }
      row.completed = finals.size();
      row.final_test_mse_mean = mean(finals);
      row.final_test_mse_std = sample_stddev(finals);
      report.summary.push_back(row);
    }
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

std::string run_info_json(const ExperimentConfig& cfg, const RunOutcome& run) {
  nlohmann::ordered_json j;
  j["env_id"] = cfg.env_id;
  j["group_id"] = run.symmetry ? cfg.group_id : "none";
  j["symmetry"] = run.symmetry;
  j["arch"] = architecture_label(cfg.architectures.at(run.arch_index));
  j["hidden"] = cfg.architectures.at(run.arch_index);
  j["activation"] = to_string(cfg.activation);
  j["mode"] = to_string(cfg.mode);
  j["input_dim"] = run.input_dim;
  j["run"] = run.run;
  j["seed"] = run.seed;
  j["init_seed"] = derive_seed(run.seed, 0);
  j["optimizer"] = {{"name", "adam"},
                    {"learning_rate", cfg.train.learning_rate},
                    {"beta1", 0.9},
                    {"beta2", 0.999},
                    {"epsilon", 1e-8}};
  j["batch_size"] = cfg.train.batch_size;
  j["updates"] = cfg.train.updates;
  j["eval_every"] = cfg.train.eval_every;
  j["test_fraction"] = cfg.train.test_fraction;
  j["loss"] = "mse";
  j["diverged"] = run.diverged;
  if (run.diverged) j["error"] = run.error;
  return j.dump(2);
}

void write_compare_outputs(const CompareReport& report, const ExperimentConfig& cfg,
                           const std::string& dir) {
  fs::create_directories(fs::path(dir) / "runs");
  auto open = [](const fs::path& p) {
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
    return out;
  };

  for (const RunOutcome& r : report.runs) {
    const std::string stem = architecture_label(cfg.architectures[r.arch_index]) + "_" +
                             (r.symmetry ? "sym" : "base") + "_run" + std::to_string(r.run);
    auto csv = open(fs::path(dir) / "runs" / (stem + ".csv"));
    write_metrics_csv(csv, r.metrics);
    auto info = open(fs::path(dir) / "runs" / (stem + ".json"));
    info << run_info_json(cfg, r) << '\n';
  }

  auto summary = open(fs::path(dir) / "summary.csv");
  summary << "arch,symmetry,final_test_mse_mean,final_test_mse_std\n";
  for (const SummaryRow& row : report.summary) {
    summary << row.arch << ',' << (row.symmetry ? "on" : "off") << ','
            << format_double(row.final_test_mse_mean) << ',' << format_double(row.final_test_mse_std)
            << '\n';
  }

  // Mean and std of each curve over runs at every recorded update index.
  auto curves = open(fs::path(dir) / "curves.csv");
  curves << "arch,symmetry,update,train_mse_mean,test_mse_mean,test_mse_std\n";
  for (std::size_t a = 0; a < cfg.architectures.size(); ++a) {
    for (bool sym : {true, false}) {
      std::map<std::size_t, std::pair<std::vector<double>, std::vector<double>>> by_update;
      for (const RunOutcome& r : report.runs) {
        if (r.arch_index != a || r.symmetry != sym || r.diverged) continue;
        for (const MetricRecord& m : r.metrics) {
          by_update[m.update].first.push_back(m.train_mse);
          by_update[m.update].second.push_back(m.test_mse);
        }
      }
      for (const auto& [update, values] : by_update) {
        curves << architecture_label(cfg.architectures[a]) << ',' << (sym ? "on" : "off") << ','
               << update << ',' << format_double(mean(values.first)) << ','
               << format_double(mean(values.second)) << ','
               << format_double(sample_stddev(values.second)) << '\n';
      }
    }
  }

  auto md = open(fs::path(dir) / "report.md");
  md << "# Dynamics learning with and without symmetry: " << cfg.env_id << "\n\n";
  md << "| setting | value |\n|---|---|\n";
  md << "| dataset | " << cfg.dataset_path << " |\n";
  md << "| group | " << cfg.group_id << " |\n";
  md << "| mode | " << to_string(cfg.mode) << " |\n";
  md << "| activation | " << to_string(cfg.activation) << " |\n";
  md << "| optimizer | adam lr=" << cfg.train.learning_rate
     << " betas=(0.9, 0.999) eps=1e-8 |\n";
  md << "| batch size | " << cfg.train.batch_size << " |\n";
  md << "| updates | " << cfg.train.updates << " (eval every " << cfg.train.eval_every << ") |\n";
  md << "| test fraction | " << cfg.train.test_fraction << " |\n";
  md << "| runs | " << cfg.runs << " (seed " << cfg.train.seed << ") |\n";
  md << "| wall time | " << std::fixed << std::setprecision(1) << report.seconds << " s |\n\n";
  md.unsetf(std::ios::floatfield);
  md << "Final test error (mean squared error of predicted next states, original coordinates):\n\n";
  md << "| arch | symmetry | final_test_mse_mean | final_test_mse_std | diverged |\n";
  md << "|---|---|---|---|---|\n";
  for (const SummaryRow& row : report.summary) {
    md << "| " << row.arch << " | " << (row.symmetry ? "on" : "off") << " | "
       << std::scientific << std::setprecision(4) << row.final_test_mse_mean << " | "
       << row.final_test_mse_std << " | " << row.diverged << " |\n";
  }
  for (const RunOutcome& r : report.runs) {
    if (r.diverged) {
      md << "\nDIVERGED: " << architecture_label(cfg.architectures[r.arch_index]) << " symmetry "
         << (r.symmetry ? "on" : "off") << " run " << r.run << ": " << r.error << "\n";
    }
  }
}

}  // namespace symred
