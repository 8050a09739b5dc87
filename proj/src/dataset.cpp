#include "symred/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "symred/rng.hpp"

namespace symred {

namespace {

template <class V>
void write_array(std::ostream& out, const V& v) {
  out << '[';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out << ',';
    out << format_double(v[i]);
  }
  out << ']';
}

template <class V>
V read_array(const nlohmann::json& obj, const char* key, std::size_t expected, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_array()) {
    throw DatasetError("line " + std::to_string(line) + ": missing array field \"" + key + "\"");
  }
  if (it->size() != expected) {
    throw DatasetError("line " + std::to_string(line) + ": field \"" + key + "\" has length " +
                       std::to_string(it->size()) + ", header declares " +
                       std::to_string(expected));
  }
  V v = V::zeros(expected);
  for (std::size_t i = 0; i < expected; ++i) {
    const auto& e = (*it)[i];
    if (!e.is_number())
      throw DatasetError("line " + std::to_string(line) + ": non-numeric entry in \"" + key + "\"");
    v[i] = e.get<double>();
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void TransitionDataset::validate() const {
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const Transition& t = triples[i];
    if (t.x.size() != n || t.x_next.size() != n || t.u.size() != n_u) {
      throw DatasetError("triple " + std::to_string(i) + " does not match dims n=" +
                         std::to_string(n) + ", n_u=" + std::to_string(n_u));
    }
    if (!t.x.all_finite() || !t.u.all_finite() || !t.x_next.all_finite())
      throw DatasetError("triple " + std::to_string(i) + " has non-finite entries");
  }
}

TransitionDataset generate_dataset(const std::string& env_id, std::size_t episodes,
                                   std::size_t horizon, Policy policy, std::uint64_t seed) {
  if (episodes == 0 || horizon == 0)
    throw std::invalid_argument("generate_dataset: episodes and horizon must be positive");
  const auto env = make_environment(env_id);
  TransitionDataset data;
  data.env_id = env->id();
  data.n = env->state_dim();
  data.n_u = env->control_dim();
  data.seed = seed;
  data.triples.reserve(episodes * horizon);
  for (std::size_t ep = 0; ep < episodes; ++ep) {
    Rng rng(derive_seed(seed, ep));
    StateVector x = env->initial_state(rng);
    for (std::size_t k = 0; k < horizon; ++k) {
      ControlVector u = env->control(policy, x, rng);
      StateVector next = env->step(x, u);
      data.triples.push_back(Transition{x, std::move(u), next});
      x = std::move(next);
    }
  }
  return data;
}

DatasetRecipe default_dataset_recipe(const std::string& env_id) {
  if (env_id == "parking2") return {400, 50, 7};
  if (env_id == "reacher") return {200, 50, 7};
  throw std::invalid_argument("unknown environment '" + env_id + "'");
}

void write_dataset(std::ostream& out, const TransitionDataset& data) {
  data.validate();
  out << "{\"env_id\":" << nlohmann::json(data.env_id).dump() << ",\"n\":" << data.n
      << ",\"n_u\":" << data.n_u << ",\"seed\":" << data.seed << ",\"count\":" << data.size()
      << "}\n";
  for (const Transition& t : data.triples) {
    out << "{\"x\":";
    write_array(out, t.x);
    out << ",\"u\":";
    write_array(out, t.u);
    out << ",\"xn\":";
    write_array(out, t.x_next);
    out << "}\n";
  }
}

void write_dataset_file(const std::string& path, const TransitionDataset& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DatasetError("cannot open '" + path + "' for writing");
  write_dataset(out, data);
  if (!out) throw DatasetError("write failed for '" + path + "'");
}

TransitionDataset read_dataset(std::istream& in) {
  std::string text;
  std::size_t line_no = 0;
  if (!std::getline(in, text)) throw DatasetError("line 1: missing header");
  ++line_no;

  TransitionDataset data;
  std::size_t count = 0;
  try {
    const auto header = nlohmann::json::parse(text);
    data.env_id = header.at("env_id").get<std::string>();
    data.n = header.at("n").get<std::size_t>();
    data.n_u = header.at("n_u").get<std::size_t>();
    data.seed = header.at("seed").get<std::uint64_t>();
    count = header.at("count").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw DatasetError("line 1: malformed header: " + std::string(e.what()));
  }
  if (data.n == 0) throw DatasetError("line 1: header declares n = 0");

  data.triples.reserve(count);
  while (std::getline(in, text)) {
    ++line_no;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw DatasetError("line " + std::to_string(line_no) + ": malformed JSON: " + e.what());
    }
    if (!obj.is_object()) throw DatasetError("line " + std::to_string(line_no) + ": expected an object");
    Transition t{read_array<StateVector>(obj, "x", data.n, line_no),
                 read_array<ControlVector>(obj, "u", data.n_u, line_no),
                 read_array<StateVector>(obj, "xn", data.n, line_no)};
    data.triples.push_back(std::move(t));
  }
  if (data.triples.size() != count) {
    throw DatasetError("header count " + std::to_string(count) + " does not match " +
                       std::to_string(data.triples.size()) + " data lines");
  }
  data.validate();
  return data;
}

TransitionDataset read_dataset_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError("cannot open dataset '" + path + "'");
  return read_dataset(in);
}

}  // namespace symred
