#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "symred/mlp.hpp"
#include "symred/model.hpp"

namespace symred {

class ModelFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kModelFormatVersion = 1;

/// Model container: one line of JSON header
///   {"format":"symred-model","format_version":1,"kind":"symmetry"|"baseline",
///    "group_id":..,"mode":..,"n":..,"n_u":..,"spec":{..},"seeds":{"init":..,"train":..},
///    "param_count":..,"checksum":"<fnv1a-64 hex of the parameter bytes>"}
/// terminated by '\n', followed by param_count little-endian IEEE-754
/// float64 values in Mlp storage order.
struct ModelHeader {
  int format_version = kModelFormatVersion;
  std::string kind;
  std::string group_id;
  Mode mode = Mode::delta;
  std::size_t n = 0;
  std::size_t n_u = 0;
  MlpSpec spec;
  std::uint64_t train_seed = 0;
};

/// The model's regressor must be an Mlp.
void save_model(const std::string& path, const DynamicsModel& model, std::uint64_t train_seed = 0);

struct ModelFile {
  ModelHeader header;
  std::shared_ptr<Mlp> mlp;
};

/// Throws ModelFormatError on a version mismatch, malformed header, size
/// mismatch or checksum failure.
ModelFile read_model_file(const std::string& path);

/// Rebuilds the model, looking the group up by id for symmetry models. If
/// expected_group_id is given and differs from the stored id, throws
/// ModelFormatError.
std::unique_ptr<DynamicsModel> load_model(const std::string& path,
                                          const std::optional<std::string>& expected_group_id = {});

}  // namespace symred
