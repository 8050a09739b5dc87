#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "symred/sim.hpp"
#include "symred/types.hpp"

namespace symred {

struct Transition {
  StateVector x;
  ControlVector u;
  StateVector x_next;
};

struct TransitionDataset {
  std::string env_id;
  std::size_t n = 0;
  std::size_t n_u = 0;
  std::uint64_t seed = 0;
  std::vector<Transition> triples;

  std::size_t size() const { return triples.size(); }
  /// Throws DatasetError if any triple has the wrong dimensions or is non-finite.
  void validate() const;
};

class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rolls out `episodes` episodes of `horizon` steps. Episode k uses the
/// stream derive_seed(seed, k); output is ordered by episode then step.
TransitionDataset generate_dataset(const std::string& env_id, std::size_t episodes,
                                   std::size_t horizon, Policy policy, std::uint64_t seed);

/// Default desk-scale collection for an environment.
struct DatasetRecipe {
  std::size_t episodes;
  std::size_t horizon;
  std::uint64_t seed;
};
DatasetRecipe default_dataset_recipe(const std::string& env_id);

/// JSONL: a header object {"env_id", "n", "n_u", "seed", "count"} followed by
/// one {"x": [...], "u": [...], "xn": [...]} object per line. Numbers are
/// written with 17 significant digits, so reading back is exact.
void write_dataset(std::ostream& out, const TransitionDataset& data);
void write_dataset_file(const std::string& path, const TransitionDataset& data);

/// Throws DatasetError naming the 1-based line on malformed input, dimension
/// mismatches, or a count that disagrees with the number of data lines.
TransitionDataset read_dataset(std::istream& in);
TransitionDataset read_dataset_file(const std::string& path);

/// Formats a double with 17 significant digits.
std::string format_double(double v);

}  // namespace symred
