#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

namespace symred {

/// splitmix64 step; used for seeding and for deriving sub-seeds.
std::uint64_t splitmix64(std::uint64_t& state);

/// Derives an independent stream seed from a master seed and a stream index.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

/// xoshiro256** generator seeded through splitmix64.
///
/// Every draw is defined bit-for-bit here (no <random> distributions) so that
/// datasets, splits and weight initialisation are reproducible across
/// standard libraries.
///  - uniform01: (next() >> 11) * 2^-53, in [0, 1)
///  - uniform(a, b): a + (b - a) * uniform01()
///  - below(n): rejection sampling on next() for an unbiased index in [0, n)
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next();
  double uniform01();
  double uniform(double lo, double hi);
  std::size_t below(std::size_t n);

  /// Fisher-Yates, walking from the back.
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = below(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t s_[4];
};

}  // namespace symred
