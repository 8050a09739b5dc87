#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>

#include <Eigen/Core>

namespace symred {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A real vector carrying a tag so that states, controls and reduced states
/// cannot be passed for one another.
template <class Tag>
class TaggedVector {
 public:
  TaggedVector() = default;
  explicit TaggedVector(Vector values) : values_(std::move(values)) {}
  TaggedVector(std::initializer_list<double> values)
      : values_(static_cast<Eigen::Index>(values.size())) {
    Eigen::Index i = 0;
    for (double v : values) values_[i++] = v;
  }

  static TaggedVector zeros(std::size_t n) {
    return TaggedVector(Vector::Zero(static_cast<Eigen::Index>(n)));
  }

  std::size_t size() const { return static_cast<std::size_t>(values_.size()); }
  double operator[](std::size_t i) const { return values_[static_cast<Eigen::Index>(i)]; }
  double& operator[](std::size_t i) { return values_[static_cast<Eigen::Index>(i)]; }

  const Vector& values() const { return values_; }
  Vector& values() { return values_; }

  bool all_finite() const { return values_.allFinite(); }

  friend bool operator==(const TaggedVector& a, const TaggedVector& b) {
    return a.values_.size() == b.values_.size() && a.values_ == b.values_;
  }

 private:
  Vector values_;
};

struct StateTag {};
struct ControlTag {};
struct ReducedTag {};

using StateVector = TaggedVector<StateTag>;
using ControlVector = TaggedVector<ControlTag>;
using ReducedState = TaggedVector<ReducedTag>;

/// Coordinates of one element of a finite-dimensional transformation group.
struct GroupElement {
  std::string group_id;
  Vector coords;
};

/// Regressor input/target pair expressed in the model's training coordinates.
struct ReducedSample {
  Vector input;
  Vector target;
};

}  // namespace symred
