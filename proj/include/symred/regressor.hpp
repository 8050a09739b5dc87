#pragma once

#include <cstddef>
#include <functional>
#include <utility>

#include "symred/types.hpp"

namespace symred {

/// A map R^input_dim -> R^output_dim evaluated on batches whose columns are
/// samples. Implementations must be safe to evaluate concurrently.
class Regressor {
 public:
  virtual ~Regressor() = default;
  virtual std::size_t input_dim() const = 0;
  virtual std::size_t output_dim() const = 0;
  virtual Matrix evaluate(const Matrix& inputs) const = 0;

  Vector evaluate(const Vector& input) const {
    return evaluate(Matrix(input)).col(0);
  }
};

/// Regressor backed by an arbitrary per-sample function; used for analytic
/// reduced models.
class FunctionRegressor final : public Regressor {
 public:
  using Fn = std::function<Vector(const Vector&)>;

  FunctionRegressor(std::size_t input_dim, std::size_t output_dim, Fn fn)
      : input_dim_(input_dim), output_dim_(output_dim), fn_(std::move(fn)) {}

  std::size_t input_dim() const override { return input_dim_; }
  std::size_t output_dim() const override { return output_dim_; }
  Matrix evaluate(const Matrix& inputs) const override {
    Matrix out(static_cast<Eigen::Index>(output_dim_), inputs.cols());
    for (Eigen::Index j = 0; j < inputs.cols(); ++j) out.col(j) = fn_(inputs.col(j));
    return out;
  }

 private:
  std::size_t input_dim_;
  std::size_t output_dim_;
  Fn fn_;
};

}  // namespace symred
