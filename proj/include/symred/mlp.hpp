#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "symred/regressor.hpp"

namespace symred {

enum class Activation { tanh, relu };

std::string to_string(Activation a);
Activation parse_activation(const std::string& text);

struct MlpSpec {
  std::size_t input_dim = 0;
  std::size_t output_dim = 0;
  std::vector<std::size_t> hidden;  // widths; empty means a single affine layer
  Activation activation = Activation::relu;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument on zero dims or widths.
  void validate() const;
  std::size_t parameter_count() const;
};

/// Fully connected network: hidden layers use `activation`, the output layer
/// is affine.
///
/// All parameters live in one flat vector. Layer l stores its weight matrix
/// (out x in, column-major) followed by its bias. Gradients returned by
/// backward() use the same layout, so optimisers work on flat vectors.
class Mlp final : public Regressor {
 public:
  /// Weights uniform in +-sqrt(6 / (fan_in + fan_out)) drawn from Rng(spec.seed)
  /// layer by layer in storage order; biases zero.
  explicit Mlp(MlpSpec spec);
  Mlp(MlpSpec spec, Vector parameters);

  using Regressor::evaluate;

  const MlpSpec& spec() const { return spec_; }
  std::size_t input_dim() const override { return spec_.input_dim; }
  std::size_t output_dim() const override { return spec_.output_dim; }
  std::size_t layer_count() const { return layers_.size(); }

  Eigen::Map<const Matrix> weight(std::size_t layer) const;
  Eigen::Map<const Vector> bias(std::size_t layer) const;
  Eigen::Map<Matrix> weight(std::size_t layer);
  Eigen::Map<Vector> bias(std::size_t layer);

  const Vector& parameters() const { return params_; }
  Vector& parameters() { return params_; }

  /// Intermediate values kept for backpropagation.
  struct Tape {
    std::vector<Matrix> layer_inputs;  // input to each affine layer
    std::vector<Matrix> pre_activations;  // hidden pre-activations
  };

  Matrix evaluate(const Matrix& inputs) const override;
  Matrix forward(const Matrix& inputs, Tape& tape) const;

  /// Gradient of sum(output_grad .* output) with respect to the parameters.
  Vector backward(const Tape& tape, const Matrix& output_grad) const;

  /// Single-sample convenience: forward then backward.
  Vector gradient(const Vector& input, const Vector& output_grad) const;

 private:
  struct Layer {
    std::size_t in = 0;
    std::size_t out = 0;
    std::size_t weight_offset = 0;
    std::size_t bias_offset = 0;
  };

  void build_layout();
  void check_input(const Matrix& inputs) const;

  MlpSpec spec_;
  std::vector<Layer> layers_;
  Vector params_;
};

}  // namespace symred
