#include "symred/mlp.hpp"

#include <cmath>
#include <stdexcept>

#include "symred/rng.hpp"

namespace symred {

std::string to_string(Activation a) { return a == Activation::relu ? "relu" : "tanh"; }

Activation parse_activation(const std::string& text) {
  if (text == "relu") return Activation::relu;
  if (text == "tanh") return Activation::tanh;
  throw std::invalid_argument("unknown activation '" + text + "' (expected relu or tanh)");
}

void MlpSpec::validate() const {
  if (input_dim == 0 || output_dim == 0)
    throw std::invalid_argument("MlpSpec: input and output dims must be positive");
  for (std::size_t w : hidden)
    if (w == 0) throw std::invalid_argument("MlpSpec: hidden widths must be positive");
}

std::size_t MlpSpec::parameter_count() const {
  std::size_t count = 0;
  std::size_t in = input_dim;
  for (std::size_t w : hidden) {
    count += w * in + w;
    in = w;
  }
  return count + output_dim * in + output_dim;
}

void Mlp::build_layout() {
  spec_.validate();
  std::size_t offset = 0;
  std::size_t in = spec_.input_dim;
  auto add = [&](std::size_t out) {
    Layer l{in, out, offset, offset + in * out};
    offset = l.bias_offset + out;
    layers_.push_back(l);
    in = out;
  };
  for (std::size_t w : spec_.hidden) add(w);
  add(spec_.output_dim);
}

Mlp::Mlp(MlpSpec spec) : spec_(std::move(spec)) {
  build_layout();
  params_ = Vector::Zero(static_cast<Eigen::Index>(spec_.parameter_count()));
  Rng rng(spec_.seed);
  for (const Layer& l : layers_) {
    const double limit = std::sqrt(6.0 / static_cast<double>(l.in + l.out));
    for (std::size_t k = 0; k < l.in * l.out; ++k)
      params_[static_cast<Eigen::Index>(l.weight_offset + k)] = rng.uniform(-limit, limit);
  }
}

Mlp::Mlp(MlpSpec spec, Vector parameters) : spec_(std::move(spec)) {
  build_layout();
  if (static_cast<std::size_t>(parameters.size()) != spec_.parameter_count()) {
    throw std::invalid_argument("Mlp: expected " + std::to_string(spec_.parameter_count()) +
                                " parameters, got " + std::to_string(parameters.size()));
  }
  params_ = std::move(parameters);
}

Eigen::Map<const Matrix> Mlp::weight(std::size_t layer) const {
  const Layer& l = layers_.at(layer);
  return {params_.data() + l.weight_offset, static_cast<Eigen::Index>(l.out),
          static_cast<Eigen::Index>(l.in)};
}

Eigen::Map<const Vector> Mlp::bias(std::size_t layer) const {
  const Layer& l = layers_.at(layer);
  return {params_.data() + l.bias_offset, static_cast<Eigen::Index>(l.out)};
}

Eigen::Map<Matrix> Mlp::weight(std::size_t layer) {
  const Layer& l = layers_.at(layer);
  return {params_.data() + l.weight_offset, static_cast<Eigen::Index>(l.out),
          static_cast<Eigen::Index>(l.in)};
}

Eigen::Map<Vector> Mlp::bias(std::size_t layer) {
  const Layer& l = layers_.at(layer);
  return {params_.data() + l.bias_offset, static_cast<Eigen::Index>(l.out)};
}

void Mlp::check_input(const Matrix& inputs) const {
  if (static_cast<std::size_t>(inputs.rows()) != spec_.input_dim) {
    throw std::invalid_argument("Mlp: expected input length " + std::to_string(spec_.input_dim) +
                                ", got " + std::to_string(inputs.rows()));
  }
}

namespace {

void activate(Matrix& m, Activation a) {
  if (a == Activation::relu)
    m = m.cwiseMax(0.0);
  else
    m = m.array().tanh().matrix();
}

}  // namespace

Matrix Mlp::evaluate(const Matrix& inputs) const {
  check_input(inputs);
  Matrix h = inputs;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    Matrix z = weight(i) * h;
    z.colwise() += bias(i);
    if (i + 1 < layers_.size()) activate(z, spec_.activation);
    h = std::move(z);
  }
  return h;
}

Matrix Mlp::forward(const Matrix& inputs, Tape& tape) const {
  check_input(inputs);
  tape.layer_inputs.clear();
  tape.pre_activations.clear();
  Matrix h = inputs;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    tape.layer_inputs.push_back(h);
    Matrix z = weight(i) * h;
    z.colwise() += bias(i);
    if (i + 1 < layers_.size()) {
      tape.pre_activations.push_back(z);
      activate(z, spec_.activation);
    }
    h = std::move(z);
  }
  return h;
}

Vector Mlp::backward(const Tape& tape, const Matrix& output_grad) const {
  if (tape.layer_inputs.size() != layers_.size() ||
      static_cast<std::size_t>(output_grad.rows()) != spec_.output_dim ||
      output_grad.cols() != tape.layer_inputs.front().cols()) {
    throw std::invalid_argument("Mlp::backward: tape and output gradient shapes disagree");
  }
  Vector grad = Vector::Zero(params_.size());
  Matrix delta = output_grad;
  for (std::size_t i = layers_.size(); i-- > 0;) {
    const Layer& l = layers_[i];
    Eigen::Map<Matrix> gw(grad.data() + l.weight_offset, static_cast<Eigen::Index>(l.out),
                          static_cast<Eigen::Index>(l.in));
    Eigen::Map<Vector> gb(grad.data() + l.bias_offset, static_cast<Eigen::Index>(l.out));
    gw.noalias() = delta * tape.layer_inputs[i].transpose();
    gb = delta.rowwise().sum();
    if (i == 0) break;
    Matrix back = weight(i).transpose() * delta;
    const Matrix& z = tape.pre_activations[i - 1];
    if (spec_.activation == Activation::relu) {
      back = back.cwiseProduct((z.array() > 0.0).cast<double>().matrix());
    } else {
      const Eigen::ArrayXXd t = z.array().tanh();
      back = (back.array() * (1.0 - t * t)).matrix();
    }
    delta = std::move(back);
  }
  return grad;
}

Vector Mlp::gradient(const Vector& input, const Vector& output_grad) const {
  Tape tape;
  forward(Matrix(input), tape);
  return backward(tape, Matrix(output_grad));
}

}  // namespace symred
