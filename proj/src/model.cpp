#include "symred/model.hpp"

#include <stdexcept>

namespace symred {

std::string to_string(Mode mode) { return mode == Mode::delta ? "delta" : "absolute"; }

Mode parse_mode(const std::string& text) {
  if (text == "delta") return Mode::delta;
  if (text == "absolute") return Mode::absolute;
  throw std::invalid_argument("unknown model mode '" + text + "' (expected delta or absolute)");
}

DynamicsModel::DynamicsModel(std::shared_ptr<Regressor> regressor, Mode mode)
    : regressor_(std::move(regressor)), mode_(mode) {
  if (!regressor_) throw std::invalid_argument("dynamics model requires a regressor");
}

void DynamicsModel::check_inputs(const StateVector& x, const ControlVector& u) const {
  if (x.size() != state_dim() || u.size() != control_dim()) {
    throw std::invalid_argument("model expects state/control of length " +
                                std::to_string(state_dim()) + "/" + std::to_string(control_dim()) +
                                ", got " + std::to_string(x.size()) + "/" +
                                std::to_string(u.size()));
  }
}

void DynamicsModel::check_batch(const Matrix& states, const Matrix& controls) const {
  if (static_cast<std::size_t>(states.rows()) != state_dim() ||
      static_cast<std::size_t>(controls.rows()) != control_dim() ||
      states.cols() != controls.cols()) {
    throw std::invalid_argument("predict_batch: expected " + std::to_string(state_dim()) + "x N and " +
                                std::to_string(control_dim()) + "x N inputs");
  }
}

// ---- SymmetryReducedModel ----

SymmetryReducedModel::SymmetryReducedModel(std::shared_ptr<const Group> group,
                                           std::shared_ptr<Regressor> regressor, Mode mode)
    : DynamicsModel(std::move(regressor), mode), group_(std::move(group)) {
  if (!group_) throw std::invalid_argument("symmetry model requires a group");
  const std::size_t in = group_->reduced_dim() + group_->control_dim();
  if (regressor_->input_dim() != in || regressor_->output_dim() != group_->state_dim()) {
    throw std::invalid_argument(
        group_->id() + ": reduced regressor must map " + std::to_string(in) + " -> " +
        std::to_string(group_->state_dim()) + ", got " + std::to_string(regressor_->input_dim()) +
        " -> " + std::to_string(regressor_->output_dim()));
  }
}

SymmetryReducedModel::Canonical SymmetryReducedModel::canonicalize(const StateVector& x,
                                                                   const ControlVector& u) const {
  GroupElement frame = group_->moving_frame(x);
  StateVector canonical = group_->act_state(frame, x);
  const ReducedState reduced = group_->project_reduced(canonical);
  const ControlVector u_bar = group_->act_control(frame, u);
  Vector input(static_cast<Eigen::Index>(reduced.size() + u_bar.size()));
  input << reduced.values(), u_bar.values();
  return Canonical{std::move(frame), std::move(canonical), std::move(input)};
}

StateVector SymmetryReducedModel::reconstruct(const Canonical& c, const Vector& output) const {
  const GroupElement back = group_->inverse(c.frame);
  if (mode_ == Mode::absolute) return group_->act_state(back, StateVector(output));
  return group_->act_state(back, StateVector(output + c.state.values()));
}

StateVector SymmetryReducedModel::predict(const StateVector& x, const ControlVector& u) const {
  if (mode_ == Mode::delta && group_->is_linear_action()) return predict_homomorphic(x, u);
  return predict_general(x, u);
}

StateVector SymmetryReducedModel::predict_general(const StateVector& x,
                                                  const ControlVector& u) const {
  check_inputs(x, u);
  const Canonical c = canonicalize(x, u);
  return reconstruct(c, regressor_->evaluate(c.input));
}

StateVector SymmetryReducedModel::predict_homomorphic(const StateVector& x,
                                                      const ControlVector& u) const {
  if (mode_ != Mode::delta) {
    throw std::logic_error("predict_homomorphic requires a delta-mode model");
  }
  check_inputs(x, u);
  const Canonical c = canonicalize(x, u);
  const StateVector step =
      group_->act_state(group_->inverse(c.frame), StateVector(regressor_->evaluate(c.input)));
  return StateVector(x.values() + step.values());
}

Matrix SymmetryReducedModel::predict_batch(const Matrix& states, const Matrix& controls) const {
  check_batch(states, controls);
  const Eigen::Index count = states.cols();
  std::vector<Canonical> canon;
  canon.reserve(static_cast<std::size_t>(count));
  Matrix inputs(static_cast<Eigen::Index>(regressor_->input_dim()), count);
  for (Eigen::Index j = 0; j < count; ++j) {
    canon.push_back(canonicalize(StateVector(states.col(j)), ControlVector(controls.col(j))));
    inputs.col(j) = canon.back().input;
  }
  const Matrix outputs = regressor_->evaluate(inputs);
  const bool linear = mode_ == Mode::delta && group_->is_linear_action();
  Matrix next(states.rows(), count);
  for (Eigen::Index j = 0; j < count; ++j) {
    const Canonical& c = canon[static_cast<std::size_t>(j)];
    if (linear) {
      next.col(j) = states.col(j) +
                    group_->act_state(group_->inverse(c.frame), StateVector(outputs.col(j))).values();
    } else {
      next.col(j) = reconstruct(c, outputs.col(j)).values();
    }
  }
  return next;
}

ReducedSample SymmetryReducedModel::training_target(const StateVector& x, const ControlVector& u,
                                                    const StateVector& x_next) const {
  check_inputs(x, u);
  if (x_next.size() != state_dim()) throw std::invalid_argument("training_target: bad x_next length");
  Canonical c = canonicalize(x, u);
  Vector target = group_->act_state(c.frame, x_next).values();
  if (mode_ == Mode::delta) target -= c.state.values();
  return ReducedSample{std::move(c.input), std::move(target)};
}

// ---- BaselineModel ----

BaselineModel::BaselineModel(std::size_t n, std::size_t n_u, std::shared_ptr<Regressor> regressor,
                             Mode mode)
    : DynamicsModel(std::move(regressor), mode), n_(n), n_u_(n_u) {
  if (regressor_->input_dim() != n + n_u || regressor_->output_dim() != n) {
    throw std::invalid_argument("baseline regressor must map " + std::to_string(n + n_u) + " -> " +
                                std::to_string(n) + ", got " +
                                std::to_string(regressor_->input_dim()) + " -> " +
                                std::to_string(regressor_->output_dim()));
  }
}

StateVector BaselineModel::predict(const StateVector& x, const ControlVector& u) const {
  check_inputs(x, u);
  Vector input(static_cast<Eigen::Index>(n_ + n_u_));
  input << x.values(), u.values();
  Vector out = regressor_->evaluate(input);
  if (mode_ == Mode::delta) out += x.values();
  return StateVector(std::move(out));
}

Matrix BaselineModel::predict_batch(const Matrix& states, const Matrix& controls) const {
  check_batch(states, controls);
  Matrix inputs(static_cast<Eigen::Index>(n_ + n_u_), states.cols());
  inputs.topRows(static_cast<Eigen::Index>(n_)) = states;
  inputs.bottomRows(static_cast<Eigen::Index>(n_u_)) = controls;
  Matrix out = regressor_->evaluate(inputs);
  if (mode_ == Mode::delta) out += states;
  return out;
}

ReducedSample BaselineModel::training_target(const StateVector& x, const ControlVector& u,
                                             const StateVector& x_next) const {
  check_inputs(x, u);
  if (x_next.size() != n_) throw std::invalid_argument("training_target: bad x_next length");
  Vector input(static_cast<Eigen::Index>(n_ + n_u_));
  input << x.values(), u.values();
  Vector target = x_next.values();
  if (mode_ == Mode::delta) target -= x.values();
  return ReducedSample{std::move(input), std::move(target)};
}

}  // namespace symred
