#pragma once

#include <memory>
#include <string>

#include "symred/group.hpp"
#include "symred/regressor.hpp"

namespace symred {

/// absolute: the regressor predicts the next state.
/// delta: the regressor predicts a next-state-minus-state increment.
enum class Mode { absolute, delta };

std::string to_string(Mode mode);
/// Accepts "absolute" or "delta"; throws std::invalid_argument otherwise.
Mode parse_mode(const std::string& text);

/// Full-state dynamics model x' = F(x, u) backed by a regressor.
class DynamicsModel {
 public:
  virtual ~DynamicsModel() = default;

  virtual std::size_t state_dim() const = 0;
  virtual std::size_t control_dim() const = 0;
  /// Group id for symmetry-reduced models, "none" for the baseline.
  virtual std::string group_id() const = 0;

  virtual StateVector predict(const StateVector& x, const ControlVector& u) const = 0;
  /// Columns of `states` and `controls` are samples; returns next states.
  virtual Matrix predict_batch(const Matrix& states, const Matrix& controls) const = 0;
  /// Regressor input and target for one transition (x, u, x_next).
  virtual ReducedSample training_target(const StateVector& x, const ControlVector& u,
                                        const StateVector& x_next) const = 0;

  Mode mode() const { return mode_; }
  std::size_t input_dim() const { return regressor_->input_dim(); }
  const Regressor& regressor() const { return *regressor_; }
  const std::shared_ptr<Regressor>& regressor_ptr() const { return regressor_; }

 protected:
  DynamicsModel(std::shared_ptr<Regressor> regressor, Mode mode);

  void check_inputs(const StateVector& x, const ControlVector& u) const;
  void check_batch(const Matrix& states, const Matrix& controls) const;

  std::shared_ptr<Regressor> regressor_;
  Mode mode_;
};

/// G-invariant model built from a regressor on X^b x U.
///
/// With g = gamma(x) the regressor sees (rho(x), psi_g(u)) and
///   absolute: F(x, u) = phi_g^{-1}(Fbar(rho(x), psi_g(u)))
///   delta:    F(x, u) = phi_g^{-1}(dFbar(rho(x), psi_g(u)) + phi_g(x))
/// which is invariant for any regressor. Training targets are phi_g(x') in
/// absolute mode and phi_g(x') - phi_g(x) in delta mode.
///
/// The regressor input is rho(x) followed by psi_g(u).
class SymmetryReducedModel final : public DynamicsModel {
 public:
  /// Regressor arity must be (reduced_dim + n_u) -> n.
  SymmetryReducedModel(std::shared_ptr<const Group> group, std::shared_ptr<Regressor> regressor,
                       Mode mode = Mode::delta);

  std::size_t state_dim() const override { return group_->state_dim(); }
  std::size_t control_dim() const override { return group_->control_dim(); }
  std::string group_id() const override { return group_->id(); }
  const Group& group() const { return *group_; }
  const std::shared_ptr<const Group>& group_ptr() const { return group_; }

  /// Uses predict_homomorphic when the group action is linear and the model
  /// is in delta mode; otherwise the general construction.
  StateVector predict(const StateVector& x, const ControlVector& u) const override;
  Matrix predict_batch(const Matrix& states, const Matrix& controls) const override;
  ReducedSample training_target(const StateVector& x, const ControlVector& u,
                                const StateVector& x_next) const override;

  /// General reconstruction, never taking the linear shortcut.
  StateVector predict_general(const StateVector& x, const ControlVector& u) const;

  /// x + phi_g^{-1}(dFbar(rho(x), psi_g(u))). Equals the general delta
  /// construction only when phi_g is linear; the caller is responsible for
  /// that. Requires delta mode.
  StateVector predict_homomorphic(const StateVector& x, const ControlVector& u) const;

 private:
  struct Canonical {
    GroupElement frame;
    StateVector state;  // phi_frame(x), lies on the cross-section
    Vector input;       // regressor input
  };
  Canonical canonicalize(const StateVector& x, const ControlVector& u) const;
  StateVector reconstruct(const Canonical& c, const Vector& output) const;

  std::shared_ptr<const Group> group_;
};

/// Unreduced model: the regressor sees concat(x, u).
class BaselineModel final : public DynamicsModel {
 public:
  /// Regressor arity must be (n + n_u) -> n.
  BaselineModel(std::size_t n, std::size_t n_u, std::shared_ptr<Regressor> regressor,
                Mode mode = Mode::delta);

  std::size_t state_dim() const override { return n_; }
  std::size_t control_dim() const override { return n_u_; }
  std::string group_id() const override { return "none"; }

  StateVector predict(const StateVector& x, const ControlVector& u) const override;
  Matrix predict_batch(const Matrix& states, const Matrix& controls) const override;
  ReducedSample training_target(const StateVector& x, const ControlVector& u,
                                const StateVector& x_next) const override;

 private:
  std::size_t n_;
  std::size_t n_u_;
};

}  // namespace symred
