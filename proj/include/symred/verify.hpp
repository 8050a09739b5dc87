#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "symred/dataset.hpp"
#include "symred/group.hpp"
#include "symred/mlp.hpp"
#include "symred/model.hpp"

namespace symred {

/// Outcome of one seeded property suite.
struct SuiteResult {
  std::string suite;
  std::string subject;  // group id, environment id or architecture
  std::size_t samples = 0;
  double max_error = 0;
  double tolerance = 0;
  bool passed = true;
  /// First violating sample, with the seed and index needed to replay it.
  std::string failure;
  double seconds = 0;
};

struct VerifyOptions {
  std::size_t samples = 1000;
  std::uint64_t seed = 20240601;
};

// Tolerances.
inline constexpr double kGroupTolerance = 1e-9;
inline constexpr double kReconstructTolerance = 1e-12;
inline constexpr double kTheoremTolerance = 1e-8;
inline constexpr double kSimTolerance = 1e-9;
inline constexpr double kGradientTolerance = 1e-5;
inline constexpr double kFiniteDifferenceStep = 1e-6;

/// e . x = x, g1 . (g2 . x) = (g1 g2) . x, g^{-1} . (g . x) = x.
SuiteResult check_group_axioms(const Group& group, const VerifyOptions& opts = {});
/// (gamma(x) . x)^a = c.
SuiteResult check_frame_property(const Group& group, const VerifyOptions& opts = {});
/// rho(g . x) = rho(x).
SuiteResult check_lemma1(const Group& group, const VerifyOptions& opts = {});
/// gamma(g . x) g = gamma(x), angles modulo 2 pi.
SuiteResult check_frame_equivariance(const Group& group, const VerifyOptions& opts = {});
/// reduce(reconstruct_on_cross_section(x_bar)) = x_bar.
SuiteResult check_reconstruction(const Group& group, const VerifyOptions& opts = {});

/// F(g . x, g . u) = g . F(x, u) for a SymmetryReducedModel over a randomly
/// initialised Mlp (random biases too) with the given hidden widths.
SuiteResult check_theorem1(const std::shared_ptr<const Group>& group,
                           const std::vector<std::size_t>& hidden, Mode mode,
                           const VerifyOptions& opts = {});

using StepFn = std::function<StateVector(const StateVector&, const ControlVector&)>;
using StateSampler = std::function<StateVector(Rng&)>;
using ControlSampler = std::function<ControlVector(Rng&)>;

/// step(g . x, g . u) = g . step(x, u).
SuiteResult check_step_invariance(const std::string& subject, const Group& group,
                                  const StepFn& step, const StateSampler& sample_state,
                                  const ControlSampler& sample_control,
                                  const VerifyOptions& opts = {});
/// Simulator invariance for "parking2", "reacher" or "se2car" (bare car_step).
SuiteResult check_simulator_invariance(const std::string& env_or_group,
                                       const VerifyOptions& opts = {});

/// Directional central-difference check of Mlp::backward: each probe draws a
/// random batch, output gradient and unit direction, and compares the
/// analytic directional derivative with the difference quotient at step 1e-6.
/// The error is |a - n| / max(|a|, |n|, 1e-12).
SuiteResult check_gradients(const MlpSpec& spec, std::size_t probes, std::uint64_t seed);

std::vector<std::string> suite_names();

/// Runs a named suite ("axioms", "frame", "lemma1", "equivariance",
/// "reconstruct", "theorem1", "sim", "gradcheck", or "all") on a group id or
/// "all". Suites that do not apply to a group are skipped.
std::vector<SuiteResult> run_verify(const std::string& suite, const std::string& group_id,
                                    const VerifyOptions& opts = {});

/// Copy of `data` with every triple moved by its own random element g:
/// (g . x, g . u, g . x'). Element k is drawn from Rng(derive_seed(seed, k)).
TransitionDataset transform_dataset(const TransitionDataset& data, const Group& group,
                                    std::uint64_t seed);

void print_results(std::ostream& out, const std::vector<SuiteResult>& results);

}  // namespace symred
