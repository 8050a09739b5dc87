#include "symred/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "symred/groups.hpp"
#include "symred/sim.hpp"

namespace symred {

namespace {

std::string describe(const Vector& v) {
  std::ostringstream s;
  s << std::setprecision(17) << '[';
  for (Eigen::Index i = 0; i < v.size(); ++i) s << (i ? ", " : "") << v[i];
  s << ']';
  return s.str();
}

double max_abs(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

/// Runs `body(i, rng)` for every sample; body returns (error, description).
template <class Body>
SuiteResult run_samples(std::string suite, std::string subject, double tol,
                        const VerifyOptions& opts, Body body) {
  const auto t0 = std::chrono::steady_clock::now();
  SuiteResult r;
  r.suite = std::move(suite);
  r.subject = std::move(subject);
  r.tolerance = tol;
  r.samples = opts.samples;
  Rng rng(opts.seed);
  for (std::size_t i = 0; i < opts.samples; ++i) {
    std::string detail;
    const double err = body(rng, detail);
    if (!(err < tol) && r.passed) {
      r.passed = false;
      std::ostringstream s;
      s << "sample " << i << " (seed " << opts.seed << "): error " << std::setprecision(6) << err
        << "; " << detail;
      r.failure = s.str();
    }
    if (!std::isfinite(err)) r.max_error = err;
    else if (std::isfinite(r.max_error)) r.max_error = std::max(r.max_error, err);
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::size_t default_width(const std::string& group_id) { return group_id == "reacher" ? 64 : 128; }

}  // namespace

SuiteResult check_group_axioms(const Group& group, const VerifyOptions& opts) {
  return run_samples("axioms", group.id(), kGroupTolerance, opts, [&](Rng& rng, std::string& d) {
    const GroupElement g1 = group.sample_element(rng);
    const GroupElement g2 = group.sample_element(rng);
    const StateVector x = group.sample_state(rng);
    const Vector id_err = group.act_state(group.identity(), x).values() - x.values();
    const Vector comp_err = group.act_state(g1, group.act_state(g2, x)).values() -
                            group.act_state(group.compose(g1, g2), x).values();
    const Vector inv_err = group.act_state(group.inverse(g1), group.act_state(g1, x)).values() -
                           x.values();
    const double err = std::max({max_abs(id_err), max_abs(comp_err), max_abs(inv_err)});
    d = "g1=" + describe(g1.coords) + " g2=" + describe(g2.coords) + " x=" + describe(x.values());
    return err;
  });
}

SuiteResult check_frame_property(const Group& group, const VerifyOptions& opts) {
  const auto a = group.cross_section_indices();
  const Vector c = group.cross_section_constant();
  return run_samples("frame", group.id(), kGroupTolerance, opts, [&](Rng& rng, std::string& d) {
    const StateVector x = group.sample_state(rng);
    const StateVector xc = group.act_state(group.moving_frame(x), x);
    double err = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
      err = std::max(err, std::abs(xc[a[i]] - c[static_cast<Eigen::Index>(i)]));
    d = "x=" + describe(x.values());
    return err;
  });
}

SuiteResult check_lemma1(const Group& group, const VerifyOptions& opts) {
  return run_samples("lemma1", group.id(), kGroupTolerance, opts, [&](Rng& rng, std::string& d) {
    const GroupElement g = group.sample_element(rng);
    const StateVector x = group.sample_state(rng);
    const Vector diff = group.reduce(group.act_state(g, x)).values() - group.reduce(x).values();
    d = "g=" + describe(g.coords) + " x=" + describe(x.values());
    return max_abs(diff);
  });
}

SuiteResult check_frame_equivariance(const Group& group, const VerifyOptions& opts) {
  return run_samples("equivariance", group.id(), kGroupTolerance, opts,
                     [&](Rng& rng, std::string& d) {
                       const GroupElement g = group.sample_element(rng);
                       const StateVector x = group.sample_state(rng);
                       const GroupElement lhs =
                           group.compose(group.moving_frame(group.act_state(g, x)), g);
                       d = "g=" + describe(g.coords) + " x=" + describe(x.values());
                       return group.element_distance(lhs, group.moving_frame(x));
                     });
}

SuiteResult check_reconstruction(const Group& group, const VerifyOptions& opts) {
  return run_samples("reconstruct", group.id(), kReconstructTolerance, opts,
                     [&](Rng& rng, std::string& d) {
                       ReducedState xb = ReducedState::zeros(group.reduced_dim());
                       for (std::size_t i = 0; i < xb.size(); ++i) xb[i] = rng.uniform(-3, 3);
                       const ReducedState back = group.reduce(group.reconstruct_on_cross_section(xb));
                       d = "x_bar=" + describe(xb.values());
                       return max_abs(back.values() - xb.values());
                     });
}

SuiteResult check_theorem1(const std::shared_ptr<const Group>& group,
                           const std::vector<std::size_t>& hidden, Mode mode,
                           const VerifyOptions& opts) {
  MlpSpec spec;
  spec.input_dim = group->reduced_dim() + group->control_dim();
  spec.output_dim = group->state_dim();
  spec.hidden = hidden;
  spec.seed = derive_seed(opts.seed, hidden.size());
  auto mlp = std::make_shared<Mlp>(spec);
  Rng bias_rng(derive_seed(opts.seed, 100 + hidden.size()));
  for (std::size_t l = 0; l < mlp->layer_count(); ++l)
    for (auto& b : mlp->bias(l)) b = bias_rng.uniform(-0.5, 0.5);
  const SymmetryReducedModel model(group, mlp, mode);

  std::ostringstream subject;
  subject << group->id() << " " << to_string(mode) << " hidden=" << hidden.size() << "x"
          << (hidden.empty() ? 0 : hidden.front());
  return run_samples("theorem1", subject.str(), kTheoremTolerance, opts,
                     [&](Rng& rng, std::string& d) {
                       const GroupElement g = group->sample_element(rng);
                       const StateVector x = group->sample_state(rng);
                       const ControlVector u = group->sample_control(rng);
                       const StateVector lhs =
                           model.predict(group->act_state(g, x), group->act_control(g, u));
                       const StateVector rhs = group->act_state(g, model.predict(x, u));
                       d = "g=" + describe(g.coords) + " x=" + describe(x.values()) +
                           " u=" + describe(u.values());
                       return max_abs(lhs.values() - rhs.values());
                     });
}

SuiteResult check_step_invariance(const std::string& subject, const Group& group,
                                  const StepFn& step, const StateSampler& sample_state,
                                  const ControlSampler& sample_control,
                                  const VerifyOptions& opts) {
  return run_samples("sim", subject, kSimTolerance, opts, [&](Rng& rng, std::string& d) {
    const GroupElement g = group.sample_element(rng);
    const StateVector x = sample_state(rng);
    const ControlVector u = sample_control(rng);
    const StateVector lhs = step(group.act_state(g, x), group.act_control(g, u));
    const StateVector rhs = group.act_state(g, step(x, u));
    d = "g=" + describe(g.coords) + " x=" + describe(x.values()) + " u=" + describe(u.values());
    return max_abs(lhs.values() - rhs.values());
  });
}

SuiteResult check_simulator_invariance(const std::string& id, const VerifyOptions& opts) {
  if (id == "se2car") {
    const SE2CarGroup group;
    const CarParams params;
    return check_step_invariance(
        id, group, [&](const StateVector& x, const ControlVector& u) { return car_step(x, u, params); },
        [&](Rng& rng) { return group.sample_state(rng); },
        [&](Rng& rng) {
          return ControlVector{rng.uniform(-1.2, 1.2), rng.uniform(-1.0, 1.0)};
        },
        opts);
  }
  const auto env = make_environment(id);
  const auto group = make_group(id);
  // States reached by a few random steps from the initial distribution.
  return check_step_invariance(
      id, *group, [&](const StateVector& x, const ControlVector& u) { return env->step(x, u); },
      [&](Rng& rng) {
        StateVector x = env->initial_state(rng);
        const std::size_t k = rng.below(5);
        for (std::size_t i = 0; i < k; ++i)
          x = env->step(x, env->control(Policy::uniform_random, x, rng));
        return x;
      },
      [&](Rng& rng) { return env->control(Policy::uniform_random, StateVector(), rng); }, opts);
}

SuiteResult check_gradients(const MlpSpec& spec, std::size_t probes, std::uint64_t seed) {
  std::ostringstream subject;
  subject << to_string(spec.activation) << " " << spec.input_dim << "-";
  for (std::size_t w : spec.hidden) subject << w << "-";
  subject << spec.output_dim;
  VerifyOptions opts{probes, seed};
  MlpSpec s = spec;
  s.seed = derive_seed(seed, 7);
  Mlp net(s);
  Rng init(derive_seed(seed, 8));
  for (auto& p : net.parameters()) p += init.uniform(-0.1, 0.1);
  const Eigen::Index in = static_cast<Eigen::Index>(spec.input_dim);
  const Eigen::Index out = static_cast<Eigen::Index>(spec.output_dim);
  constexpr Eigen::Index kBatch = 4;

  return run_samples("gradcheck", subject.str(), kGradientTolerance, opts,
                     [&](Rng& rng, std::string& d) {
                       Matrix x(in, kBatch), w(out, kBatch);
                       for (auto& v : x.reshaped()) v = rng.uniform(-1, 1);
                       for (auto& v : w.reshaped()) v = rng.uniform(-1, 1);
                       Vector dir(net.parameters().size());
                       for (auto& v : dir) v = rng.uniform(-1, 1);
                       dir.normalize();

                       Mlp::Tape tape;
                       net.forward(x, tape);
                       const double analytic = net.backward(tape, w).dot(dir);

                       Mlp probe = net;
                       const Vector base = net.parameters();
                       probe.parameters() = base + kFiniteDifferenceStep * dir;
                       const double plus = (probe.evaluate(x).array() * w.array()).sum();
                       probe.parameters() = base - kFiniteDifferenceStep * dir;
                       const double minus = (probe.evaluate(x).array() * w.array()).sum();
                       const double numeric = (plus - minus) / (2 * kFiniteDifferenceStep);
                       std::ostringstream s;
                       s << std::setprecision(17) << "analytic=" << analytic << " numeric=" << numeric;
                       d = s.str();
                       return std::abs(analytic - numeric) /
                              std::max({std::abs(analytic), std::abs(numeric), 1e-12});
                     });
}

std::vector<std::string> suite_names() {
  return {"axioms", "frame", "lemma1", "equivariance", "reconstruct", "theorem1", "sim", "gradcheck"};
}

std::vector<SuiteResult> run_verify(const std::string& suite, const std::string& group_id,
                                    const VerifyOptions& opts) {
  const auto names = suite_names();
  if (suite != "all" && std::find(names.begin(), names.end(), suite) == names.end())
    throw std::invalid_argument("unknown suite '" + suite + "'");
  std::vector<std::string> groups;
  if (group_id == "all")
    groups = builtin_group_ids();
  else
    groups = {make_group(group_id)->id()};

  auto wanted = [&](const char* name) { return suite == "all" || suite == name; };
  std::vector<SuiteResult> results;
  for (const std::string& id : groups) {
    const auto group = make_group(id);
    if (wanted("axioms")) results.push_back(check_group_axioms(*group, opts));
    if (wanted("frame")) results.push_back(check_frame_property(*group, opts));
    if (wanted("lemma1")) results.push_back(check_lemma1(*group, opts));
    if (wanted("equivariance")) results.push_back(check_frame_equivariance(*group, opts));
    if (wanted("reconstruct")) results.push_back(check_reconstruction(*group, opts));
    if (wanted("theorem1") && group->control_dim() + group->reduced_dim() > 0) {
      const std::size_t w = default_width(id);
      for (Mode mode : {Mode::absolute, Mode::delta})
        for (std::size_t layers = 1; layers <= 3; ++layers)
          results.push_back(check_theorem1(group, std::vector<std::size_t>(layers, w), mode, opts));
    }
    if (wanted("sim") && (id == "parking2" || id == "reacher" || id == "se2car"))
      results.push_back(check_simulator_invariance(id, opts));
  }
  if (wanted("gradcheck")) {
    for (Activation act : {Activation::relu, Activation::tanh}) {
      for (std::size_t layers = 1; layers <= 3; ++layers) {
        MlpSpec spec{6, 4, std::vector<std::size_t>(layers, 16), act, 0};
        results.push_back(check_gradients(spec, 100, opts.seed));
      }
    }
  }
  return results;
}

void print_results(std::ostream& out, const std::vector<SuiteResult>& results) {
  out << std::left << std::setw(14) << "suite" << std::setw(34) << "subject" << std::setw(9)
      << "samples" << std::setw(14) << "max_error" << std::setw(11) << "tolerance"
      << "status\n";
  for (const SuiteResult& r : results) {
    std::ostringstream err, tol;
    err << std::scientific << std::setprecision(3) << r.max_error;
    tol << std::scientific << std::setprecision(0) << r.tolerance;
    out << std::left << std::setw(14) << r.suite << std::setw(34) << r.subject << std::setw(9)
        << r.samples << std::setw(14) << err.str() << std::setw(11) << tol.str()
        << (r.passed ? "PASS" : "FAIL") << '\n';
  }
  for (const SuiteResult& r : results)
    if (!r.passed) out << "FAIL " << r.suite << " [" << r.subject << "]: " << r.failure << '\n';
}

}  // namespace symred

namespace symred {

TransitionDataset transform_dataset(const TransitionDataset& data, const Group& group,
                                    std::uint64_t seed) {
  if (group.state_dim() != data.n || group.control_dim() != data.n_u)
    throw std::invalid_argument("transform_dataset: group and dataset dims differ");
  TransitionDataset out = data;
  for (std::size_t k = 0; k < out.triples.size(); ++k) {
    Rng rng(derive_seed(seed, k));
    const GroupElement g = group.sample_element(rng);
    Transition& t = out.triples[k];
    t.x = group.act_state(g, t.x);
    t.u = group.act_control(g, t.u);
    t.x_next = group.act_state(g, t.x_next);
  }
  return out;
}

}  // namespace symred
