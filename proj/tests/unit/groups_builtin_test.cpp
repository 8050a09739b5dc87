#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oracles/closed_form.hpp"
#include "support.hpp"
#include "symred/groups.hpp"
#include "symred/verify.hpp"

using namespace symred;
using symred::testing::angle_gap;
using symred::testing::max_diff;

namespace {

oracle::Car to_car(const StateVector& x) {
  oracle::Car c;
  for (int i = 0; i < 6; ++i) c[i] = x[i];
  return c;
}

oracle::Reacher to_reacher(const StateVector& x) {
  oracle::Reacher r{};
  for (int i = 0; i < 11; ++i) r[i + 1] = x[i];
  return r;
}

}  // namespace

TEST(SE2Car, FrameMatchesClosedForm) {
  SE2CarGroup car;
  Rng rng(101);
  for (int i = 0; i < 100; ++i) {
    const StateVector x = car.sample_state(rng);
    const auto s = to_car(x);
    const GroupElement g = car.moving_frame(x);
    const auto want = oracle::car_gamma(s);
    EXPECT_NEAR(g.coords(0), want[0], 1e-12);
    EXPECT_NEAR(g.coords(1), want[1], 1e-12);
    EXPECT_LT(angle_gap(g.coords(2), want[2]), 1e-12);

    const GroupElement gi = car.inverse(g);
    const auto want_inv = oracle::car_gamma_inverse(s);
    EXPECT_NEAR(gi.coords(0), want_inv[0], 1e-12);
    EXPECT_NEAR(gi.coords(1), want_inv[1], 1e-12);
    EXPECT_LT(angle_gap(gi.coords(2), want_inv[2]), 1e-12);

    const ReducedState r = car.reduce(x);
    const auto want_rho = oracle::car_rho(s);
    EXPECT_NEAR(r[0], want_rho[0], 1e-12);
    EXPECT_NEAR(r[1], want_rho[1], 1e-12);
  }
}

TEST(SE2Car, ActionMatchesClosedForm) {
  SE2CarGroup car;
  Rng rng(102);
  for (int i = 0; i < 100; ++i) {
    const GroupElement g = car.sample_element(rng);
    const StateVector x = car.sample_state(rng);
    const auto want = oracle::car_action({g.coords(0), g.coords(1), g.coords(2)}, to_car(x));
    const StateVector y = car.act_state(g, x);
    for (int k = 0; k < 6; ++k) EXPECT_NEAR(y[k], want[k], 1e-12);
  }
}

TEST(SE2Car, ControlsAreInvariant) {
  SE2CarGroup car;
  Rng rng(1);
  const ControlVector u{0.3, -0.2};
  EXPECT_EQ(car.act_control(car.sample_element(rng), u), u);
}

TEST(SE2Car, HeadingIsRenormalisedBeforeTheFrame) {
  SE2CarGroup car;
  const StateVector unit{1, 2, 0.5, 0.1, 0.6, 0.8};
  const StateVector scaled{1, 2, 0.5, 0.1, 1.2, 1.6};
  EXPECT_LT(car.element_distance(car.moving_frame(unit), car.moving_frame(scaled)), 1e-15);
}

TEST(SE2Car, ComposeAndInverseLaws) {
  SE2CarGroup car;
  Vector a(3), b(3);
  a << 1, 0, std::numbers::pi / 2;
  b << 1, 0, 0;
  // Rotating b's translation by a's angle: (0, 1) + (1, 0).
  const GroupElement ab = car.compose(car.make_element(a), car.make_element(b));
  EXPECT_NEAR(ab.coords(0), 1, 1e-15);
  EXPECT_NEAR(ab.coords(1), 1, 1e-15);
  EXPECT_NEAR(ab.coords(2), std::numbers::pi / 2, 1e-15);
  const GroupElement e = car.compose(ab, car.inverse(ab));
  EXPECT_LT(car.element_distance(e, car.identity()), 1e-15);
}

TEST(Reacher, FrameMatchesClosedForm) {
  ReacherGroup reacher;
  Rng rng(103);
  for (int i = 0; i < 100; ++i) {
    const StateVector x = reacher.sample_state(rng);
    const auto s = to_reacher(x);
    const GroupElement g = reacher.moving_frame(x);
    const auto want = oracle::reacher_gamma(s);
    EXPECT_LT(angle_gap(g.coords(0), want[0]), 1e-12);
    for (int k = 1; k < 4; ++k) EXPECT_NEAR(g.coords(k), want[k], 1e-12);

    const GroupElement gi = reacher.inverse(g);
    const auto want_inv = oracle::reacher_gamma_inverse(s);
    EXPECT_LT(angle_gap(gi.coords(0), want_inv[0]), 1e-12);
    for (int k = 1; k < 4; ++k) EXPECT_NEAR(gi.coords(k), want_inv[k], 1e-12);

    const ReducedState r = reacher.reduce(x);
    const auto want_rho = oracle::reacher_rho(s);
    for (int k = 0; k < 6; ++k) EXPECT_NEAR(r[k], want_rho[k], 1e-12);
  }
}

TEST(Reacher, ActionMatchesClosedForm) {
  ReacherGroup reacher;
  Rng rng(104);
  for (int i = 0; i < 100; ++i) {
    const GroupElement g = reacher.sample_element(rng);
    const StateVector x = reacher.sample_state(rng);
    const auto want = oracle::reacher_action(
        {g.coords(0), g.coords(1), g.coords(2), g.coords(3)}, to_reacher(x));
    const StateVector y = reacher.act_state(g, x);
    for (int k = 0; k < 11; ++k) EXPECT_NEAR(y[k], want[k + 1], 1e-12) << "entry " << k;
  }
}

TEST(Reacher, CrossSectionLayout) {
  ReacherGroup reacher;
  EXPECT_EQ(reacher.cross_section_indices(), (std::vector<std::size_t>{0, 2, 4, 5, 10}));
  EXPECT_EQ(reacher.reduced_indices(), (std::vector<std::size_t>{1, 3, 6, 7, 8, 9}));
  EXPECT_EQ(reacher.cross_section_constant(), (Vector(5) << 1, 0, 0, 0, 0).finished());
  EXPECT_EQ(reacher.reduced_dim(), 6u);
}

TEST(ConstantTranslation, EverythingCollapsesToOrigin) {
  ConstantTranslationGroup goal(6);
  Rng rng(2);
  const StateVector x = goal.sample_state(rng);
  EXPECT_EQ(goal.reduced_dim(), 0u);
  EXPECT_LT(symred::testing::max_abs(goal.act_state(goal.moving_frame(x), x).values()), 1e-15);
  EXPECT_EQ(goal.reduce(x).size(), 0u);
}

TEST(Builtins, DimensionsOfTheExperimentGroups) {
  const auto parking = make_parking_group();
  EXPECT_EQ(parking->state_dim(), 24u);
  EXPECT_EQ(parking->control_dim(), 4u);
  EXPECT_EQ(parking->dim(), 18u);
  EXPECT_EQ(parking->reduced_dim(), 4u);
  EXPECT_EQ(parking->reduced_dim() + parking->control_dim(), 8u);
  EXPECT_EQ(parking->reduced_indices(), (std::vector<std::size_t>{2, 3, 8, 9}));
  Rng rng(3);
  EXPECT_EQ(parking->reduce(parking->sample_state(rng)).size(), 4u);

  const auto reacher = make_reacher_group();
  EXPECT_EQ(reacher->reduced_dim() + reacher->control_dim(), 8u);
  EXPECT_EQ(reacher->state_dim() + reacher->control_dim(), 13u);
}

TEST(Builtins, RegistryById) {
  for (const auto& id : builtin_group_ids()) EXPECT_EQ(make_group(id)->id(), id);
  EXPECT_EQ(make_group("const:3")->state_dim(), 3u);
  EXPECT_THROW(make_group("se3"), std::invalid_argument);
  EXPECT_THROW(make_group("const:"), std::invalid_argument);
  EXPECT_THROW(make_group("const:x"), std::invalid_argument);
}

TEST(Builtins, ParkingReducesEachCarIndependently) {
  const auto parking = make_parking_group();
  SE2CarGroup car;
  Rng rng(12);
  for (int i = 0; i < 50; ++i) {
    const StateVector x = parking->sample_state(rng);
    const ReducedState r = parking->reduce(x);
    const ReducedState r1 = car.reduce(StateVector(Vector(x.values().segment(0, 6))));
    const ReducedState r2 = car.reduce(StateVector(Vector(x.values().segment(6, 6))));
    EXPECT_LT(max_diff(Vector(r.values().head(2)), r1.values()), 1e-15);
    EXPECT_LT(max_diff(Vector(r.values().tail(2)), r2.values()), 1e-15);
  }
}

/// Hand-rolled property loops: laws hold for random draws on every builtin.
class BuiltinLaws : public ::testing::TestWithParam<std::string> {};

TEST_P(BuiltinLaws, AxiomsFrameLemmaEquivarianceReconstruction) {
  const auto g = make_group(GetParam());
  VerifyOptions opts;
  opts.samples = 500;
  opts.seed = 77;
  for (const SuiteResult& r :
       {check_group_axioms(*g, opts), check_frame_property(*g, opts), check_lemma1(*g, opts),
        check_frame_equivariance(*g, opts), check_reconstruction(*g, opts)}) {
    EXPECT_TRUE(r.passed) << r.suite << ": " << r.failure;
    EXPECT_LT(r.max_error, r.tolerance) << r.suite;
  }
}

TEST_P(BuiltinLaws, Lemma1DirectLoop) {
  const auto grp = make_group(GetParam());
  Rng rng(derive_seed(99, GetParam().size()));
  for (int i = 0; i < 300; ++i) {
    const GroupElement g = grp->sample_element(rng);
    const StateVector x = grp->sample_state(rng);
    EXPECT_LT(max_diff(grp->reduce(grp->act_state(g, x)), grp->reduce(x)), 1e-9);
  }
}

INSTANTIATE_TEST_SUITE_P(All, BuiltinLaws,
                         ::testing::Values("se2car", "so2car", "parking2", "reacher", "const:6"),
                         [](const auto& info) {
                           std::string s = info.param;
                           std::replace(s.begin(), s.end(), ':', '_');
                           return s;
                         });
