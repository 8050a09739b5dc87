#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "support.hpp"
#include "symred/groups.hpp"
#include "symred/rng.hpp"
#include "symred/verify.hpp"

using namespace symred;
using symred::testing::max_diff;
constexpr double kPi = std::numbers::pi;

TEST(Angles, WrapIntoHalfOpenInterval) {
  EXPECT_DOUBLE_EQ(wrap_angle(0.0), 0.0);
  EXPECT_DOUBLE_EQ(wrap_angle(kPi), kPi);
  EXPECT_DOUBLE_EQ(wrap_angle(-kPi), kPi);
  EXPECT_NEAR(wrap_angle(3 * kPi), kPi, 1e-12);
  EXPECT_NEAR(wrap_angle(2 * kPi + 0.25), 0.25, 1e-12);
  EXPECT_NEAR(wrap_angle(-2 * kPi - 0.25), -0.25, 1e-12);
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double a = rng.uniform(-50, 50);
    const double w = wrap_angle(a);
    EXPECT_GT(w, -kPi);
    EXPECT_LE(w, kPi);
    EXPECT_NEAR(std::remainder(w - a, 2 * kPi), 0.0, 1e-12);
  }
}

TEST(Angles, DifferenceIsShortestArc) {
  EXPECT_NEAR(angle_difference(kPi - 0.1, -kPi + 0.1), -0.2, 1e-12);
  EXPECT_NEAR(angle_difference(0.3, 0.1), 0.2, 1e-12);
}

TEST(Rng, DeterministicAndSeedSensitive) {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    EXPECT_EQ(x, b.next());
    differs = differs || x != c.next();
  }
  EXPECT_TRUE(differs);
}

TEST(Rng, SplitmixReferenceValues) {
  // Published splitmix64 outputs for state 0.
  std::uint64_t s = 0;
  EXPECT_EQ(splitmix64(s), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(splitmix64(s), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(splitmix64(s), 0x06c45d188009454fULL);
}

TEST(Rng, RangesAndIndices) {
  Rng rng(1);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 7000; ++i) {
    const double u = rng.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double v = rng.uniform(-2.0, 3.0);
    ASSERT_GE(v, -2.0);
    ASSERT_LT(v, 3.0);
    const auto k = rng.below(7);
    ASSERT_LT(k, 7u);
    ++hits[k];
  }
  for (int h : hits) EXPECT_GT(h, 800);
}

TEST(Rng, ShuffleIsPermutation) {
  Rng rng(9);
  std::vector<int> v(50);
  for (int i = 0; i < 50; ++i) v[i] = i;
  auto w = v;
  rng.shuffle(w);
  EXPECT_NE(v, w);
  std::sort(w.begin(), w.end());
  EXPECT_EQ(v, w);
}

TEST(Rng, DerivedSeedsAreDistinct) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t m = 0; m < 20; ++m)
    for (std::uint64_t s = 0; s < 20; ++s) seen.insert(derive_seed(m, s));
  EXPECT_EQ(seen.size(), 400u);
}

TEST(GroupContract, RejectsForeignAndMalformedElements) {
  SE2CarGroup car;
  ReacherGroup reacher;
  const auto x = StateVector{0, 0, 1, 0, 1, 0};
  EXPECT_THROW(car.act_state(reacher.identity(), x), std::invalid_argument);
  EXPECT_THROW(car.act_state(GroupElement{"se2car", Vector::Zero(2)}, x), std::invalid_argument);
  EXPECT_THROW(car.act_state(car.identity(), StateVector{1, 2, 3}), std::invalid_argument);
  Vector bad(3);
  bad << 0, std::nan(""), 0;
  EXPECT_THROW(car.make_element(bad), std::invalid_argument);
  EXPECT_THROW(car.act_control(car.identity(), ControlVector{1, 2, 3}), std::invalid_argument);
  EXPECT_THROW(car.compose(car.identity(), reacher.identity()), std::invalid_argument);
}

TEST(GroupContract, ElementDistanceComparesAnglesOnTheCircle) {
  SE2CarGroup car;
  Vector a(3), b(3);
  a << 1, 2, kPi - 1e-3;
  b << 1, 2, -kPi + 1e-3;
  EXPECT_NEAR(car.element_distance(car.make_element(a), car.make_element(b)), 2e-3, 1e-12);
}

TEST(GroupContract, ReconstructPlacesConstantAndReducedCoords) {
  SE2CarGroup car;
  const StateVector x = car.reconstruct_on_cross_section(ReducedState{0.5, -0.25});
  EXPECT_EQ(x.values(), (Vector(6) << 0, 0, 0.5, -0.25, 1, 0).finished());
  EXPECT_THROW(car.reconstruct_on_cross_section(ReducedState{1.0}), std::invalid_argument);
}

TEST(GroupContract, ReduceOfCrossSectionPointIsItsProjection) {
  Rng rng(5);
  for (const auto& id : builtin_group_ids()) {
    const auto g = make_group(id);
    for (int i = 0; i < 100; ++i) {
      const ReducedState xb = g->reduce(g->sample_state(rng));
      const StateVector on_c = g->reconstruct_on_cross_section(xb);
      EXPECT_LT(max_diff(g->reduce(on_c), xb), 1e-12) << id;
      EXPECT_LT(max_diff(g->project_reduced(on_c), xb), 1e-15) << id;
    }
  }
}

TEST(GroupContract, SingularFrameIsADomainError) {
  SE2CarGroup car;
  EXPECT_THROW(car.moving_frame(StateVector{1, 2, 0, 0, 0, 0}), std::domain_error);
  ReacherGroup reacher;
  EXPECT_THROW(reacher.moving_frame(StateVector::zeros(11)), std::domain_error);
}

TEST(ProductGroup, RequiresContiguousPartition) {
  auto car = std::make_shared<const SE2CarGroup>();
  EXPECT_THROW(ProductGroup("gap", {{car, 0, 0}, {car, 7, 2}}), std::invalid_argument);
  EXPECT_THROW(ProductGroup("overlap", {{car, 0, 0}, {car, 5, 2}}), std::invalid_argument);
  EXPECT_THROW(ProductGroup("ctrl", {{car, 0, 0}, {car, 6, 1}}), std::invalid_argument);
  EXPECT_THROW(ProductGroup("empty", {}), std::invalid_argument);
  EXPECT_NO_THROW(ProductGroup("ok", {{car, 0, 0}, {car, 6, 2}}));
}

TEST(ProductGroup, EmbeddedFactorActsOnlyOnItsSlice) {
  const auto parking = make_parking_group();
  Rng rng(11);
  const StateVector x = parking->sample_state(rng);
  SE2CarGroup car;
  const GroupElement g = car.sample_element(rng);
  const StateVector y = parking->act_state(parking->embed(1, g), x);
  Vector car2 = x.values().segment(6, 6);
  EXPECT_LT(max_diff(Vector(y.values().segment(6, 6)),
                     car.act_state(g, StateVector(car2)).values()),
            1e-15);
  EXPECT_EQ(y.values().head(6), x.values().head(6));
  EXPECT_EQ(y.values().tail(12), x.values().tail(12));
}

TEST(ProductGroup, LinearOnlyWhenEveryFactorIs) {
  EXPECT_FALSE(make_parking_group()->is_linear_action());
  auto rot = std::make_shared<const SO2CarGroup>();
  EXPECT_TRUE(ProductGroup("rots", {{rot, 0, 0}, {rot, 6, 2}}).is_linear_action());
}

namespace {

/// se2car with the sign of the inverse rotation flipped.
class WrongInverseCar final : public SE2CarGroup {
 protected:
  Vector inverse_coords(const Vector& g) const override {
    Vector h = SE2CarGroup::inverse_coords(g);
    h(2) = -h(2);
    return h;
  }
};

}  // namespace

TEST(Mutation, WrongInverseSignFailsLemma1) {
  WrongInverseCar broken;
  VerifyOptions opts;
  opts.samples = 200;
  const SuiteResult r = check_lemma1(broken, opts);
  EXPECT_FALSE(r.passed);
  EXPECT_GT(r.max_error, 1e-3);
  EXPECT_FALSE(r.failure.empty());
  EXPECT_TRUE(check_lemma1(SE2CarGroup(), opts).passed);
}

TEST(Mutation, WrongInverseSignFailsAxioms) {
  VerifyOptions opts;
  opts.samples = 200;
  EXPECT_FALSE(check_group_axioms(WrongInverseCar(), opts).passed);
}
