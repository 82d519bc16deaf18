#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "sistab/bounds.hpp"
#include "sistab/semigroup.hpp"

using namespace sistab;

TEST_CASE("numerical semigroup <2,3> membership") {
  const DesignMatrix a(1, 2, {2, 3});
  CHECK(in_semigroup(a, {7}));   // 2*2 + 3*1
  CHECK_FALSE(in_semigroup(a, {1}));
  CHECK(in_semigroup(a, {0}));
}

TEST_CASE("saturation membership") {
  SECTION("<2,3>: lattice is all of Z, cone is the nonnegative ray") {
    const DesignMatrix a(1, 2, {2, 3});
    CHECK(in_saturation(a, {1}));
    CHECK(in_saturation(a, {0}));
    CHECK_FALSE(in_saturation(a, {-2}));
  }
  SECTION("<2,4>: lattice is 2Z") {
    const DesignMatrix a(1, 2, {2, 4});
    CHECK_FALSE(in_saturation(a, {3}));
    CHECK(in_saturation(a, {6}));
  }
}

TEST_CASE("lattice membership via integer column reduction") {
  // Columns (2,0), (0,2), (1,1): lattice is { (x,y) : x + y even }.
  const DesignMatrix a(2, 3, {2, 0, 1, 0, 2, 1});
  LatticeBasis lattice(a);
  CHECK(lattice.contains({1, 1}));
  CHECK(lattice.contains({2, 0}));
  CHECK(lattice.contains({3, 1}));
  CHECK_FALSE(lattice.contains({1, 0}));
  CHECK_FALSE(lattice.contains({0, 3}));
  CHECK(lattice.contains({-1, 1}));
  CHECK_THROWS_AS(lattice.contains({1}), InvalidInput);
}

TEST_CASE("holes of <2,3> in a box") {
  const DesignMatrix a(1, 2, {2, 3});
  const auto analysis = holes_in_box(a, {20});
  REQUIRE(analysis.holes.size() == 1);
  CHECK(analysis.holes.front() == std::vector<Int>{1});
  CHECK_FALSE(analysis.saturated_in_box);
}

TEST_CASE("2x2 independence margins have no holes") {
  const auto a = build_design_matrix(ModelSpec::independence(2, 2));
  const auto analysis = holes_in_box(a, {5, 5, 5, 5});
  CHECK(analysis.holes.empty());
  CHECK(analysis.saturated_in_box);
}

TEST_CASE("the trivial semigroup Z+ has no holes") {
  const DesignMatrix a(1, 1, {1});
  const auto analysis = holes_in_box(a, {50});
  CHECK(analysis.holes.empty());
  CHECK(analysis.saturated_in_box);
}

TEST_CASE("box volume guard") {
  const DesignMatrix a(1, 1, {1});
  CHECK_THROWS_AS(holes_in_box(a, {20000000}), ResourceLimit);
  CHECK_THROWS_AS(holes_in_box(a, {-1}), InvalidInput);
}

TEST_CASE("semigroup membership implies saturation membership") {
  Rng rng(271828);
  const DesignMatrix gens(2, 3, {2, 3, 1, 0, 1, 2});
  for (int rep = 0; rep < 60; ++rep) {
    std::vector<Int> target = {uniform_int(rng, 0, 12), uniform_int(rng, 0, 12)};
    if (in_semigroup(gens, target)) {
      CHECK(in_saturation(gens, target));
    }
  }
}

TEST_CASE("every hole is LP-feasible with an empty integer fiber") {
  const DesignMatrix a(1, 2, {2, 3});
  const auto analysis = holes_in_box(a, {20});
  for (const auto& h : analysis.holes) {
    const FiberSpec fiber(a, h);
    const PartialAssignment state(fiber);
    CHECK_FALSE(bounds_lp(state, 0).empty);
    CHECK(bounds_exact_ip(state, 0).empty);
  }
}

// The mechanism behind classical-SIS rejections on x1 + alpha x2 = alpha+1:
// after fixing x1 = v, the residual must land in the semigroup generated by
// the remaining column [alpha], and only v = 1 and v = alpha+1 do.
TEST_CASE("rejection link on the alpha example") {
  for (Int alpha : {Int(3), Int(8)}) {
    const auto fiber = testutil::alpha_system(alpha);
    const DesignMatrix tail(1, 1, {alpha});
    const PartialAssignment state(fiber);
    const auto lp = bounds_lp(state, 0);
    REQUIRE_FALSE(lp.empty);
    REQUIRE(lp.lower == 0);
    REQUIRE(lp.upper == alpha + 1);
    for (Int v = lp.lower; v <= lp.upper; ++v) {
      const std::vector<Int> residual = {alpha + 1 - v};
      const bool completable = in_semigroup(tail, residual);
      if (v == 1 || v == alpha + 1) {
        CHECK(completable);
      } else {
        CHECK_FALSE(completable);
      }
    }
  }
}
