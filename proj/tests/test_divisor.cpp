#include <gtest/gtest.h>

#include <algorithm>

#include "grr/arith.hpp"
#include "grr/divisor.hpp"

using namespace grr;

namespace {

/// Effective-equivalence by interval test: some m with d1 - m r >= 0 and
/// d2 + m r >= 0 exists iff floor(d1/r) >= ceil(-d2/r).
bool eff_oracle(std::int64_t r, Divisor d) { return floor_div(d.d1, r) >= ceil_div(-d.d2, r); }

/// Rank from the definition, using eff_oracle.
std::int64_t rank_oracle(std::int64_t r, Divisor d) {
  if (!eff_oracle(r, d)) return -1;
  std::int64_t k = 0;
  for (;; ++k) {
    for (std::int64_t a = 0; a <= k + 1; ++a)
      if (!eff_oracle(r, {d.d1 - a, d.d2 - (k + 1 - a)})) return k;
  }
}

/// Lattice points below d by scanning a box of the plane: (x, y) lies on
/// L_r iff x + y = 2c with 0 <= c < r and x - y is a multiple of 2r.
std::int64_t lat_oracle(std::int64_t r, Divisor d) {
  std::int64_t count = 0;
  for (std::int64_t x = -60; x <= d.d1; ++x)
    for (std::int64_t y = -60; y <= d.d2; ++y) {
      if (mod_floor(x + y, 2) != 0 || mod_floor(x - y, 2 * r) != 0) continue;
      std::int64_t c = (x + y) / 2;
      if (c >= 0 && c < r) ++count;
    }
  return count;
}

}  // namespace

TEST(EdgeCount, RejectsNonPositive) {
  EXPECT_THROW(EdgeCount(0), InvalidArgument);
  EXPECT_THROW(EdgeCount(-3), InvalidArgument);
  EXPECT_EQ(EdgeCount(4).value(), 4);
}

TEST(GrrrClosed, Examples) {
  EXPECT_EQ(grrr_closed(EdgeCount(4), {2, 2}), 2);
  EXPECT_EQ(grrr_closed(EdgeCount(4), {-1, 3}), -1);
  EXPECT_EQ(grrr_closed(EdgeCount(4), {5, 2}), 4);
  EXPECT_EQ(grrr_closed(EdgeCount(1), {0, 0}), 0);
}

TEST(GrrrBruteforce, Examples) {
  EXPECT_EQ(grrr_bruteforce(EdgeCount(4), {2, 2}), 2);
  EXPECT_EQ(grrr_bruteforce(EdgeCount(4), {0, 0}), 0);
  EXPECT_EQ(grrr_bruteforce(EdgeCount(2), {2, -2}), 0);
}

TEST(GrrrBruteforce, BudgetExceeded) {
  EXPECT_THROW(grrr_bruteforce(EdgeCount(3), {300, 200}), BudgetExceeded);
  EXPECT_THROW(grrr_bruteforce(EdgeCount(3), {3, 3}, 5), BudgetExceeded);
  EXPECT_NO_THROW(grrr_bruteforce(EdgeCount(3), {3, 2}, 5));
}

TEST(LatCount, Examples) {
  EXPECT_EQ(lat_count(EdgeCount(4), {2, 2}), 3);
  EXPECT_EQ(lat_count(EdgeCount(4), {-1, 3}), 0);
  EXPECT_EQ(lat_count(EdgeCount(2), {0, 0}), 1);
  auto pts = down_cone_points(EdgeCount(4), {2, 2});
  std::vector<Divisor> ds;
  for (auto p : pts) ds.push_back(p.point(EdgeCount(4)));
  std::sort(ds.begin(), ds.end());
  EXPECT_EQ(ds, (std::vector<Divisor>{{0, 0}, {1, 1}, {2, 2}}));
}

TEST(CanonicalDivisor, Examples) {
  EXPECT_EQ(canonical_divisor(EdgeCount(4)), (Divisor{2, 2}));
  EXPECT_EQ(canonical_divisor(EdgeCount(1)), (Divisor{-1, -1}));
  EXPECT_EQ(canonical_divisor(EdgeCount(2)), (Divisor{0, 0}));
}

TEST(Normalize, Examples) {
  auto a = normalize(EdgeCount(4), {5, -1});
  EXPECT_EQ(a.divisor, (Divisor{1, 3}));
  EXPECT_EQ(a.shift, -1);
  auto b = normalize(EdgeCount(4), {2, 2});
  EXPECT_EQ(b.divisor, (Divisor{2, 2}));
  EXPECT_EQ(b.shift, 0);
  auto c = normalize(EdgeCount(1), {7, -7});
  EXPECT_EQ(c.divisor, (Divisor{0, 0}));
  EXPECT_EQ(c.shift, -7);
}

TEST(LevelSets, Examples) {
  EdgeCount r(4);
  auto s0 = level_set_points(r, 0, DivisorBox::square(0, 3));
  std::vector<Divisor> want;
  DivisorBox::square(0, 3).for_each([&](Divisor d) {
    if (d.d1 == 0 || d.d2 == 0) want.push_back(d);
  });
  EXPECT_EQ(s0, want);
  EXPECT_EQ(level_set_points(r, 1, {1, 1, 1, 1}), (std::vector<Divisor>{{1, 1}}));
  EXPECT_TRUE(level_set_points(r, 0, {1, 1, 1, 1}).empty());
}

TEST(LevelSets, RowMajorOrder) {
  auto pts = level_set_points(EdgeCount(2), 0, DivisorBox{-3, 3, -3, 3});
  EXPECT_TRUE(std::is_sorted(pts.begin(), pts.end(), [](Divisor a, Divisor b) {
    return std::pair{a.d2, a.d1} < std::pair{b.d2, b.d1};
  }));
}

TEST(Rank, AllMethodsAgreeWithOraclesOnGrid) {
  for (std::int64_t r = 1; r <= 6; ++r) {
    EdgeCount R(r);
    DivisorBox::square(-10, 10).for_each([&](Divisor d) {
      std::int64_t want = rank_oracle(r, d);
      ASSERT_EQ(grrr_closed(R, d), want) << "r=" << r << " d=" << d;
      ASSERT_EQ(grrr_bruteforce(R, d), want) << "r=" << r << " d=" << d;
      ASSERT_EQ(grrr_recursive(R, d), want) << "r=" << r << " d=" << d;
      ASSERT_EQ(lat_count(R, d), want + 1) << "r=" << r << " d=" << d;
    });
  }
}

TEST(LatCount, MatchesPlaneScan) {
  for (std::int64_t r = 1; r <= 5; ++r)
    DivisorBox::square(-6, 6).for_each([&](Divisor d) {
      ASSERT_EQ(lat_count(EdgeCount(r), d), lat_oracle(r, d)) << "r=" << r << " d=" << d;
    });
}

TEST(Rank, RiemannRochIdentity) {
  for (std::int64_t r = 1; r <= 6; ++r) {
    EdgeCount R(r);
    DivisorBox::square(-10, 10).for_each([&](Divisor d) {
      ASSERT_EQ(grrr_closed(R, d) - grrr_closed(R, canonical_divisor(R) - d), d.degree() - r + 2);
    });
  }
}
