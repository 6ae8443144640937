#include <gtest/gtest.h>

#include "grr/exactness.hpp"
#include "grr/sheaf.hpp"

using namespace grr;

TEST(Objects, NamesRoundTrip) {
  for (Obj o : kObjects) EXPECT_EQ(parse_obj(obj_name(o)), o);
  for (Arrow a : kArrows) EXPECT_EQ(parse_arrow(arrow_name(a)), a);
  EXPECT_THROW(parse_obj("C7"), InvalidArgument);
  EXPECT_EQ(o_exponent(Arrow::B1A1, 4), -1);
  EXPECT_EQ(o_exponent(Arrow::B3A1, 4), 4);
  EXPECT_EQ(o_exponent(Arrow::B3A2, 4), -4);
}

TEST(SlotSupport, FiniteIsSortedAndUnique) {
  auto s = SlotSupport::finite({3, -1, 3, 0});
  EXPECT_EQ(s.points, (std::vector<std::int64_t>{-1, 0, 3}));
  EXPECT_EQ(SlotSupport::finite({}).kind, SlotSupport::Kind::empty);
  EXPECT_EQ(SlotSupport::range(3).points, (std::vector<std::int64_t>{0, 1, 2}));
  EXPECT_TRUE(SlotSupport::nonneg().contains(0));
  EXPECT_FALSE(SlotSupport::nonneg().contains(-1));
}

TEST(GradedSpace, WindowAndAction) {
  GradedSpace g = GradedSpace::polynomial() + GradedSpace::truncated(2);
  EXPECT_EQ(g.window(1).size(), 4u);  // (0,0),(0,1),(1,0),(1,1)
  EXPECT_EQ(g.act({1, 1}, 1), std::nullopt);
  EXPECT_EQ(g.act({0, 3}, 2), (BasisVec{0, 5}));
  EXPECT_FALSE(g.finite());
  EXPECT_TRUE(GradedSpace::truncated(4).finite());
}

TEST(Constructors, StructureSheafAndMValidate) {
  for (std::int64_t r = 1; r <= 6; ++r) {
    EdgeCount R(r);
    EXPECT_TRUE(validate(make_structure_sheaf(R)).ok);
    EXPECT_TRUE(validate(make_omega(R)).ok);
    for (std::int64_t a = -3; a <= 3; ++a)
      for (std::int64_t b = -3; b <= 3; ++b) {
        auto m = make_M(R, {a, b});
        auto rep = validate(m);
        ASSERT_TRUE(rep.ok) << rep.law << ": " << rep.message;
        EXPECT_EQ(m.value(Obj::B3).size(), static_cast<std::size_t>(r));
        EXPECT_TRUE(validate(make_line_bundle(R, {a, b})).ok);
      }
  }
}

TEST(Constructors, MOfRankOneIsTheLineBundle) {
  for (std::int64_t a = -2; a <= 2; ++a)
    for (std::int64_t b = -2; b <= 2; ++b)
      EXPECT_TRUE(structurally_equal(make_M(EdgeCount(1), {a, b}), make_line_bundle(EdgeCount(1), {a, b})));
}

TEST(Constructors, Skyscrapers) {
  auto s = make_skyscraper(Obj::B1, GradedSpace::truncated(1), 3);
  EXPECT_TRUE(validate(s).ok);
  for (Obj o : kObjects) EXPECT_EQ(s.value(o).is_zero(), o != Obj::B1);

  auto a = make_skyscraper(Obj::A1, GradedSpace::laurent(), 3);
  auto rep = validate(a);
  EXPECT_TRUE(rep.ok) << rep.message;
  EXPECT_FALSE(a.value(Obj::B1).is_zero());
  EXPECT_FALSE(a.value(Obj::B3).is_zero());
  EXPECT_TRUE(a.value(Obj::B2).is_zero());
  EXPECT_TRUE(a.value(Obj::A2).is_zero());
}

TEST(Constructors, Coskyscrapers) {
  EdgeCount r(3);
  auto c = make_coskyscraper(r, Obj::B1, GradedSpace::polynomial());
  EXPECT_TRUE(validate(c).ok);
  EXPECT_EQ(c.value(Obj::A1).size(), 1u);
  EXPECT_TRUE(c.value(Obj::A2).is_zero());

  auto t = make_coskyscraper(r, Obj::B1, GradedSpace::truncated(2));
  EXPECT_TRUE(validate(t).ok);
  EXPECT_TRUE(t.value(Obj::A1).is_zero());

  auto b3 = make_coskyscraper(r, Obj::B3, GradedSpace::laurent(2));
  EXPECT_TRUE(validate(b3).ok);
  EXPECT_EQ(b3.value(Obj::A1).size(), 2u);
  EXPECT_EQ(b3.value(Obj::A2).size(), 2u);
  EXPECT_THROW(make_coskyscraper(r, Obj::B3, GradedSpace::polynomial()), InvalidArgument);
}

TEST(Constructors, ConstantSheaf) {
  auto c = make_constant(2);
  EXPECT_TRUE(validate(c).ok);
  for (Obj o : kObjects) EXPECT_EQ(c.value(o).window(0).size(), 2u);
}

TEST(Validation, ModuleLawViolation) {
  auto m = make_M(EdgeCount(3), {0, 0});
  m.map(Arrow::B3A1).terms[1][0].scale = 4;
  auto rep = validate(m);
  EXPECT_FALSE(rep.ok);
  EXPECT_EQ(rep.law, "module");
}

TEST(Validation, SupportViolation) {
  Sheaf2V f;
  f.value(Obj::B1) = GradedSpace::laurent();
  f.value(Obj::A1) = GradedSpace::polynomial();
  f.sync();
  f.map(Arrow::B1A1).add(0, {0, 1, 0, 1});
  auto rep = validate(f);
  EXPECT_FALSE(rep.ok);
  EXPECT_EQ(rep.law, "support");
  f.map(Arrow::B1A1).quotient = true;
  EXPECT_TRUE(validate(f).ok);
}

TEST(Validation, ShapeViolation) {
  auto m = make_M(EdgeCount(2), {0, 0});
  m.map(Arrow::B1A1).terms[0][0].target_slot = 5;
  EXPECT_EQ(validate(m).law, "shape");
  auto n = make_M(EdgeCount(2), {0, 0});
  n.value(Obj::A1) = GradedSpace::laurent(2);
  EXPECT_EQ(validate(n).law, "shape");
}

TEST(Tensor, LineBundleTwistMatchesM) {
  for (std::int64_t r = 1; r <= 4; ++r)
    for (std::int64_t a = -2; a <= 2; ++a)
      for (std::int64_t b = -2; b <= 2; ++b)
        for (std::int64_t c = -2; c <= 2; ++c)
          for (std::int64_t e = -2; e <= 2; ++e) {
            EdgeCount R(r);
            auto t = tensor(make_line_bundle(R, {a, b}), make_M(R, {c, e}));
            ASSERT_TRUE(validate(t).ok);
            ASSERT_TRUE(structurally_equal(t, make_M(R, {a + c, b + e}))) << r << " " << a << b << c << e;
          }
}

TEST(Tensor, RejectsTorsionAndMismatchedTags) {
  EXPECT_THROW(tensor(make_M(EdgeCount(2), {0, 0}), make_M(EdgeCount(3), {0, 0})), InvalidArgument);
  EXPECT_THROW(tensor(make_skyscraper(Obj::B1, GradedSpace::truncated(1), 2), make_M(EdgeCount(2), {0, 0})),
               InvalidArgument);
}

TEST(Structural, PermutedSlotsStillMatch) {
  auto m = make_M(EdgeCount(3), {1, 0});
  auto p = m;
  std::swap(p.value(Obj::B3).slots[0], p.value(Obj::B3).slots[2]);
  p.sync();
  std::swap(p.map(Arrow::B3A1).terms[0], p.map(Arrow::B3A1).terms[2]);
  std::swap(p.map(Arrow::B3A2).terms[0], p.map(Arrow::B3A2).terms[2]);
  EXPECT_TRUE(structurally_equal(m, p));
  EXPECT_FALSE(structurally_equal(m, make_M(EdgeCount(3), {1, 1})));
  EXPECT_FALSE(structurally_equal(m, make_M(EdgeCount(3), {0, 1})));
}

TEST(DirectSum, SizesAndValidity) {
  auto s = direct_sum(make_M(EdgeCount(2), {0, 0}), make_structure_sheaf(EdgeCount(2)));
  EXPECT_TRUE(validate(s).ok);
  EXPECT_EQ(s.value(Obj::B3).size(), 3u);
  EXPECT_EQ(s.value(Obj::A1).size(), 2u);
}

TEST(RestrictExtendZero, KeepsOnlyChosenObjects) {
  auto m = make_M(EdgeCount(2), {0, 0});
  auto r = restrict_extend_zero(m, {Obj::B1, Obj::A1});
  EXPECT_TRUE(validate(r).ok);
  EXPECT_TRUE(r.value(Obj::B3).is_zero());
  EXPECT_EQ(r.map(Arrow::B1A1), m.map(Arrow::B1A1));
}

TEST(Morphisms, MuSequenceIsValidAndExact) {
  for (std::int64_t r = 1; r <= 4; ++r)
    for (int axis : {1, 2}) {
      auto ses = build_mu_ses(EdgeCount(r), {1, -1}, axis);
      EXPECT_TRUE(validate_morphism(ses.mu, 12).ok);
      EXPECT_TRUE(validate_morphism(ses.q, 12).ok);
      auto ex = check_ses_window(ses.mu, ses.q, 12);
      EXPECT_TRUE(ex.ok) << (ex.violations.empty() ? "" : ex.violations[0]);
    }
  EXPECT_THROW(build_mu_ses(EdgeCount(2), {0, 0}, 3), InvalidArgument);
}

TEST(Morphisms, BrokenSquareIsDetected) {
  auto ses = build_mu_ses(EdgeCount(2), {0, 0}, 1);
  ses.mu.at(Obj::A1).terms[0][0].offset = 1;
  auto rep = validate_morphism(ses.mu, 8);
  EXPECT_FALSE(rep.ok);
  EXPECT_EQ(rep.law, "commute");
}

TEST(Exactness, NonExactSequenceIsDetected) {
  auto ses = build_mu_ses(EdgeCount(2), {0, 0}, 1);
  ses.q = SheafMorphism::zero(ses.mid, ses.quot);
  EXPECT_FALSE(check_ses_window(ses.mu, ses.q, 8).ok);
}
