#include <gtest/gtest.h>

#include <sstream>

#include "support.hpp"
#include "teamlog/analysis.hpp"
#include "teamlog/parser.hpp"
#include "teamlog/transforms.hpp"

namespace teamlog {
namespace {

TEST(Nu, Examples) {
  GammaTable g = GammaTable::standard();
  EXPECT_EQ(nu_bound(parse("all(x) | all(y)"), 3, g), 6u);
  EXPECT_EQ(nu_bound(parse("exists x (x = y | x != y)"), 7, g), 0u);
  EXPECT_EQ(nu_bound(parse("NE & NE"), 5, g), 2u);
  EXPECT_EQ(nu_bound(parse("geq(x y, 3) || all(x y)"), 2, g), 3u + 4u);
  EXPECT_EQ(nu_bound(parse("const(x) & NE"), 4, g), 1u);
  EXPECT_EQ(nu_bound(parse("D:foo(x, y)"), 3, g), 9u);
  g.set_custom("foo", GammaFn::parse("const:2"));
  EXPECT_EQ(nu_bound(parse("D:foo(x, y)"), 3, g), 2u);
  g.set_by_name("all", GammaFn::parse("lin:5"));
  EXPECT_EQ(nu_bound(parse("all(x)"), 3, g), 15u);
  GammaTable strict = GammaTable::standard();
  strict.set_custom_default(false);
  EXPECT_THROW(nu_bound(parse("D:foo(x)"), 3, strict), Error);
  EXPECT_THROW(GammaFn::parse("quadratic"), Error);
}

TEST(MinimalSubteam, Examples) {
  Model m(3);
  Team full = full_team(3, {"x"});
  EXPECT_EQ(minimal_satisfying_subteam(m, full, parse("x = x")), Team({"x"}));
  EXPECT_EQ(minimal_satisfying_subteam(m, full, parse("all(x)"))->size(), 3u);
  EXPECT_EQ(minimal_satisfying_subteam(m, full, Formula::NE())->size(), 1u);
  EXPECT_FALSE(minimal_satisfying_subteam(m, Team({"x"}, {{0}}), parse("all(x)")).has_value());
  EXPECT_EQ(minimal_satisfying_subteam(m, full, parse("geq(x, 2) & ~all(x)"))->size(), 2u);
  EXPECT_THROW(minimal_satisfying_subteam(Model(3), full_team(3, {"x", "y", "z"}), Formula::NE(), {}, 20),
               LimitError);
}

// A failed search means the whole team fails too.
TEST(MinimalSubteam, NoneImpliesFalse) {
  std::mt19937 rng(31);
  for (unsigned seed = 0; seed < 300; ++seed) {
    testing::FormulaGen gen(seed + 900);
    Formula f = gen.formula(1 + static_cast<int>(seed % 2));
    Model m = testing::random_unary_model(rng, 1 + seed % 2);
    Team t = testing::random_team(rng, m.size(), {"x", "y"}, 4);
    auto w = minimal_satisfying_subteam(m, t, f);
    if (!w) {
      EXPECT_FALSE(eval(m, t, f)) << print(f);
    } else {
      EXPECT_TRUE(w->is_subteam_of(t));
      EXPECT_TRUE(eval(m, *w, f));
    }
  }
}

TEST(Boundedness, Examples) {
  GammaTable g = GammaTable::standard();
  auto all = check_boundedness(parse("all(x)"), 2, g);
  EXPECT_TRUE(all.all_hold());
  EXPECT_FALSE(all.reports.empty());
  EXPECT_TRUE(check_boundedness(parse("NE | NE"), 3, g).all_hold());
  auto mixed = check_boundedness(parse("const(p) & all(x)"), 2, g);
  EXPECT_TRUE(mixed.all_hold());
  for (const auto& r : mixed.reports) EXPECT_EQ(r.nu, r.model_size);
  EXPECT_THROW(check_boundedness(parse("~NE"), 2, g), FragmentError);
  EXPECT_THROW(check_boundedness(parse("dep(x; y)"), 2, g), FragmentError);
}

// A γ smaller than the true witness size must be caught.
TEST(Boundedness, DetectsUndersizedGamma) {
  GammaTable g = GammaTable::standard();
  g.set(AtomKind::All, GammaFn::parse("const:1"));
  auto check = check_boundedness(parse("all(x)"), 2, g);
  EXPECT_FALSE(check.all_hold());
  EXPECT_GT(check.violations(), 0u);
}

TEST(Boundedness, CustomAtoms) {
  GammaTable g = GammaTable::standard();
  Registry reg;
  reg.add(make_dependency("two", 1, "exists a exists b (R(a) & R(b) & a != b)"));
  reg.add(make_dependency("con", 1, "forall a forall b (!R(a) | !R(b) | a = b)"));
  reg.add(make_dependency("conclaimed", 1, "forall a forall b (!R(a) | !R(b) | a = b)", Claim::No));
  EXPECT_TRUE(check_boundedness(parse("D:two(x)"), 3, g, reg).all_hold());
  EXPECT_THROW(check_boundedness(parse("D:con(x)"), 3, g, reg), FragmentError);
  EXPECT_THROW(check_boundedness(parse("D:conclaimed(x)"), 3, g, reg), FragmentError);
}

// Witnesses of a k-ary custom atom never exceed |M|^k.
TEST(Boundedness, CustomArityPower) {
  const char* defs1[] = {"exists a R(a)", "forall a R(a)", "exists a exists b (R(a) & R(b) & a != b)"};
  const char* defs2[] = {"exists a R(a, a)", "forall a exists b R(a, b)", "exists a exists b R(a, b)"};
  for (const char* d : defs1) {
    Registry reg;
    reg.add(make_dependency("d", 1, d));
    for (std::size_t n = 1; n <= 2; ++n)
      for (const Team& t : enumerate_teams(Model(n), {"x"}))
        if (eval(Model(n), t, parse("D:d(x)"), reg))
          EXPECT_LE(minimal_satisfying_subteam(Model(n), t, parse("D:d(x)"), reg)->size(), n);
  }
  for (const char* d : defs2) {
    Registry reg;
    reg.add(make_dependency("d", 2, d));
    for (std::size_t n = 1; n <= 2; ++n)
      for (const Team& t : enumerate_teams(Model(n), {"x", "y"}))
        if (eval(Model(n), t, parse("D:d(x, y)"), reg))
          EXPECT_LE(minimal_satisfying_subteam(Model(n), t, parse("D:d(x, y)"), reg)->size(), n * n);
  }
}

TEST(Hierarchy, Witnesses) {
  auto r1 = hierarchy_witness(2, 1, 1);
  EXPECT_EQ(r1.n, 2u);
  EXPECT_EQ(r1.witness_size, 4u);
  EXPECT_EQ(r1.bound, 2u);
  EXPECT_TRUE(r1.totality_holds);
  EXPECT_TRUE(r1.exceeds);
  auto r3 = hierarchy_witness(2, 3, 1);
  EXPECT_EQ(r3.n, 4u);
  EXPECT_EQ(r3.witness_size, 16u);
  EXPECT_EQ(r3.bound, 12u);
  EXPECT_THROW(hierarchy_witness(1, 1, 2), Error);
  EXPECT_THROW(hierarchy_witness(2, 0, 1), Error);
}

TEST(Hierarchy, LowerArityTotality) {
  EquivOptions o;
  EXPECT_TRUE(equivalent(totality_via_higher_arity({"x"}, {"w"}), parse("all(x)"), {"x"}, {}, 2, {}, o).holds);
  EXPECT_TRUE(equivalent(parse("forall w all(x w)"), parse("all(x)"), {"x", "y"}, {}, 2).holds);
}

TEST(Equivalent, Examples) {
  Formula f = parse("dep(x; y)");
  auto same = equivalent(f, f, {"x", "y"}, {}, 3);
  EXPECT_TRUE(same.holds);
  EXPECT_EQ(same.models_checked, 3u);
  EXPECT_EQ(same.teams_checked, 2u + 16u + 512u);
  EXPECT_TRUE(equivalent(Formula::NE(), parse("forall q all(q)"), {"x"}, {}, 3).holds);

  auto diff = equivalent(parse("const(x)"), Formula::NE(), {"x"}, {}, 3);
  ASSERT_FALSE(diff.holds);
  ASSERT_TRUE(diff.counterexample.has_value());
  const auto& c = *diff.counterexample;
  EXPECT_EQ(eval(c.model, c.team, parse("const(x)")), c.left_value);
  EXPECT_EQ(eval(c.model, c.team, Formula::NE()), c.right_value);
  EXPECT_NE(c.left_value, c.right_value);

  EquivOptions ne;
  ne.filter = TeamFilter::NonEmpty;
  auto r = equivalent(parse("const(x)"), Formula::NE(), {"x"}, {}, 3, {}, ne);
  ASSERT_FALSE(r.holds);
  EXPECT_FALSE(r.counterexample->team.empty());
  EXPECT_THROW(equivalent(parse("x = y"), parse("x = x"), {"x"}, {}, 2), Error);
}

TEST(Equivalent, Implication) {
  EquivOptions o;
  o.mode = Comparison::Implies;
  EXPECT_TRUE(equivalent(parse("all(x)"), Formula::NE(), {"x"}, {}, 3, {}, o).holds);
  auto back = equivalent(Formula::NE(), parse("all(x)"), {"x"}, {}, 3, {}, o);
  ASSERT_FALSE(back.holds);
  EXPECT_TRUE(back.counterexample->left_value);
  EXPECT_FALSE(back.counterexample->right_value);
}

TEST(Reports, Serialization) {
  std::ostringstream ok;
  write_report(ok, equivalent(Formula::NE(), Formula::NE(), {"x"}, {}, 2));
  EXPECT_EQ(ok.str().rfind("equivalent (all teams, |M|<=2", 0), 0u);

  std::ostringstream bad;
  write_report(bad, equivalent(parse("const(x)"), Formula::NE(), {"x"}, {}, 2));
  EXPECT_NE(bad.str().find("counterexample"), std::string::npos);
  EXPECT_NE(bad.str().find("domain 1"), std::string::npos);
  EXPECT_NE(bad.str().find("vars x"), std::string::npos);

  std::ostringstream hier;
  write_report(hier, hierarchy_witness(2, 1, 1));
  EXPECT_NE(hier.str().find("witness 4 > 2"), std::string::npos);
}

}  // namespace
}  // namespace teamlog
