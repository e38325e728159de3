#include <gtest/gtest.h>

#include "spctl/error.hpp"
#include "spctl/parser.hpp"
#include "spctl/regions.hpp"
#include "support.hpp"

using namespace spctl;
using namespace spctl::testing;

namespace {

class Lang : public ::testing::Test {
 protected:
  ResourceStructure s = running_example();
  const AttributeSignature& sig = s.sig();
  std::size_t role = sig.index_of("role"), time = sig.index_of("time"),
              pin = sig.index_of("correct_pin"), id = sig.index_of("id"),
              sec = sig.index_of("sec_zone");

  Target is(std::size_t a, const char* v) const { return Target::member(a, ValueSet::of(Value::symbol(v))); }
  Target upto(std::uint64_t n) const { return Target::member(time, ValueSet::range(0, n)); }
  AccessRequest req(const char* text) const { return parse_request(text, sig); }
};

TEST_F(Lang, GrantExampleDesugars) {
  const Requirement r = parse_requirement("role = visitor and 8 <= time <= 20 => grant(id = mr)", sig);
  const Target t = conj(is(role, "visitor"), conj(negate(upto(7)), upto(20)));
  EXPECT_EQ(r.target, t);
  const Constraint goal = Constraint::member(id, ValueSet::of(Value::symbol("mr")));
  EXPECT_EQ(r.constraint, eu(Constraint::truth(), goal));
  EXPECT_EQ(r.polarity, Polarity::Positive);
}

TEST_F(Lang, DeadlockFreenessIsNegative) {
  const Requirement r = parse_requirement("=> AG EX true", sig);
  EXPECT_EQ(r.target, Target::truth());
  EXPECT_EQ(r.constraint, negate(eu(Constraint::truth(), negate(ex(Constraint::truth())))));
  EXPECT_EQ(r.polarity, Polarity::Negative);
  EXPECT_EQ(r, deadlock_freeness());
}

TEST_F(Lang, DenyExample) {
  const Requirement r = parse_requirement("role != employee => deny(sec_zone)", sig);
  EXPECT_EQ(r.target, negate(is(role, "employee")));
  EXPECT_EQ(r.constraint,
            negate(eu(Constraint::truth(), Constraint::member(sec, ValueSet::of(Value::boolean(true))))));
  EXPECT_EQ(r.polarity, Polarity::Negative);
}

TEST_F(Lang, ShorthandDesugaring) {
  auto d = [&](Shorthand sh) { return Target(desugar_shorthand(sh, sig)); };
  EXPECT_EQ(d({ShorthandKind::Ge, time, {}, 8, 0}), negate(upto(7)));
  EXPECT_EQ(d({ShorthandKind::Bare, pin, {}, 0, 0}),
            Target::member(pin, ValueSet::of(Value::boolean(true))));
  EXPECT_EQ(d({ShorthandKind::Eq, role, Value::symbol("visitor"), 0, 0}), is(role, "visitor"));
  EXPECT_EQ(d({ShorthandKind::Neq, role, Value::symbol("visitor"), 0, 0}), negate(is(role, "visitor")));
  EXPECT_EQ(d({ShorthandKind::Le, time, {}, 0, 20}), upto(20));
  EXPECT_EQ(d({ShorthandKind::Range, time, {}, 8, 20}), conj(negate(upto(7)), upto(20)));
  // a >= 0 is ¬(a ∈ ∅)
  EXPECT_EQ(d({ShorthandKind::Ge, time, {}, 0, 0}), negate(Target::member(time, ValueSet())));
}

TEST_F(Lang, ShorthandErrors) {
  EXPECT_THROW(desugar_shorthand({ShorthandKind::Le, role, {}, 0, 3}, sig), Error);
  EXPECT_THROW(desugar_shorthand({ShorthandKind::Bare, role, {}, 0, 0}, sig), Error);
  EXPECT_THROW(desugar_shorthand({ShorthandKind::Eq, role, Value::symbol("intern"), 0, 0}, sig), Error);
}

TEST_F(Lang, BottomSemanticsOfShorthands) {
  const AccessRequest q = req("role=employee");  // time ↦ ⊥
  EXPECT_TRUE(eval_target(q, parse_target("time >= 8", sig)));
  EXPECT_FALSE(eval_target(q, parse_target("8 <= time <= 20", sig)));
  EXPECT_TRUE(eval_target(req("time=5"), parse_target("role != visitor", sig)));
  EXPECT_TRUE(eval_target(q, parse_target("time >= 0", sig)));
}

TEST_F(Lang, EvalTargetExamples) {
  const Target t = parse_target("role = visitor and 8 <= time <= 20", sig);
  EXPECT_TRUE(eval_target(req("role=visitor,time=10"), t));
  EXPECT_FALSE(eval_target(req("role=visitor,time=21"), t));
  EXPECT_FALSE(eval_target(req("role=employee,time=10"), t));
}

TEST_F(Lang, PatternDesugaring) {
  const Constraint lob = Constraint::member(id, ValueSet::of(Value::symbol("lob")));
  const Constraint mr = Constraint::member(id, ValueSet::of(Value::symbol("mr")));
  EXPECT_EQ(desugar_pattern(PatternKind::Waypoint, {lob, mr}),
            negate(eu(negate(lob), conj(mr, negate(lob)))));
  EXPECT_EQ(desugar_pattern(PatternKind::Blocking, {lob, mr}),
            negate(eu(Constraint::truth(), conj(lob, eu(Constraint::truth(), mr)))));
  EXPECT_EQ(desugar_pattern(PatternKind::Grant, {Constraint::truth()}),
            eu(Constraint::truth(), Constraint::truth()));
  EXPECT_THROW(desugar_pattern(PatternKind::Grant, {lob, mr}), Error);
  EXPECT_THROW(desugar_pattern(PatternKind::Waypoint, {lob}), Error);
}

TEST_F(Lang, RawReleaseKeepsItsLiteralDefinition) {
  const Constraint c = parse_constraint("A[id = lob R id = mr]", sig);
  const Constraint lob = Constraint::member(id, ValueSet::of(Value::symbol("lob")));
  const Constraint mr = Constraint::member(id, ValueSet::of(Value::symbol("mr")));
  EXPECT_EQ(c, negate(eu(negate(lob), negate(mr))));
  // Under the release reading the entry must already be labeled mr.
  EXPECT_FALSE(model_check(s, c));
}

TEST_F(Lang, PolarityAnnotations) {
  EXPECT_EQ(parse_requirement("=> EF id = mr -> EF id = bur", sig).polarity, Polarity::Unknown);
  EXPECT_EQ(parse_requirement("=> EF id = mr -> EF id = bur : positive", sig).polarity,
            Polarity::Positive);
  EXPECT_EQ(parse_requirement("role = visitor => AX id = out", sig).polarity, Polarity::Negative);
}

TEST_F(Lang, ParseErrorsCarryPositions) {
  try {
    parse_requirements("role = visitor => grant(id = mr)\nrole = => deny(sec_zone)\n", sig);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_GT(e.column(), 1u);
  }
  EXPECT_THROW(parse_requirement("intern => grant(id = mr)", sig), Error);
  EXPECT_THROW(parse_requirement("sec_zone => grant(id = mr)", sig), Error);
  EXPECT_THROW(parse_requirement("role = visitor => grant(role = visitor)", sig), Error);
  EXPECT_THROW(parse_requirement("EF role = visitor => grant(id = mr)", sig), Error);
  EXPECT_THROW(parse_requirement("role = visitor => grant(id = kitchen)", sig), Error);
}

TEST_F(Lang, RequirementFileWithCommentsAndNames) {
  const auto reqs = running_requirements(s);
  ASSERT_EQ(reqs.size(), 5u);
  EXPECT_EQ(reqs[0].name, "R1");
  EXPECT_EQ(reqs[4].name, "R5");
  const auto unnamed = parse_requirements("# c\n\n=> grant(id = mr)  # trailing\n", sig);
  ASSERT_EQ(unnamed.size(), 1u);
}

TEST_F(Lang, PrinterRoundTripsTheRunningExample) {
  for (const auto& r : running_requirements(s)) {
    const std::string text = to_string(r, sig);
    const Requirement back = parse_requirement(text, sig);
    EXPECT_EQ(back, r) << text;
    EXPECT_EQ(to_string(back, sig), text);
  }
}

TEST(LangProperty, PrintParseRoundTrip) {
  Rng rng(7);
  auto sig = small_signature();
  for (int i = 0; i < 400; ++i) {
    Requirement r;
    r.target = random_target(rng, *sig, 3);
    if (coin(rng, 0.3)) {
      const auto k = static_cast<PatternChoice>(uniform(rng, 4));
      r = random_pattern(rng, *sig, k);
    } else {
      r.constraint = random_constraint(rng, *sig, 4);
      r.polarity = coin(rng, 0.2) ? Polarity::Positive : syntactic_polarity(r.constraint);
    }
    const std::string text = to_string(r, *sig);
    Requirement back;
    ASSERT_NO_THROW(back = parse_requirement(text, *sig)) << text;
    EXPECT_EQ(back, r) << text;
  }
}

TEST(LangProperty, EvalTargetBooleanLaws) {
  Rng rng(11);
  auto sig = small_signature();
  for (int i = 0; i < 300; ++i) {
    const Target a = random_target(rng, *sig, 2), b = random_target(rng, *sig, 2);
    const AccessRequest q = random_request(rng, *sig);
    EXPECT_EQ(eval_target(q, negate(conj(a, b))), eval_target(q, disj(negate(a), negate(b))));
    EXPECT_EQ(eval_target(q, conj(a, b)), eval_target(q, conj(b, a)));
    EXPECT_EQ(eval_target(q, negate(negate(a))), eval_target(q, a));
  }
}

// ---- regions ----------------------------------------------------------------

TEST_F(Lang, RegionsEnumExample) {
  const RegionSet rs = build_regions(sig, {{role, ValueSet::of(Value::symbol("visitor"))},
                                           {role, ValueSet::of(Value::symbol("employee"))}});
  const auto& c = rs.cells_for(role).cells;
  ASSERT_EQ(c.size(), 3u);
  EXPECT_TRUE(c[0].representative.is_bottom());
  EXPECT_EQ(c[1].representative, Value::symbol("visitor"));
  EXPECT_EQ(c[2].representative, Value::symbol("employee"));
  EXPECT_EQ(rs.size(), 3u);
}

TEST_F(Lang, RegionsNumericExample) {
  const RegionSet rs = build_regions(sig, {{time, ValueSet::range(0, 7)}, {time, ValueSet::range(0, 20)}});
  const auto& c = rs.cells_for(time).cells;
  ASSERT_EQ(c.size(), 4u);
  EXPECT_TRUE(c[0].representative.is_bottom());
  EXPECT_EQ(c[1].representative, Value::natural(0));
  EXPECT_EQ(c[2].representative, Value::natural(8));
  EXPECT_EQ(c[3].representative, Value::natural(21));
  // Brute force: values agree on both atoms within a cell.
  const ValueSet a = ValueSet::range(0, 7), b = ValueSet::range(0, 20);
  const AttributeCells& ac = rs.cells_for(time);
  for (std::uint64_t v = 0; v <= 30; ++v) {
    const auto& cell = c[ac.cell_of(Value::natural(v))];
    EXPECT_EQ(a.contains(Value::natural(v)), a.contains(cell.representative));
    EXPECT_EQ(b.contains(Value::natural(v)), b.contains(cell.representative));
  }
}

TEST_F(Lang, RegionsWithoutAtoms) {
  const RegionSet rs = build_regions(sig, {});
  ASSERT_EQ(rs.size(), 1u);
  const AccessRequest q = rs.representative(0);
  for (auto a : sig.request_attributes()) EXPECT_TRUE(q[a].is_bottom());
}

TEST_F(Lang, RepresentativeOrderFirstAttributeSlowest) {
  const RegionSet rs = build_regions(sig, {{role, ValueSet::of(Value::symbol("visitor"))},
                                           {time, ValueSet::range(0, 7)}});
  ASSERT_EQ(rs.size(), 9u);  // role: ⊥, visitor, employee; time: ⊥, 0..7, 8..
  EXPECT_TRUE(rs.representative(0)[role].is_bottom());
  EXPECT_TRUE(rs.representative(2)[role].is_bottom());
  EXPECT_EQ(rs.representative(3)[role], Value::symbol("visitor"));
}

TEST_F(Lang, TargetSatAndEquivExamples) {
  const auto w = target_sat(parse_target("role = visitor and role != employee", sig), sig);
  ASSERT_TRUE(w);
  EXPECT_EQ((*w)[role], Value::symbol("visitor"));
  EXPECT_TRUE((*w)[time].is_bottom());
  EXPECT_FALSE(target_sat(parse_target("role = visitor and role = employee", sig), sig));
  EXPECT_TRUE(target_equiv(parse_target("role = visitor and role != employee", sig),
                           parse_target("role = visitor", sig), sig));
  EXPECT_FALSE(target_equiv(parse_target("role != employee", sig), parse_target("role = visitor", sig), sig));
}

TEST(RegionProperty, CellsAreSoundOnTruncatedDomains) {
  Rng rng(3);
  auto sig = small_signature();
  for (int i = 0; i < 200; ++i) {
    std::vector<Atom> atoms;
    const std::size_t n = uniform(rng, 5);
    for (std::size_t k = 0; k < n; ++k) {
      const auto a = sig->request_attributes()[uniform(rng, 3)];
      atoms.push_back({a, random_set(rng, (*sig)[a])});
    }
    const RegionSet rs = build_regions(*sig, atoms);
    for (const auto& ac : rs.attributes()) {
      const Attribute& at = (*sig)[ac.attr];
      std::vector<Value> universe{Value(Bottom{})};
      if (at.kind == AttrKind::Numeric)
        for (std::uint64_t v = 0; v <= 30; ++v) universe.push_back(Value::natural(v));
      else
        for (const auto& s : at.symbols) universe.push_back(Value::symbol(s));
      for (const auto& v : universe) {
        std::size_t owners = 0;
        for (const auto& c : ac.cells) owners += c.members.contains(v);
        ASSERT_EQ(owners, 1u) << v.to_string();
        const auto& cell = ac.cells[ac.cell_of(v)];
        for (const auto& a : atoms)
          if (a.attr == ac.attr)
            EXPECT_EQ(a.set.contains(v), a.set.contains(cell.representative));
      }
    }
  }
}

TEST(RegionProperty, TargetSatMatchesBruteForce) {
  Rng rng(5);
  auto sig = small_signature();
  const auto role = sig->index_of("role"), flag = sig->index_of("flag"), t = sig->index_of("t");
  std::vector<AccessRequest> space;
  for (const auto& rv : {Value(Bottom{}), Value::symbol("a"), Value::symbol("b")})
    for (const auto& fv : {Value(Bottom{}), Value::boolean(false), Value::boolean(true)})
      for (int tv = -1; tv <= 30; ++tv) {
        AccessRequest q(*sig);
        q.set(role, rv);
        q.set(flag, fv);
        if (tv >= 0) q.set(t, Value::natural(static_cast<std::uint64_t>(tv)));
        space.push_back(q);
      }
  for (int i = 0; i < 300; ++i) {
    const Target a = random_target(rng, *sig, 3);
    bool brute = false;
    for (const auto& q : space) brute = brute || eval_target(q, a);
    const auto w = target_sat(a, *sig);
    EXPECT_EQ(brute, w.has_value());
    if (w) EXPECT_TRUE(eval_target(*w, a));
  }
}

}  // namespace
