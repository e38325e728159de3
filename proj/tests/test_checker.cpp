#include <gtest/gtest.h>

#include <deque>

#include "support.hpp"

using namespace spctl;
using namespace spctl::testing;

namespace {

class Checker : public ::testing::Test {
 protected:
  ResourceStructure s = running_example();
  const AttributeSignature& sig = s.sig();
  Constraint c(const char* text) const { return parse_constraint(text, sig); }
  AccessRequest req(const char* text) const { return parse_request(text, sig); }
};

TEST_F(Checker, UnrestrictedExamples) {
  EXPECT_TRUE(model_check(s, c("EF id = bur")));
  EXPECT_TRUE(model_check(s, c("AG EX true")));
  EXPECT_FALSE(model_check(s, c("AF id = bur")));  // out->lob->out forever avoids it
  EXPECT_TRUE(model_check(s, c("EX id = lob")));
  EXPECT_FALSE(model_check(s, c("AX id = lob")));
  EXPECT_TRUE(model_check(s, c("not sec_zone")));
  EXPECT_TRUE(model_check(s, c("E[not sec_zone U id = mr]")));
  EXPECT_FALSE(model_check(s, c("E[id = out U id = mr]")));
  EXPECT_TRUE(check_at(s, s.resource_index("bur"), c("AX id = cor")));
}

TEST_F(Checker, DeadlockedEntryFailsAU) {
  const Restriction m = restrict_mask(s, reference_config(s), req("role=visitor"));
  EXPECT_FALSE(model_check(s, m, c("AF not id = out")));
  EXPECT_TRUE(model_check(s, m, c("AX false")));
  EXPECT_FALSE(model_check(s, m, c("EX true")));
  EXPECT_FALSE(model_check(s, m, c("AG EX true")));
  EXPECT_TRUE(model_check(s, m, c("A[true U id = out]")));
  EXPECT_FALSE(model_check(s, m, c("A[true U id = lob]")));
}

TEST_F(Checker, LabelsOutsideTheRestrictionAreFalse) {
  const Restriction m = restrict_mask(s, reference_config(s), req("role=visitor"));
  const auto l = label(s, m, Constraint::truth());
  for (std::size_t r = 0; r < s.resources().size(); ++r) EXPECT_EQ(l[r], bool(m.node_kept[r]));
}

TEST_F(Checker, AllTrueConfigurationViolatesR5) {
  const auto reqs = running_requirements(s);
  const auto h = holds(s, Configuration::uniform(s, Target::truth()), reqs);
  EXPECT_FALSE(h.ok);
  ASSERT_TRUE(h.failed_requirement);
  EXPECT_EQ(reqs[*h.failed_requirement].name, "R5");  // the all-⊥ request comes first
  EXPECT_FALSE(h.verdicts[1].ok);                     // a visitor may skip the lobby
  EXPECT_FALSE(h.verdicts[4].ok);
  ASSERT_TRUE(h.verdicts[4].witness);
  EXPECT_NE((*h.verdicts[4].witness)[sig.index_of("role")], Value::symbol("employee"));
  for (std::size_t i : {0u, 2u, 3u}) EXPECT_TRUE(h.verdicts[i].ok) << reqs[i].name;
}

TEST_F(Checker, ReferenceConfigSatisfiesTheRunningExample) {
  const auto reqs = running_requirements(s);
  const auto h = holds(s, reference_config(s), reqs);
  EXPECT_TRUE(h.ok);
  EXPECT_GT(h.representatives, 1u);
  EXPECT_FALSE(h.witness);
}

TEST_F(Checker, ReferenceConfigIsNotDeadlockFree) {
  auto reqs = running_requirements(s);
  reqs.push_back(deadlock_freeness());
  const auto h = holds(s, reference_config(s), reqs);
  EXPECT_FALSE(h.ok);
  ASSERT_EQ(h.failed_requirement, 5u);
  ASSERT_TRUE(h.witness);
  for (auto a : sig.request_attributes()) EXPECT_TRUE((*h.witness)[a].is_bottom());
}

TEST_F(Checker, ReferenceClassicConfigurationSatisfiesR2R5) {
  const auto reqs = parse_requirements(read_file(model_path("running_example_r2r5.reqs")), sig);
  const auto c = load_configuration_file(model_path("classic_r2r5.json"), s);
  EXPECT_TRUE(holds(s, c, reqs).ok);
}

TEST_F(Checker, EmptyRequirementSetHolds) {
  EXPECT_TRUE(holds(s, Configuration::uniform(s, Target::falsity()), {}).ok);
}

// ---- properties -------------------------------------------------------------

struct Case {
  ResourceStructure s;
  Restriction m;
};

Case random_case(Rng& rng, const std::shared_ptr<AttributeSignature>& sig) {
  auto s = random_structure(rng, sig);
  const auto c = random_configuration(rng, s);
  auto m = restrict_mask(s, c, random_request(rng, *sig));
  return {std::move(s), std::move(m)};
}

TEST(CheckerProperty, AgreesWithPathSemantics) {
  Rng rng(31);
  auto sig = small_signature();
  std::size_t compared = 0;
  for (int i = 0; i < 300; ++i) {
    const auto [s, m] = random_case(rng, sig);
    const PathSemantics oracle(s, m);
    for (int k = 0; k < 5; ++k) {
      const auto phi = random_constraint(rng, *sig, 3);
      const auto l = label(s, m, phi);
      for (std::size_t r = 0; r < s.resources().size(); ++r) {
        if (!m.node_kept[r]) continue;
        ASSERT_EQ(l[r], oracle.holds(phi.node(), r)) << "node " << r << " of "
                                                     << to_string(phi, *sig);
        ++compared;
      }
    }
  }
  EXPECT_GT(compared, 3000u);
}

TEST(CheckerProperty, NextDuality) {
  Rng rng(32);
  auto sig = small_signature();
  for (int i = 0; i < 300; ++i) {
    const auto [s, m] = random_case(rng, sig);
    const auto phi = random_constraint(rng, *sig, 2);
    const auto a = label(s, m, ax(phi)), b = label(s, m, negate(ex(negate(phi))));
    const auto u = label(s, m, au(phi, negate(phi))), v = label(s, m, negate(eg(phi)));
    for (std::size_t r = 0; r < s.resources().size(); ++r) {
      if (!m.node_kept[r]) continue;
      EXPECT_EQ(a[r], b[r]);
      // A[φ U ¬φ] says every maximal path leaves φ: ¬EG φ.
      EXPECT_EQ(u[r], v[r]);
    }
  }
}

/// Nodes reachable from r in the restriction (r included).
std::vector<bool> reach(const ResourceStructure& s, const Restriction& m, std::size_t r) {
  std::vector<bool> seen(s.resources().size(), false);
  std::deque<std::size_t> todo{r};
  seen[r] = true;
  while (!todo.empty()) {
    const auto x = todo.front();
    todo.pop_front();
    for (auto e : s.out_edges(x))
      if (m.edge_kept[e] && !seen[s.edge(e).to]) {
        seen[s.edge(e).to] = true;
        todo.push_back(s.edge(e).to);
      }
  }
  return seen;
}

TEST(CheckerProperty, ReachabilityIdentities) {
  Rng rng(33);
  auto sig = small_signature();
  for (int i = 0; i < 300; ++i) {
    const auto [s, m] = random_case(rng, sig);
    const auto phi = random_resource_atom(rng, *sig);
    const auto base = label(s, m, phi);
    const auto f = label(s, m, ef(phi)), g = label(s, m, ag(phi));
    for (std::size_t r = 0; r < s.resources().size(); ++r) {
      if (!m.node_kept[r]) continue;
      const auto rs = reach(s, m, r);
      bool some = false, all = true;
      for (std::size_t t = 0; t < rs.size(); ++t)
        if (rs[t]) {
          some = some || base[t];
          all = all && base[t];
        }
      EXPECT_EQ(f[r], some);
      EXPECT_EQ(g[r], all);
    }
  }
}

TEST(CheckerProperty, HoldsMatchesBruteForceOverAllRequests) {
  Rng rng(34);
  auto sig = small_signature(false);
  const auto requests = all_requests(*sig);
  std::size_t failing = 0;
  for (int i = 0; i < 150; ++i) {
    const auto s = random_structure(rng, sig, {2, 5});
    const auto c = random_configuration(rng, s);
    std::vector<Requirement> reqs;
    for (std::size_t k = 0, n = 1 + uniform(rng, 3); k < n; ++k) {
      Requirement r;
      r.target = random_target(rng, *sig, 2);
      r.constraint = random_constraint(rng, *sig, 3);
      reqs.push_back(r);
    }
    bool brute = true;
    for (const auto& q : requests) {
      const auto m = restrict_mask(s, c, q);
      const PathSemantics oracle(s, m);
      for (const auto& r : reqs)
        if (eval_target(q, r.target) && !oracle.holds(r.constraint.node(), s.entry())) brute = false;
    }
    const auto h = holds(s, c, reqs);
    EXPECT_EQ(h.ok, brute);
    if (!h.ok) {
      ++failing;
      ASSERT_TRUE(h.witness && h.failed_requirement);
      const auto& r = reqs[*h.failed_requirement];
      EXPECT_TRUE(eval_target(*h.witness, r.target));
      EXPECT_FALSE(model_check(s, restrict_mask(s, c, *h.witness), r.constraint));
    }
  }
  EXPECT_GT(failing, 10u);
}

TEST(CheckerProperty, NumericRegionsAreExact) {
  // Requests with times 0..30 behave like their region representative.
  Rng rng(35);
  auto sig = small_signature();
  const auto t = sig->index_of("t");
  for (int i = 0; i < 100; ++i) {
    const auto s = random_structure(rng, sig, {2, 4});
    const auto c = random_configuration(rng, s);
    Requirement r;
    r.target = random_target(rng, *sig, 1);
    r.constraint = random_constraint(rng, *sig, 2);
    bool brute = true;
    for (int tv = -1; tv <= 30 && brute; ++tv)
      for (const auto& base : all_requests(*small_signature(false))) {
        AccessRequest q(*sig);
        q.set(sig->index_of("role"), base[0]);
        q.set(sig->index_of("flag"), base[1]);
        if (tv >= 0) q.set(t, Value::natural(static_cast<std::uint64_t>(tv)));
        if (eval_target(q, r.target) && !model_check(s, restrict_mask(s, c, q), r.constraint)) {
          brute = false;
          break;
        }
      }
    EXPECT_EQ(holds(s, c, {r}).ok, brute);
  }
}

}  // namespace
