#include <gtest/gtest.h>

#include "spctl/error.hpp"
#include "spctl/io.hpp"
#include "support.hpp"

using namespace spctl;
using namespace spctl::testing;

namespace {

class Model : public ::testing::Test {
 protected:
  ResourceStructure s = running_example();
  const AttributeSignature& sig = s.sig();
  std::size_t node(const char* id) const { return s.resource_index(id); }
  AccessRequest req(const char* text) const { return parse_request(text, sig); }
};

TEST_F(Model, RunningExampleShape) {
  EXPECT_EQ(s.resources().size(), 5u);
  EXPECT_EQ(s.edges().size(), 10u);
  EXPECT_EQ(s.controlled_edges().size(), 5u);
  EXPECT_EQ(s.entry(), node("out"));
  EXPECT_EQ(s.edge_name(s.edge_by_name("cor->bur")), "cor->bur");
  const auto e = s.edge_by_name("out->lob");
  const auto allowed = s.allowed_attributes(e);
  EXPECT_EQ(allowed, (std::vector<std::size_t>{sig.index_of("role"), sig.index_of("time")}));
}

TEST_F(Model, RestrictionOfReferenceConfigForAVisitor) {
  const Configuration c = reference_config(s);
  const Restriction m = restrict_mask(s, c, req("role=visitor,time=10"));
  EXPECT_TRUE(m.node_kept[node("out")]);
  EXPECT_TRUE(m.node_kept[node("lob")]);
  EXPECT_TRUE(m.node_kept[node("cor")]);
  EXPECT_TRUE(m.node_kept[node("mr")]);
  EXPECT_FALSE(m.node_kept[node("bur")]);
  EXPECT_FALSE(m.edge_kept[s.edge_by_name("out->cor")]);
  EXPECT_FALSE(m.edge_kept[s.edge_by_name("bur->cor")]);  // pruned with its source
}

TEST_F(Model, RestrictionWithUnknownTimeStrandsTheVisitor) {
  const Configuration c = reference_config(s);
  const Restriction m = restrict_mask(s, c, req("role=visitor"));
  for (std::size_t r = 0; r < s.resources().size(); ++r)
    EXPECT_EQ(m.node_kept[r], r == node("out")) << s.resource(r).id;
  const ResourceStructure sub = restrict(s, c, req("role=visitor"));
  EXPECT_EQ(sub.resources().size(), 1u);
  EXPECT_TRUE(sub.out_edges(0).empty());
}

TEST_F(Model, EmployeeWithPinReachesTheBureau) {
  const Restriction m = restrict_mask(s, reference_config(s), req("role=employee,correct_pin=true"));
  EXPECT_TRUE(m.node_kept[node("bur")]);
  EXPECT_FALSE(m.node_kept[node("mr")]);
}

TEST_F(Model, CompareExamples) {
  const auto all = Configuration::uniform(s, Target::truth());
  const auto none = Configuration::uniform(s, Target::falsity());
  EXPECT_EQ(compare(none, all, sig), Order::LessOrEqual);
  EXPECT_EQ(compare(all, none, sig), Order::GreaterOrEqual);
  EXPECT_EQ(compare(all, all, sig), Order::Equal);
  EXPECT_EQ(compare(reference_config(s), all, sig), Order::LessOrEqual);
  Configuration a = all, b = all;
  a.set(s.edge_by_name("cor->mr"), parse_target("role = visitor", sig));
  b.set(s.edge_by_name("cor->mr"), parse_target("role = employee", sig));
  EXPECT_EQ(compare(a, b, sig), Order::Incomparable);
  // Syntactically different, semantically equal.
  Configuration d = all;
  d.set(s.edge_by_name("cor->mr"), parse_target("role = visitor or role != visitor", sig));
  EXPECT_EQ(compare(d, all, sig), Order::Equal);
}

TEST_F(Model, ValidationRejectsBrokenStructures) {
  auto sig2 = small_signature();
  {
    ResourceStructure t(sig2);
    t.add_resource("a");
    EXPECT_THROW(t.add_edge(0, 0), Error);
    EXPECT_THROW(t.add_resource("a"), Error);
  }
  {
    ResourceStructure t(sig2);
    t.add_resource("a");
    t.add_resource("b");
    t.add_edge(0, 1);
    EXPECT_THROW(t.add_edge(0, 1), Error);
    EXPECT_THROW(t.validate(), Error);  // b is a deadlock
    t.add_edge(1, 0);
    EXPECT_NO_THROW(t.validate());
    t.add_resource("c");
    t.add_edge(2, 0);
    EXPECT_THROW(t.validate(), Error);  // c unreachable
  }
}

TEST_F(Model, ConfigurationTotality) {
  Configuration c = Configuration::uniform(s, Target::truth());
  EXPECT_NO_THROW(c.check_total(s));
  Configuration partial;
  partial.set(s.controlled_edges()[0], Target::truth());
  EXPECT_THROW(partial.check_total(s), Error);
  Configuration fixed = c;
  fixed.set(s.edge_by_name("cor->out"), Target::truth());
  EXPECT_THROW(fixed.check_total(s), Error);
}

TEST_F(Model, ScaleReplicatesTheNonEntrySubgraph) {
  const auto big = scale_replicate(s, 2);
  EXPECT_EQ(big.resources().size(), 9u);
  EXPECT_EQ(big.edges().size(), 20u);
  EXPECT_EQ(big.controlled_edges().size(), 10u);
  EXPECT_TRUE(big.find_resource("mr@2").has_value());
  EXPECT_EQ(big.resource(big.resource_index("bur@1")).labels[sig.index_of("sec_zone")],
            Value::boolean(true));
  EXPECT_EQ(big.allowed_attributes(big.edge_by_name("out->lob@2")),
            s.allowed_attributes(s.edge_by_name("out->lob")));
  EXPECT_THROW(scale_replicate(s, 0), Error);
}

TEST(ModelCorporate, ScalesToThreeCopies) {
  const auto s = load_model_file(model_path("corporate.json"));
  EXPECT_EQ(s.resources().size(), 20u);
  const auto big = scale_replicate(s, 3);
  EXPECT_EQ(big.resources().size(), 58u);
  EXPECT_EQ(big.edges().size(), 3 * s.edges().size());
  EXPECT_GE(big.controlled_edges().size(), 100u);
}

TEST_F(Model, JsonRoundTrip) {
  const auto back = load_model(model_to_json(s));
  ASSERT_EQ(back.resources().size(), s.resources().size());
  ASSERT_EQ(back.edges().size(), s.edges().size());
  for (std::size_t e = 0; e < s.edges().size(); ++e) {
    EXPECT_EQ(back.edge_name(e), s.edge_name(e));
    EXPECT_EQ(back.edge(e).controlled, s.edge(e).controlled);
    EXPECT_EQ(back.edge(e).fixed_policy, s.edge(e).fixed_policy);
    EXPECT_EQ(back.edge(e).allowed, s.edge(e).allowed);
  }
  for (std::size_t r = 0; r < s.resources().size(); ++r)
    EXPECT_EQ(back.resource(r).labels, s.resource(r).labels);

  const Configuration c = reference_config(s);
  EXPECT_EQ(load_configuration(configuration_to_json(c, s), s), c);
}

TEST_F(Model, ConfigurationDefaultKey) {
  const auto c = load_configuration(R"({"*": "true", "cor->bur": "role = employee"})", s);
  EXPECT_EQ(c.at(s.edge_by_name("cor->bur")), parse_target("role = employee", sig));
  EXPECT_EQ(c.at(s.edge_by_name("out->lob")), Target::truth());
  EXPECT_THROW(load_configuration(R"({"cor->bur": "true"})", s), Error);
  EXPECT_THROW(load_configuration(R"({"*": "true", "cor->out": "true"})", s), Error);
  EXPECT_THROW(load_configuration(R"({"*": "true", "x->y": "true"})", s), Error);
}

TEST_F(Model, MenuFile) {
  const auto menu = load_menu(read_file(model_path("t1_menu.json")), s);
  ASSERT_EQ(menu.size(), 5u);
  for (const auto& [e, opts] : menu) EXPECT_EQ(opts.size(), 3u) << s.edge_name(e);
}

TEST_F(Model, MalformedModelsAreRejected) {
  EXPECT_THROW(load_model("{"), Error);
  EXPECT_THROW(load_model(R"({"attributes": {}, "entry": "x", "resources": [], "edges": []})"), Error);
  EXPECT_THROW(load_model_file(model_path("does_not_exist.json")), Error);
}

TEST_F(Model, DotOutput) {
  const auto plain = to_dot(s);
  EXPECT_NE(plain.find("digraph"), std::string::npos);
  EXPECT_NE(plain.find("cor"), std::string::npos);
  const Configuration c = reference_config(s);
  const AccessRequest q = req("role=visitor");
  DotOptions opt;
  opt.config = &c;
  opt.request = &q;
  const auto greyed = to_dot(s, opt);
  EXPECT_NE(greyed, plain);
  EXPECT_NE(greyed.find("gray"), std::string::npos);
}

// ---- properties -------------------------------------------------------------

/// c2(e) = c1(e) ∨ extra, so c1 ⊑ c2.
Configuration widen(Rng& rng, const ResourceStructure& s, const Configuration& c1) {
  Configuration c2;
  for (const auto& [e, t] : c1.policies())
    c2.set(e, coin(rng) ? disj(t, random_target(rng, s.sig(), 1)) : t);
  return c2;
}

TEST(ModelProperty, RestrictionIsMonotone) {
  Rng rng(21);
  auto sig = small_signature();
  for (int i = 0; i < 200; ++i) {
    const auto s = random_structure(rng, sig);
    const auto c1 = random_configuration(rng, s);
    const auto c2 = widen(rng, s, c1);
    const auto order = compare(c1, c2, *sig);
    ASSERT_TRUE(order == Order::LessOrEqual || order == Order::Equal);
    for (int k = 0; k < 10; ++k) {
      const auto q = random_request(rng, *sig);
      const auto m1 = restrict_mask(s, c1, q), m2 = restrict_mask(s, c2, q);
      for (std::size_t e = 0; e < s.edges().size(); ++e) EXPECT_LE(m1.edge_kept[e], m2.edge_kept[e]);
      for (std::size_t r = 0; r < s.resources().size(); ++r) EXPECT_LE(m1.node_kept[r], m2.node_kept[r]);
    }
  }
}

TEST(ModelProperty, RestrictionIsIdempotent) {
  Rng rng(22);
  auto sig = small_signature();
  for (int i = 0; i < 200; ++i) {
    const auto s = random_structure(rng, sig);
    const auto c = random_configuration(rng, s);
    const auto q = random_request(rng, *sig);
    const auto m = restrict_mask(s, c, q);
    const auto again = restrict_edges(s, m.edge_kept);
    EXPECT_EQ(again.node_kept, m.node_kept);
    EXPECT_EQ(again.edge_kept, m.edge_kept);
    // Kept edges connect kept nodes and satisfy their policy.
    for (std::size_t e = 0; e < s.edges().size(); ++e) {
      if (!m.edge_kept[e]) continue;
      EXPECT_TRUE(m.node_kept[s.edge(e).from] && m.node_kept[s.edge(e).to]);
      EXPECT_TRUE(eval_target(q, edge_policy(s, c, e)));
    }
  }
}

TEST(ModelProperty, CompareAgreesWithRequestSampling) {
  Rng rng(23);
  auto sig = small_signature(false);
  const auto requests = all_requests(*sig);
  for (int i = 0; i < 100; ++i) {
    const auto s = random_structure(rng, sig, {2, 4});
    const auto c1 = random_configuration(rng, s, 1), c2 = random_configuration(rng, s, 1);
    bool le = true, ge = true;
    for (const auto& [e, t1] : c1.policies())
      for (const auto& q : requests) {
        const bool a = eval_target(q, t1), b = eval_target(q, c2.at(e));
        le = le && (!a || b);
        ge = ge && (!b || a);
      }
    const Order expect = le && ge ? Order::Equal
                         : le     ? Order::LessOrEqual
                         : ge     ? Order::GreaterOrEqual
                                  : Order::Incomparable;
    EXPECT_EQ(compare(c1, c2, *sig), expect);
  }
}

}  // namespace
