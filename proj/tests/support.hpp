// Shared fixtures, random generators and brute-force oracles for the tests
// and the acceptance runner.
#pragma once

#include <functional>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "spctl/checker.hpp"
#include "spctl/formula.hpp"
#include "spctl/io.hpp"
#include "spctl/parser.hpp"
#include "spctl/regions.hpp"
#include "spctl/structure.hpp"

namespace spctl::testing {

inline std::string model_path(const std::string& name) {
  return std::string(SPCTL_MODELS_DIR) + "/" + name;
}

inline ResourceStructure running_example() {
  return load_model_file(model_path("running_example.json"));
}

inline std::vector<Requirement> running_requirements(const ResourceStructure& s) {
  return parse_requirements(read_file(model_path("running_example.reqs")), s.sig());
}

inline Configuration reference_config(const ResourceStructure& s) {
  return load_configuration_file(model_path("running_example_config.json"), s);
}

using Rng = std::mt19937_64;

inline std::size_t uniform(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}
inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

/// A small signature: role ∈ {a, b}, flag: boolean, t: numeric (request);
/// id ∈ {n0..n5}, p, q: boolean (resource). `with_numeric` drops t when false.
inline std::shared_ptr<AttributeSignature> small_signature(bool with_numeric = true) {
  auto sig = std::make_shared<AttributeSignature>();
  sig->add_enumerated("role", AttrClass::Subject, {"a", "b"});
  sig->add_boolean("flag", AttrClass::Subject);
  if (with_numeric) sig->add_numeric("t", AttrClass::Contextual);
  sig->add_enumerated("id", AttrClass::Resource, {"n0", "n1", "n2", "n3", "n4", "n5"});
  sig->add_boolean("p", AttrClass::Resource);
  sig->add_boolean("q", AttrClass::Resource);
  return sig;
}

struct StructureParams {
  std::size_t min_nodes = 2;
  std::size_t max_nodes = 6;
  double extra_edge = 0.3;
  double fixed_edge = 0.2;
  /// Fixed edges get a random policy instead of `true` with this probability.
  double restricted_fixed = 0.0;
};

Target random_target(Rng& rng, const AttributeSignature& sig, std::size_t depth);

/// Rooted at node 0, every node reachable and with an outgoing edge.
inline ResourceStructure random_structure(Rng& rng, std::shared_ptr<AttributeSignature> sig,
                                          const StructureParams& p = {}) {
  ResourceStructure s(sig);
  const std::size_t n = p.min_nodes + uniform(rng, p.max_nodes - p.min_nodes + 1);
  const auto id = sig->index_of("id");
  const auto pa = sig->index_of("p");
  const auto qa = sig->index_of("q");
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = s.add_resource("n" + std::to_string(i));
    s.set_label(r, id, Value::symbol("n" + std::to_string(i)));
    s.set_label(r, pa, Value::boolean(coin(rng)));
    if (coin(rng, 0.8)) s.set_label(r, qa, Value::boolean(coin(rng)));
  }
  std::vector<std::vector<bool>> has(n, std::vector<bool>(n, false));
  auto add = [&](std::size_t a, std::size_t b) {
    if (a == b || has[a][b]) return;
    has[a][b] = true;
    if (coin(rng, p.fixed_edge)) {
      const Target pol = coin(rng, p.restricted_fixed) ? random_target(rng, *sig, 1) : Target::truth();
      s.add_edge(a, b, false, pol);
    } else {
      s.add_edge(a, b, true);
    }
  };
  for (std::size_t i = 1; i < n; ++i) add(uniform(rng, i), i);
  for (std::size_t i = 0; i < n; ++i) {
    bool out = false;
    for (std::size_t j = 0; j < n; ++j) out = out || has[i][j];
    if (!out) {
      std::size_t j = uniform(rng, n - 1);
      if (j >= i) ++j;
      add(i, j);
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && coin(rng, p.extra_edge)) add(i, j);
  s.set_entry(0);
  s.validate();
  return s;
}

/// A random non-empty proper value set for attribute a (numeric: an interval
/// possibly with ⊥).
inline ValueSet random_set(Rng& rng, const Attribute& a) {
  ValueSet v;
  if (a.kind == AttrKind::Numeric) {
    const std::uint64_t lo = uniform(rng, 6);
    const std::uint64_t hi = coin(rng, 0.2) ? kInfinity : lo + uniform(rng, 6);
    v.insert_range(lo, hi);
  } else {
    for (const auto& s : a.symbols)
      if (coin(rng)) v.insert(Value::symbol(s));
  }
  if (coin(rng, 0.25)) v.insert(Value(Bottom{}));
  if (v.empty()) v.insert(a.kind == AttrKind::Numeric ? Value::natural(0) : Value::symbol(a.symbols[0]));
  return v;
}

inline Target random_target(Rng& rng, const AttributeSignature& sig, std::size_t depth) {
  const auto& req = sig.request_attributes();
  if (depth == 0 || coin(rng, 0.3)) {
    if (coin(rng, 0.1)) return coin(rng) ? Target::truth() : Target::falsity();
    const auto a = req[uniform(rng, req.size())];
    return Target::member(a, random_set(rng, sig[a]));
  }
  switch (uniform(rng, 3)) {
    case 0: return negate(random_target(rng, sig, depth - 1));
    case 1: return conj(random_target(rng, sig, depth - 1), random_target(rng, sig, depth - 1));
    default: return disj(random_target(rng, sig, depth - 1), random_target(rng, sig, depth - 1));
  }
}

inline Constraint random_resource_atom(Rng& rng, const AttributeSignature& sig) {
  const auto res = sig.resource_attributes();
  const auto a = res[uniform(rng, res.size())];
  return Constraint::member(a, random_set(rng, sig[a]));
}

inline Constraint random_constraint(Rng& rng, const AttributeSignature& sig, std::size_t depth,
                                    bool allow_au = true) {
  if (depth == 0 || coin(rng, 0.2)) {
    if (coin(rng, 0.1)) return Constraint::truth();
    return random_resource_atom(rng, sig);
  }
  const auto d = depth - 1;
  switch (uniform(rng, allow_au ? 7 : 6)) {
    case 0: return negate(random_constraint(rng, sig, d, allow_au));
    case 1: return conj(random_constraint(rng, sig, d, allow_au), random_constraint(rng, sig, d, allow_au));
    case 2: return ex(random_constraint(rng, sig, d, allow_au));
    case 3: return ax(random_constraint(rng, sig, d, allow_au));
    case 4: return eu(random_constraint(rng, sig, d, allow_au), random_constraint(rng, sig, d, allow_au));
    case 5: return disj(random_constraint(rng, sig, d, allow_au), random_constraint(rng, sig, d, allow_au));
    default: return au(random_constraint(rng, sig, d, allow_au), random_constraint(rng, sig, d, allow_au));
  }
}

inline Configuration random_configuration(Rng& rng, const ResourceStructure& s, std::size_t depth = 2) {
  Configuration c;
  for (auto e : s.controlled_edges()) {
    const auto k = uniform(rng, 5);
    c.set(e, k == 0 ? Target::truth() : k == 1 ? Target::falsity() : random_target(rng, s.sig(), depth));
  }
  return c;
}

/// Random request; numeric values drawn from 0..9 or ⊥.
inline AccessRequest random_request(Rng& rng, const AttributeSignature& sig) {
  AccessRequest q(sig);
  for (auto a : sig.request_attributes()) {
    const Attribute& at = sig[a];
    if (coin(rng, 0.2)) continue;
    if (at.kind == AttrKind::Numeric)
      q.set(a, Value::natural(uniform(rng, 10)));
    else
      q.set(a, Value::symbol(at.symbols[uniform(rng, at.symbols.size())]));
  }
  return q;
}

/// Every request over a signature without numeric request attributes.
inline std::vector<AccessRequest> all_requests(const AttributeSignature& sig) {
  std::vector<AccessRequest> out{AccessRequest(sig)};
  for (auto a : sig.request_attributes()) {
    std::vector<Value> vals{Value(Bottom{})};
    for (const auto& s : sig[a].symbols) vals.push_back(Value::symbol(s));
    std::vector<AccessRequest> next;
    for (const auto& q : out)
      for (const auto& v : vals) {
        AccessRequest r = q;
        r.set(a, v);
        next.push_back(std::move(r));
      }
    out = std::move(next);
  }
  return out;
}

/// True iff no live node of the restriction is a deadlock.
inline bool deadlock_free(const ResourceStructure& s, const Restriction& m) {
  for (std::size_t r = 0; r < s.resources().size(); ++r) {
    if (!m.node_kept[r]) continue;
    bool out = false;
    for (auto e : s.out_edges(r)) out = out || m.edge_kept[e];
    if (!out) return false;
  }
  return true;
}

/// Path-based CTL semantics (maximal paths), independent of the labeling
/// checker: EU over simple path prefixes, AU over all paths up to the lasso
/// bound |R| + 1.
class PathSemantics {
 public:
  PathSemantics(const ResourceStructure& s, const Restriction& m) : s_(s), m_(m) {
    succ_.resize(s.resources().size());
    for (std::size_t e = 0; e < s.edges().size(); ++e)
      if (m.edge_kept[e]) succ_[s.edge(e).from].push_back(s.edge(e).to);
  }

  bool holds(const Node& f, std::size_t r) const {
    switch (f.op) {
      case Op::True: return true;
      case Op::Member: return f.set.contains(s_.resource(r).labels[f.attr]);
      case Op::Not: return !holds(*f.lhs, r);
      case Op::And: return holds(*f.lhs, r) && holds(*f.rhs, r);
      case Op::EX:
        for (auto t : succ_[r])
          if (holds(*f.lhs, t)) return true;
        return false;
      case Op::AX:
        for (auto t : succ_[r])
          if (!holds(*f.lhs, t)) return false;
        return true;
      case Op::EU: {
        std::vector<bool> on(succ_.size(), false);
        return eu(f, r, on);
      }
      case Op::AU: return au(f, r, 0);
    }
    return false;
  }

 private:
  bool eu(const Node& f, std::size_t r, std::vector<bool>& on) const {
    if (holds(*f.rhs, r)) return true;
    if (!holds(*f.lhs, r)) return false;
    on[r] = true;
    bool found = false;
    for (auto t : succ_[r])
      if (!on[t] && eu(f, t, on)) {
        found = true;
        break;
      }
    on[r] = false;
    return found;
  }

  bool au(const Node& f, std::size_t r, std::size_t len) const {
    if (holds(*f.rhs, r)) return true;
    if (!holds(*f.lhs, r)) return false;
    if (succ_[r].empty()) return false;           // finite maximal path without φ2
    if (len + 1 > s_.resources().size()) return false;  // a repeated node: violating lasso
    for (auto t : succ_[r])
      if (!au(f, t, len + 1)) return false;
    return true;
  }

  const ResourceStructure& s_;
  const Restriction& m_;
  std::vector<std::vector<std::size_t>> succ_;
};

/// Random pattern requirement over the small signature.
enum class PatternChoice { Grant, Deny, Blocking, Waypoint };

inline Requirement random_pattern(Rng& rng, const AttributeSignature& sig, PatternChoice k) {
  Requirement r;
  r.target = coin(rng, 0.2) ? Target::truth() : random_target(rng, sig, 1);
  const Constraint a = random_resource_atom(rng, sig);
  const Constraint b = random_resource_atom(rng, sig);
  switch (k) {
    case PatternChoice::Grant:
      r.constraint = desugar_pattern(PatternKind::Grant, {a});
      r.polarity = Polarity::Positive;
      break;
    case PatternChoice::Deny:
      r.constraint = desugar_pattern(PatternKind::Deny, {a});
      r.polarity = Polarity::Negative;
      break;
    case PatternChoice::Blocking:
      r.constraint = desugar_pattern(PatternKind::Blocking, {a, b});
      r.polarity = Polarity::Negative;
      break;
    case PatternChoice::Waypoint:
      r.constraint = desugar_pattern(PatternKind::Waypoint, {a, b});
      r.polarity = Polarity::Negative;
      break;
  }
  return r;
}

}  // namespace spctl::testing
