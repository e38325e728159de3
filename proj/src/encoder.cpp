#include "spctl/encoder.hpp"

#include <algorithm>

#include "spctl/error.hpp"
#include "spctl/regions.hpp"

namespace spctl {

Encoder::Encoder(const ResourceStructure& s, CfStore& st) : s_(s), st_(st) {}

CfId Encoder::encode(const Requirement& r) {
  return st_.implies(st_.from_target(r.target), tau(r.constraint, s_.entry()));
}

CfId Encoder::tau(const Constraint& phi, std::size_t r0) { return tau(phi.ptr(), r0); }

CfId Encoder::tau(const NodePtr& phi, std::size_t r0) {
  const Key key{phi.get(), r0};
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  CfId out = CfStore::kFalse;
  switch (phi->op) {
    case Op::True: out = CfStore::kTrue; break;
    case Op::Member: {
      if (s_.sig()[phi->attr].cls != AttrClass::Resource)
        throw Error("constraint mentions non-resource attribute '" + s_.sig()[phi->attr].name + "'");
      out = st_.constant(phi->set.contains(s_.resource(r0).labels[phi->attr]));
      break;
    }
    case Op::Not: out = st_.negate(tau(phi->lhs, r0)); break;
    case Op::And: out = st_.conj(tau(phi->lhs, r0), tau(phi->rhs, r0)); break;
    case Op::EX: {
      std::vector<CfId> alts;
      for (auto e : s_.out_edges(r0))
        alts.push_back(st_.conj(st_.edge_guard(e), tau(phi->lhs, s_.edge(e).to)));
      out = st_.disj(std::move(alts));
      break;
    }
    case Op::AX: {
      std::vector<CfId> all;
      for (auto e : s_.out_edges(r0))
        all.push_back(st_.implies(st_.edge_guard(e), tau(phi->lhs, s_.edge(e).to)));
      out = st_.conj(std::move(all));
      break;
    }
    case Op::EU:
    case Op::AU: {
      std::vector<bool> visited(s_.resources().size(), false);
      out = tau_u(*phi, r0, visited, 0);
      break;
    }
  }
  memo_.emplace(key, out);
  return out;
}

CfId Encoder::tau_u(const Node& phi, std::size_t r, std::vector<bool>& visited, std::size_t depth) {
  ++stats_.tau_u_calls;
  stats_.max_visited = std::max(stats_.max_visited, depth);
  const CfId goal = tau(phi.rhs, r);
  if (goal == CfStore::kTrue) return goal;
  const CfId hold = tau(phi.lhs, r);
  if (hold == CfStore::kFalse) return goal;

  // X ∪ {r} for the recursive calls; the visited set strictly grows.
  visited[r] = true;
  std::vector<CfId> step;
  for (auto e : s_.out_edges(r)) {
    const auto r1 = s_.edge(e).to;
    const CfId g = st_.edge_guard(e);
    if (phi.op == Op::EU) {
      if (!visited[r1]) step.push_back(st_.conj(g, tau_u(phi, r1, visited, depth + 1)));
    } else if (visited[r1]) {
      step.push_back(st_.negate(g));
    } else {
      step.push_back(st_.implies(g, tau_u(phi, r1, visited, depth + 1)));
    }
  }
  visited[r] = false;
  const CfId next = phi.op == Op::EU ? st_.disj(std::move(step)) : st_.conj(std::move(step));
  return st_.disj(goal, st_.conj(hold, next));
}

CfId encode(const ResourceStructure& s, const Requirement& r, CfStore& st) {
  return Encoder(s, st).encode(r);
}

namespace {

void collect_cf_atoms(const CfStore& st, CfId root, std::vector<Atom>& out) {
  std::vector<bool> seen(st.node_count(), false);
  std::vector<CfId> stack{root};
  while (!stack.empty()) {
    const CfId x = stack.back();
    stack.pop_back();
    if (seen[x]) continue;
    seen[x] = true;
    if (st.kind(x) == CfKind::Atom) out.push_back(st.atom_of(x));
    for (auto c : st.children(x)) stack.push_back(c);
  }
}

class Grounder {
 public:
  Grounder(CfStore& st, const ResourceStructure& s, const std::vector<CfId>& policies)
      : st_(st), s_(s), policies_(policies) {}

  CfId run(CfId phi, const AccessRequest& q) {
    q_ = &q;
    memo_.clear();
    return subst(phi);
  }

 private:
  CfId subst(CfId x) {
    switch (st_.kind(x)) {
      case CfKind::True:
      case CfKind::False:
      case CfKind::ControlEq: return x;
      case CfKind::Atom: return st_.constant(st_.atom_of(x).set.contains((*q_)[st_.atom_of(x).attr]));
      default: break;
    }
    if (auto it = memo_.find(x); it != memo_.end()) return it->second;
    CfId out = CfStore::kFalse;
    const auto ch = st_.children(x);
    switch (st_.kind(x)) {
      case CfKind::EdgeGuard: {
        const auto e = st_.edge_of(x);
        const Edge& ed = s_.edge(e);
        out = ed.controlled ? subst(policies_.at(e)) : st_.constant(eval_target(*q_, ed.fixed_policy));
        break;
      }
      case CfKind::Not: out = st_.negate(subst(ch[0])); break;
      case CfKind::And:
      case CfKind::Or: {
        const bool is_and = st_.kind(x) == CfKind::And;
        const CfId zero = is_and ? CfStore::kFalse : CfStore::kTrue;
        std::vector<CfId> parts;
        parts.reserve(ch.size());
        out = CfStore::kFalse;
        bool shorted = false;
        for (auto c : std::vector<CfId>(ch.begin(), ch.end())) {
          const CfId g = subst(c);
          if (g == zero) {
            shorted = true;
            break;
          }
          parts.push_back(g);
        }
        out = shorted ? zero : (is_and ? st_.conj(std::move(parts)) : st_.disj(std::move(parts)));
        break;
      }
      case CfKind::Implies: {
        const CfId a0 = ch[0], b0 = ch[1];
        const CfId a = subst(a0);
        out = a == CfStore::kFalse ? CfStore::kTrue : st_.implies(a, subst(b0));
        break;
      }
      default: throw Error("unexpected control formula node");
    }
    memo_.emplace(x, out);
    return out;
  }

  CfStore& st_;
  const ResourceStructure& s_;
  const std::vector<CfId>& policies_;
  const AccessRequest* q_ = nullptr;
  std::unordered_map<CfId, CfId> memo_;
};

}  // namespace

CfId ground_forall(CfStore& st, CfId phi, const ResourceStructure& s,
                   const ConfigurationTemplate& tmpl, GroundStats* stats) {
  const auto& sig = s.sig();
  std::vector<CfId> policies(s.edges().size(), CfStore::kFalse);
  for (auto e : s.controlled_edges()) policies[e] = tmpl.policy(st, sig, e);

  std::vector<Atom> atoms;
  collect_cf_atoms(st, phi, atoms);
  std::vector<Target> fixed;
  for (const auto& e : s.edges())
    if (!e.controlled) fixed.push_back(e.fixed_policy);
  for (const auto& a : target_atoms(fixed)) atoms.push_back(a);
  for (const auto& a : tmpl.atoms(sig)) atoms.push_back(a);
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());

  const RegionSet rs = build_regions(sig, atoms);
  if (stats) stats->representatives = rs.size();
  Grounder g(st, s, policies);
  std::vector<CfId> parts;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const CfId gi = g.run(phi, rs.representative(i));
    if (gi == CfStore::kFalse) return CfStore::kFalse;
    parts.push_back(gi);
  }
  return st.conj(std::move(parts));
}

namespace {

bool eval_impl(const CfStore& st, CfId x, const AccessRequest* q, const ControlAssignment& m,
               const Configuration* c, const ResourceStructure* s,
               std::unordered_map<CfId, bool>& memo) {
  if (auto it = memo.find(x); it != memo.end()) return it->second;
  bool out = false;
  const auto ch = st.children(x);
  switch (st.kind(x)) {
    case CfKind::True: out = true; break;
    case CfKind::False: out = false; break;
    case CfKind::Atom:
      if (!q) throw Error("attribute atom in a control-only formula");
      out = st.atom_of(x).set.contains((*q)[st.atom_of(x).attr]);
      break;
    case CfKind::ControlEq: out = m.at(st.var_of(x)) == st.value_of(x); break;
    case CfKind::EdgeGuard:
      if (!q || !c || !s) throw Error("edge guard in a control-only formula");
      out = eval_target(*q, edge_policy(*s, *c, st.edge_of(x)));
      break;
    case CfKind::Not: out = !eval_impl(st, ch[0], q, m, c, s, memo); break;
    case CfKind::And:
      out = true;
      for (auto k : ch)
        if (!eval_impl(st, k, q, m, c, s, memo)) {
          out = false;
          break;
        }
      break;
    case CfKind::Or:
      out = false;
      for (auto k : ch)
        if (eval_impl(st, k, q, m, c, s, memo)) {
          out = true;
          break;
        }
      break;
    case CfKind::Implies:
      out = !eval_impl(st, ch[0], q, m, c, s, memo) || eval_impl(st, ch[1], q, m, c, s, memo);
      break;
  }
  memo.emplace(x, out);
  return out;
}

}  // namespace

bool eval_formula(const CfStore& st, CfId phi, const AccessRequest& q, const ControlAssignment& m,
                  const Configuration& c, const ResourceStructure& s) {
  std::unordered_map<CfId, bool> memo;
  return eval_impl(st, phi, &q, m, &c, &s, memo);
}

bool eval_formula(const CfStore& st, CfId phi, const AccessRequest& q, const ControlAssignment& m,
                  const ConfigurationTemplate& tmpl, const ResourceStructure& s) {
  return eval_formula(st, phi, q, m, tmpl.derive(m, s.sig()), s);
}

bool eval_control(const CfStore& st, CfId phi, const ControlAssignment& m) {
  std::unordered_map<CfId, bool> memo;
  return eval_impl(st, phi, nullptr, m, nullptr, nullptr, memo);
}

}  // namespace spctl
