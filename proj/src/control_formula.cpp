#include "spctl/control_formula.hpp"

#include <algorithm>

#include "spctl/error.hpp"

namespace spctl {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

}  // namespace

CfStore::CfStore() {
  intern(CfKind::True, 0, 0, {});
  intern(CfKind::False, 0, 0, {});
}

CfId CfStore::intern(CfKind k, std::uint32_t a, std::uint32_t b, std::span<const CfId> kids) {
  std::size_t h = mix(mix(mix(static_cast<std::size_t>(k), a), b), kids.size());
  for (auto c : kids) h = mix(h, c);
  auto [lo, hi] = table_.equal_range(h);
  for (auto it = lo; it != hi; ++it) {
    const CfNode& n = nodes_[it->second];
    if (n.kind == k && n.a == a && n.b == b && n.cnt == kids.size() &&
        std::equal(kids.begin(), kids.end(), kids_.begin() + n.off))
      return it->second;
  }
  const auto id = static_cast<CfId>(nodes_.size());
  nodes_.push_back({k, a, b, static_cast<std::uint32_t>(kids_.size()),
                    static_cast<std::uint32_t>(kids.size())});
  kids_.insert(kids_.end(), kids.begin(), kids.end());
  table_.emplace(h, id);
  return id;
}

CfId CfStore::atom(const Atom& a) {
  if (a.set.empty()) return kFalse;
  auto [it, fresh] = atom_index_.emplace(a, static_cast<std::uint32_t>(atoms_.size()));
  if (fresh) atoms_.push_back(a);
  return intern(CfKind::Atom, it->second, 0, {});
}

CfId CfStore::control_eq(std::uint32_t var, std::uint32_t value) {
  return intern(CfKind::ControlEq, var, value, {});
}

CfId CfStore::edge_guard(std::size_t edge) {
  return intern(CfKind::EdgeGuard, static_cast<std::uint32_t>(edge), 0, {});
}

CfId CfStore::negate(CfId a) {
  if (a == kTrue) return kFalse;
  if (a == kFalse) return kTrue;
  if (kind(a) == CfKind::Not) return children(a)[0];
  const CfId kid[1] = {a};
  return intern(CfKind::Not, 0, 0, kid);
}

CfId CfStore::nary(CfKind k, std::vector<CfId> xs) {
  const CfId unit = k == CfKind::And ? kTrue : kFalse;
  const CfId zero = k == CfKind::And ? kFalse : kTrue;
  std::vector<CfId> flat;
  flat.reserve(xs.size());
  for (auto x : xs) {
    if (x == zero) return zero;
    if (x == unit) continue;
    if (kind(x) == k) {
      auto ch = children(x);
      flat.insert(flat.end(), ch.begin(), ch.end());
    } else {
      flat.push_back(x);
    }
  }
  std::sort(flat.begin(), flat.end());
  flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
  // x and ¬x together.
  for (auto x : flat)
    if (kind(x) == CfKind::Not && std::binary_search(flat.begin(), flat.end(), children(x)[0]))
      return zero;
  if (flat.empty()) return unit;
  if (flat.size() == 1) return flat[0];
  return intern(k, 0, 0, flat);
}

CfId CfStore::conj(std::vector<CfId> xs) { return nary(CfKind::And, std::move(xs)); }
CfId CfStore::disj(std::vector<CfId> xs) { return nary(CfKind::Or, std::move(xs)); }
CfId CfStore::conj(CfId a, CfId b) { return nary(CfKind::And, {a, b}); }
CfId CfStore::disj(CfId a, CfId b) { return nary(CfKind::Or, {a, b}); }

CfId CfStore::implies(CfId a, CfId b) {
  if (a == kFalse || b == kTrue) return kTrue;
  if (a == kTrue) return b;
  if (b == kFalse) return negate(a);
  if (a == b) return kTrue;
  const CfId kids[2] = {a, b};
  return intern(CfKind::Implies, 0, 0, kids);
}

CfId CfStore::from_target(const Target& t) { return from_target(t.node()); }

CfId CfStore::from_target(const Node& t) {
  switch (t.op) {
    case Op::True: return kTrue;
    case Op::Member: return atom({t.attr, t.set});
    case Op::Not: return negate(from_target(*t.lhs));
    case Op::And: return conj(from_target(*t.lhs), from_target(*t.rhs));
    default: throw Error("temporal operator in a target");
  }
}

std::size_t CfStore::dag_size(CfId root) const {
  std::vector<bool> seen(nodes_.size(), false);
  std::vector<CfId> stack{root};
  std::size_t n = 0;
  while (!stack.empty()) {
    const CfId x = stack.back();
    stack.pop_back();
    if (seen[x]) continue;
    seen[x] = true;
    ++n;
    for (auto c : children(x)) stack.push_back(c);
  }
  return n;
}

std::string CfStore::to_string(CfId id, const AttributeSignature& sig,
                               const std::vector<std::string>& var_names,
                               const std::vector<std::string>& edge_names) const {
  switch (kind(id)) {
    case CfKind::True: return "true";
    case CfKind::False: return "false";
    case CfKind::Atom: {
      const Atom& a = atom_of(id);
      return sig[a.attr].name + " in " + a.set.to_string();
    }
    case CfKind::ControlEq: {
      const auto v = var_of(id);
      const std::string name = v < var_names.size() ? var_names[v] : "z" + std::to_string(v);
      return name + "=" + std::to_string(value_of(id));
    }
    case CfKind::EdgeGuard: {
      const auto e = edge_of(id);
      return "C(" + (e < edge_names.size() ? edge_names[e] : "#" + std::to_string(e)) + ")";
    }
    case CfKind::Not: return "!" + to_string(children(id)[0], sig, var_names, edge_names);
    case CfKind::And:
    case CfKind::Or:
    case CfKind::Implies: {
      const char* op = kind(id) == CfKind::And ? " & " : kind(id) == CfKind::Or ? " | " : " => ";
      std::string out = "(";
      auto ch = children(id);
      for (std::size_t i = 0; i < ch.size(); ++i) {
        if (i) out += op;
        out += to_string(ch[i], sig, var_names, edge_names);
      }
      return out + ")";
    }
  }
  return "?";
}

}  // namespace spctl
