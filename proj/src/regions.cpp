#include "spctl/regions.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "spctl/error.hpp"

namespace spctl {

bool eval_target(const AccessRequest& q, const Node& t) {
  switch (t.op) {
    case Op::True: return true;
    case Op::Member: return t.set.contains(q[t.attr]);
    case Op::Not: return !eval_target(q, *t.lhs);
    case Op::And: return eval_target(q, *t.lhs) && eval_target(q, *t.rhs);
    default: throw Error("temporal operator in a target");
  }
}

std::size_t AttributeCells::cell_of(const Value& v) const {
  for (std::size_t i = 0; i < cells.size(); ++i)
    if (cells[i].members.contains(v)) return i;
  throw Error("value " + v.to_string() + " is in no cell");
}

RegionSet::RegionSet(const AttributeSignature& sig, std::vector<AttributeCells> attrs)
    : sig_(&sig), attrs_(std::move(attrs)) {
  size_ = 1;
  for (const auto& a : attrs_) size_ *= a.cells.size();
}

const AttributeCells& RegionSet::cells_for(std::size_t attr) const {
  for (const auto& a : attrs_)
    if (a.attr == attr) return a;
  throw Error("attribute is not a request attribute");
}

AccessRequest RegionSet::representative(std::size_t i) const {
  AccessRequest q(*sig_);
  for (std::size_t k = attrs_.size(); k-- > 0;) {
    const auto& a = attrs_[k];
    q.set(a.attr, a.cells[i % a.cells.size()].representative);
    i /= a.cells.size();
  }
  return q;
}

std::vector<AccessRequest> RegionSet::representatives() const {
  std::vector<AccessRequest> out;
  out.reserve(size_);
  for (std::size_t i = 0; i < size_; ++i) out.push_back(representative(i));
  return out;
}

std::vector<Interval> numeric_segments(std::size_t attr, const std::vector<Atom>& atoms) {
  std::set<std::uint64_t> cuts{0};
  for (const auto& a : atoms) {
    if (a.attr != attr) continue;
    for (const auto& r : a.set.ranges()) {
      cuts.insert(r.lo);
      if (r.hi != kInfinity) cuts.insert(r.hi + 1);
    }
  }
  std::vector<Interval> out;
  for (auto it = cuts.begin(); it != cuts.end(); ++it) {
    auto nx = std::next(it);
    out.push_back({*it, nx == cuts.end() ? kInfinity : *nx - 1});
  }
  return out;
}

namespace {

std::vector<bool> signature_of(const Value& v, const std::vector<ValueSet>& sets) {
  std::vector<bool> s(sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i) s[i] = sets[i].contains(v);
  return s;
}

AttributeCells cells_for_attribute(const Attribute& at, std::size_t attr,
                                   const std::vector<Atom>& atoms) {
  AttributeCells out;
  out.attr = attr;
  for (const auto& a : atoms)
    if (a.attr == attr) out.mentioned.push_back(a.set);
  std::sort(out.mentioned.begin(), out.mentioned.end());
  out.mentioned.erase(std::unique(out.mentioned.begin(), out.mentioned.end()),
                      out.mentioned.end());

  if (out.mentioned.empty()) {
    // A single cell covering the whole domain.
    Cell c;
    c.members.insert(Value(Bottom{}));
    if (at.kind == AttrKind::Numeric) {
      c.members.insert_range(0, kInfinity);
    } else {
      for (const auto& s : at.symbols) c.members.insert(Value::symbol(s));
    }
    c.representative = Value(Bottom{});
    out.cells.push_back(std::move(c));
    return out;
  }

  Cell bot;
  bot.signature = signature_of(Value(Bottom{}), out.mentioned);
  bot.members.insert(Value(Bottom{}));
  bot.representative = Value(Bottom{});
  out.cells.push_back(std::move(bot));

  std::map<std::vector<bool>, std::size_t> by_sig;
  auto cell_for = [&](const std::vector<bool>& sig, const Value& first) -> Cell& {
    auto [it, fresh] = by_sig.emplace(sig, out.cells.size());
    if (fresh) {
      Cell c;
      c.signature = sig;
      c.representative = first;
      out.cells.push_back(std::move(c));
    }
    return out.cells[it->second];
  };

  if (at.kind == AttrKind::Numeric) {
    std::vector<Atom> own;
    for (const auto& s : out.mentioned) own.push_back({attr, s});
    const auto segs = numeric_segments(attr, own);
    std::uint64_t max_mentioned = 0;
    for (const auto& s : segs)
      if (s.hi == kInfinity) max_mentioned = s.lo;  // the last cut
    const std::vector<bool> outside(out.mentioned.size(), false);
    for (const auto& s : segs) {
      const auto sig = signature_of(Value::natural(s.lo), out.mentioned);
      Cell& c = cell_for(sig, Value::natural(s.lo));
      c.members.insert_range(s.lo, s.hi);
    }
    // The cell outside every mentioned set is represented by (max mentioned)+1,
    // i.e. the start of the unbounded tail, whenever the tail lies in it.
    auto it = by_sig.find(outside);
    if (it != by_sig.end() && segs.back().lo == max_mentioned &&
        signature_of(Value::natural(max_mentioned), out.mentioned) == outside)
      out.cells[it->second].representative = Value::natural(max_mentioned);
  } else {
    for (const auto& s : at.symbols) {
      const Value v = Value::symbol(s);
      cell_for(signature_of(v, out.mentioned), v).members.insert(v);
    }
  }
  return out;
}

}  // namespace

RegionSet build_regions(const AttributeSignature& sig, const std::vector<Atom>& atoms) {
  for (const auto& a : atoms) {
    if (a.attr >= sig.size()) throw Error("atom over unknown attribute");
    if (!sig[a.attr].is_request_attribute())
      throw Error("resource attribute '" + sig[a.attr].name + "' in a request region");
  }
  std::vector<AttributeCells> attrs;
  for (auto i : sig.request_attributes()) attrs.push_back(cells_for_attribute(sig[i], i, atoms));
  return RegionSet(sig, std::move(attrs));
}

std::vector<Atom> target_atoms(const std::vector<Target>& ts) {
  std::vector<Atom> out;
  for (const auto& t : ts) {
    std::vector<Atom> part;
    collect_atoms(t.node(), part);
    out.insert(out.end(), part.begin(), part.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<AccessRequest> target_sat(const Target& t, const AttributeSignature& sig) {
  const RegionSet rs = build_regions(sig, target_atoms({t}));
  for (std::size_t i = 0; i < rs.size(); ++i) {
    AccessRequest q = rs.representative(i);
    if (eval_target(q, t)) return q;
  }
  return std::nullopt;
}

bool target_equiv(const Target& a, const Target& b, const AttributeSignature& sig) {
  const RegionSet rs = build_regions(sig, target_atoms({a, b}));
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const AccessRequest q = rs.representative(i);
    if (eval_target(q, a) != eval_target(q, b)) return false;
  }
  return true;
}

bool target_implies(const Target& a, const Target& b, const AttributeSignature& sig) {
  const RegionSet rs = build_regions(sig, target_atoms({a, b}));
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const AccessRequest q = rs.representative(i);
    if (eval_target(q, a) && !eval_target(q, b)) return false;
  }
  return true;
}

}  // namespace spctl
