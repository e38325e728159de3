#include "spctl/templates.hpp"

#include <algorithm>
#include <bit>

#include "spctl/error.hpp"
#include "spctl/regions.hpp"

namespace spctl {

std::uint32_t ConfigurationTemplate::add_var(std::string name, std::uint32_t domain) {
  if (domain <= 1) return kNoVar;
  vars.push_back({std::move(name), domain});
  return static_cast<std::uint32_t>(vars.size() - 1);
}

std::size_t ConfigurationTemplate::bit_count() const {
  std::size_t n = 0;
  for (const auto& v : vars) n += std::bit_width(v.domain - 1);
  return n;
}

CfId ConfigurationTemplate::eq(CfStore& st, std::uint32_t var, std::uint32_t value) const {
  if (var == kNoVar) return st.constant(value == 0);
  if (value >= vars.at(var).domain) return CfStore::kFalse;
  return st.control_eq(var, value);
}

namespace {

ValueSet enum_value(const Attribute& a, std::uint32_t j) {
  if (j < a.symbols.size()) return ValueSet::of(Value::symbol(a.symbols[j]));
  return ValueSet::of(Value(Bottom{}));
}

ValueSet lower_set(std::uint64_t l) { return ValueSet::range(l, kInfinity); }
ValueSet upper_set(std::uint64_t u) { return ValueSet::range(0, u); }

std::uint32_t domain_of(const ConfigurationTemplate& t, std::uint32_t var) {
  return var == kNoVar ? 1 : t.vars[var].domain;
}

}  // namespace

CfId ConfigurationTemplate::policy(CfStore& st, const AttributeSignature& sig,
                                   std::size_t edge) const {
  const EdgeTemplate& et = edges.at(edge);
  switch (kind) {
    case TemplateKind::Guard: return eq(st, et.guard, 1);
    case TemplateKind::Menu: {
      std::vector<CfId> opts;
      for (std::uint32_t i = 0; i < et.menu.size(); ++i)
        opts.push_back(st.conj(eq(st, et.selector, i), st.from_target(et.menu[i])));
      return st.disj(std::move(opts));
    }
    case TemplateKind::Dnf: break;
  }
  std::vector<CfId> clauses;
  for (const auto& cl : et.clauses) {
    std::vector<CfId> terms{eq(st, cl.enable, 1)};
    for (const auto& tm : cl.terms) {
      std::vector<CfId> choices;
      for (std::uint32_t i = 0; i < et.attrs.size(); ++i) {
        const std::size_t a = et.attrs[i];
        const Attribute& at = sig[a];
        CfId body;
        if (at.kind == AttrKind::Numeric) {
          const auto& nc = numeric.at(a);
          std::vector<CfId> lo, hi;
          for (std::uint32_t j = 0; j < nc.lower.size(); ++j)
            lo.push_back(st.conj(eq(st, tm.lo, j), st.atom({a, lower_set(nc.lower[j])})));
          for (std::uint32_t j = 0; j < nc.upper.size(); ++j)
            hi.push_back(st.conj(eq(st, tm.hi, j), st.atom({a, upper_set(nc.upper[j])})));
          body = st.conj(st.disj(std::move(lo)), st.disj(std::move(hi)));
        } else {
          std::vector<CfId> match;
          for (std::uint32_t j = 0; j <= at.symbols.size(); ++j)
            match.push_back(st.conj(eq(st, tm.value, j), st.atom({a, enum_value(at, j)})));
          const CfId m = st.disj(std::move(match));
          body = st.disj(st.conj(eq(st, tm.op, 0), m), st.conj(eq(st, tm.op, 1), st.negate(m)));
        }
        choices.push_back(st.conj(eq(st, tm.attr, i), body));
      }
      terms.push_back(st.disj(st.negate(eq(st, tm.enable, 1)), st.disj(std::move(choices))));
    }
    clauses.push_back(st.conj(std::move(terms)));
  }
  return st.disj(std::move(clauses));
}

CfId ConfigurationTemplate::wellformed(CfStore& st, const AttributeSignature& sig) const {
  if (kind != TemplateKind::Dnf) return CfStore::kTrue;
  std::vector<CfId> parts;
  for (const auto& [e, et] : edges) {
    for (const auto& cl : et.clauses) {
      for (const auto& tm : cl.terms) {
        for (std::uint32_t i = 0; i < et.attrs.size(); ++i) {
          const std::size_t a = et.attrs[i];
          std::vector<CfId> bad;
          auto forbid_from = [&](std::uint32_t var, std::uint32_t n) {
            for (std::uint32_t j = n; j < domain_of(*this, var); ++j) bad.push_back(eq(st, var, j));
          };
          if (sig[a].kind == AttrKind::Numeric) {
            forbid_from(tm.lo, static_cast<std::uint32_t>(numeric.at(a).lower.size()));
            forbid_from(tm.hi, static_cast<std::uint32_t>(numeric.at(a).upper.size()));
          } else {
            forbid_from(tm.value, static_cast<std::uint32_t>(sig[a].symbols.size() + 1));
          }
          if (!bad.empty())
            parts.push_back(st.implies(eq(st, tm.attr, i), st.negate(st.disj(std::move(bad)))));
        }
      }
    }
  }
  return st.conj(std::move(parts));
}

std::vector<Atom> ConfigurationTemplate::atoms(const AttributeSignature& sig) const {
  std::vector<Atom> out;
  for (const auto& [e, et] : edges) {
    if (kind == TemplateKind::Menu) {
      auto part = target_atoms(et.menu);
      out.insert(out.end(), part.begin(), part.end());
    } else if (kind == TemplateKind::Dnf) {
      for (auto a : et.attrs) {
        const Attribute& at = sig[a];
        if (at.kind == AttrKind::Numeric) {
          for (auto l : numeric.at(a).lower) out.push_back({a, lower_set(l)});
          for (auto u : numeric.at(a).upper) out.push_back({a, upper_set(u)});
        } else {
          for (std::uint32_t j = 0; j <= at.symbols.size(); ++j) out.push_back({a, enum_value(at, j)});
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Configuration ConfigurationTemplate::derive(const ControlAssignment& m,
                                            const AttributeSignature& sig) const {
  if (m.size() != vars.size()) throw Error("control assignment is not total");
  for (std::size_t v = 0; v < vars.size(); ++v)
    if (m[v] >= vars[v].domain)
      throw Error("control variable " + vars[v].name + " out of range");
  auto val = [&](std::uint32_t var) -> std::uint32_t { return var == kNoVar ? 0 : m[var]; };

  Configuration c;
  for (const auto& [e, et] : edges) {
    switch (kind) {
      case TemplateKind::Menu: {
        const auto i = val(et.selector);
        if (i >= et.menu.size()) throw Error("menu selector out of range");
        c.set(e, et.menu[i]);
        break;
      }
      case TemplateKind::Guard:
        c.set(e, val(et.guard) ? Target::truth() : Target::falsity());
        break;
      case TemplateKind::Dnf: {
        std::optional<Target> pol;
        for (const auto& cl : et.clauses) {
          if (val(cl.enable) == 0) continue;
          std::vector<Target> lits;
          for (const auto& tm : cl.terms) {
            if (val(tm.enable) == 0) continue;
            const auto sel = val(tm.attr);
            if (sel >= et.attrs.size()) throw Error("attribute selector out of range");
            const std::size_t a = et.attrs[sel];
            const Attribute& at = sig[a];
            if (at.kind == AttrKind::Numeric) {
              const auto& nc = numeric.at(a);
              const auto li = val(tm.lo), hi = val(tm.hi);
              if (li >= nc.lower.size() || hi >= nc.upper.size())
                throw Error("interval selector out of range");
              ValueSet s;
              s.insert_range(nc.lower[li], nc.upper[hi]);
              lits.push_back(Target::member(a, s));
            } else {
              const auto j = val(tm.value);
              if (j > at.symbols.size()) throw Error("value selector out of range");
              Target lit = Target::member(a, enum_value(at, j));
              lits.push_back(val(tm.op) ? negate(lit) : lit);
            }
          }
          Target cl_t = conj_all(lits);
          pol = pol ? disj(*pol, cl_t) : cl_t;
        }
        c.set(e, simplify_policy(pol ? *pol : Target::falsity(), sig));
        break;
      }
    }
  }
  return c;
}

ConfigurationTemplate menu_template(const ResourceStructure& s,
                                    const std::map<std::size_t, std::vector<Target>>& menus) {
  ConfigurationTemplate t;
  t.kind = TemplateKind::Menu;
  for (auto e : s.controlled_edges()) {
    auto it = menus.find(e);
    if (it == menus.end() || it->second.empty())
      throw Error("menu template misses edge " + s.edge_name(e));
    EdgeTemplate et;
    et.menu = it->second;
    et.selector = t.add_var("z[" + s.edge_name(e) + "]", static_cast<std::uint32_t>(et.menu.size()));
    t.edges.emplace(e, std::move(et));
  }
  return t;
}

ConfigurationTemplate singleton(const ResourceStructure& s, const Configuration& c) {
  c.check_total(s);
  std::map<std::size_t, std::vector<Target>> menus;
  for (const auto& [e, p] : c.policies()) menus[e] = {p};
  return menu_template(s, menus);
}

ConfigurationTemplate guard_template(const ResourceStructure& s) {
  ConfigurationTemplate t;
  t.kind = TemplateKind::Guard;
  for (auto e : s.controlled_edges()) {
    EdgeTemplate et;
    et.guard = t.add_var("C[" + s.edge_name(e) + "]", 2);
    t.edges.emplace(e, std::move(et));
  }
  return t;
}

NumericCandidates numeric_candidates(std::size_t attr, const std::vector<Requirement>& reqs) {
  std::vector<Target> ts;
  for (const auto& r : reqs) ts.push_back(r.target);
  NumericCandidates nc;
  for (const auto& seg : numeric_segments(attr, target_atoms(ts))) {
    nc.lower.push_back(seg.lo);
    nc.upper.push_back(seg.hi);
  }
  return nc;
}

ConfigurationTemplate dnf_template(const ResourceStructure& s, std::size_t k,
                                   const std::vector<Requirement>& reqs) {
  if (k == 0) throw Error("DNF template needs k >= 1");
  const auto& sig = s.sig();
  ConfigurationTemplate t;
  t.kind = TemplateKind::Dnf;
  t.k = k;
  for (auto a : sig.request_attributes())
    if (sig[a].kind == AttrKind::Numeric) t.numeric[a] = numeric_candidates(a, reqs);

  for (auto e : s.controlled_edges()) {
    EdgeTemplate et;
    et.attrs = s.allowed_attributes(e);
    std::uint32_t values = 1, lows = 1, highs = 1;
    bool any_enum = false;
    for (auto a : et.attrs) {
      if (sig[a].kind == AttrKind::Numeric) {
        lows = std::max(lows, static_cast<std::uint32_t>(t.numeric[a].lower.size()));
        highs = std::max(highs, static_cast<std::uint32_t>(t.numeric[a].upper.size()));
      } else {
        any_enum = true;
        values = std::max(values, static_cast<std::uint32_t>(sig[a].symbols.size() + 1));
      }
    }
    const bool any_numeric = lows > 1 || highs > 1 ||
                             std::any_of(et.attrs.begin(), et.attrs.end(), [&](std::size_t a) {
                               return sig[a].kind == AttrKind::Numeric;
                             });
    const std::string base = "z[" + s.edge_name(e) + "]";
    for (std::size_t c = 0; c < k; ++c) {
      DnfClause cl;
      const std::string cb = base + ".c" + std::to_string(c + 1);
      cl.enable = t.add_var(cb + ".on", 2);
      for (std::size_t i = 0; i < k; ++i) {
        DnfTerm tm;
        const std::string tb = cb + ".t" + std::to_string(i + 1);
        tm.enable = t.add_var(tb + ".on", 2);
        tm.attr = t.add_var(tb + ".attr", static_cast<std::uint32_t>(et.attrs.size()));
        if (any_enum) {
          tm.op = t.add_var(tb + ".neg", 2);
          tm.value = t.add_var(tb + ".val", values);
        }
        if (any_numeric) {
          tm.lo = t.add_var(tb + ".lo", lows);
          tm.hi = t.add_var(tb + ".hi", highs);
        }
        cl.terms.push_back(tm);
      }
      et.clauses.push_back(std::move(cl));
    }
    t.edges.emplace(e, std::move(et));
  }
  return t;
}

// ---- simplification ---------------------------------------------------------

namespace {

class Simplifier {
 public:
  explicit Simplifier(const AttributeSignature& sig) : sig_(sig) {}

  Target run(const Target& t) {
    switch (t.op()) {
      case Op::True: return t;
      case Op::Member: return literal(t.node().attr, t.node().set);
      case Op::Not: {
        Target a = run(t.lhs());
        if (a.op() == Op::Not) return a.lhs();
        if (auto lit = as_literal(a))
          return literal(lit->first, subtract(sig_[lit->first].domain(), lit->second));
        return negate(a);
      }
      case Op::And:
        if (auto lit = as_literal(t)) return literal(lit->first, lit->second);
        return conjunction(t);
      default: throw Error("temporal operator in a policy");
    }
  }

 private:
  static bool is_false(const Target& t) { return t.op() == Op::Not && t.lhs().op() == Op::True; }

  // Canonical literal for a ∈ s.
  Target literal(std::size_t a, const ValueSet& s) const {
    const Attribute& at = sig_[a];
    const ValueSet dom = at.domain();
    const ValueSet in = intersect(s, dom);
    if (in.empty()) return Target::falsity();
    if (in == dom) return Target::truth();
    const ValueSet out = subtract(dom, in);
    if (at.kind != AttrKind::Numeric) {
      const auto ni = in.finite_size().value_or(0), no = out.finite_size().value_or(0);
      if (no < ni) return negate(Target::member(a, out));
      return Target::member(a, in);
    }
    const auto& r = out.ranges();
    // complement is {0..n-1}: a >= n
    if (!out.has_bottom() && r.size() == 1 && r[0].lo == 0) return negate(Target::member(a, out));
    // [L..U] without ⊥: L <= a <= U
    const auto& ir = in.ranges();
    if (!in.has_bottom() && ir.size() == 1 && ir[0].lo > 0 && ir[0].hi != kInfinity)
      return conj(negate(Target::member(a, ValueSet::range(0, ir[0].lo - 1))),
                  Target::member(a, ValueSet::range(0, ir[0].hi)));
    return Target::member(a, in);
  }

  // Recognizes a single-attribute literal (possibly a range conjunction) and
  // returns its value set.
  std::optional<std::pair<std::size_t, ValueSet>> as_literal(const Target& t) const {
    if (t.op() == Op::Member) return std::pair{t.node().attr, t.node().set};
    if (t.op() == Op::Not && t.lhs().op() == Op::Member)
      return std::pair{t.lhs().node().attr, subtract(sig_[t.lhs().node().attr].domain(), t.lhs().node().set)};
    if (t.op() == Op::And) {
      auto l = as_literal(t.lhs()), r = as_literal(t.rhs());
      if (l && r && l->first == r->first) return std::pair{l->first, intersect(l->second, r->second)};
    }
    return std::nullopt;
  }

  void flatten(const Target& t, std::vector<Target>& out) {
    if (t.op() == Op::And && !as_literal(t)) {
      flatten(t.lhs(), out);
      flatten(t.rhs(), out);
    } else {
      out.push_back(t);
    }
  }

  Target conjunction(const Target& t) {
    std::vector<Target> parts;
    flatten(t, parts);
    std::vector<Target> simp;
    for (const auto& p : parts) {
      Target s = run(p);
      if (is_false(s)) return Target::falsity();
      if (s.op() == Op::True) continue;
      if (s.op() == Op::And && !as_literal(s)) {
        flatten(s, simp);
      } else {
        simp.push_back(s);
      }
    }
    // Merge literals per attribute, keeping first-appearance order.
    std::vector<std::size_t> order;
    std::map<std::size_t, ValueSet> sets;
    std::vector<Target> rest;
    for (const auto& s : simp) {
      if (auto lit = as_literal(s)) {
        auto [it, fresh] = sets.emplace(lit->first, lit->second);
        if (fresh)
          order.push_back(lit->first);
        else
          it->second = intersect(it->second, lit->second);
      } else if (std::find(rest.begin(), rest.end(), s) == rest.end()) {
        rest.push_back(s);
      }
    }
    std::vector<Target> out;
    for (auto a : order) {
      Target l = literal(a, sets[a]);
      if (is_false(l)) return Target::falsity();
      if (l.op() != Op::True) out.push_back(l);
    }
    for (const auto& r : rest) out.push_back(r);
    // x ∧ ¬x
    for (const auto& x : out)
      for (const auto& y : out)
        if (y.op() == Op::Not && y.lhs() == x) return Target::falsity();
    // Absorption: x ∧ (¬y1 ∨ … ) where some ¬yi is x.
    std::vector<Target> kept;
    for (std::size_t i = 0; i < out.size(); ++i) {
      bool absorbed = false;
      const Target& d = out[i];
      if (d.op() == Op::Not && d.lhs().op() == Op::And) {
        std::vector<Target> ys;
        flatten_all(d.lhs(), ys);
        for (const auto& y : ys) {
          const Target ny = y.op() == Op::Not ? y.lhs() : negate(y);
          for (std::size_t j = 0; j < out.size() && !absorbed; ++j)
            if (j != i && out[j] == ny) absorbed = true;
        }
      }
      if (!absorbed) kept.push_back(d);
    }
    if (kept.empty()) return Target::truth();
    return conj_all(kept);
  }

  static void flatten_all(const Target& t, std::vector<Target>& out) {
    if (t.op() == Op::And) {
      flatten_all(t.lhs(), out);
      flatten_all(t.rhs(), out);
    } else {
      out.push_back(t);
    }
  }

  const AttributeSignature& sig_;
};

}  // namespace

Target simplify_policy(const Target& t, const AttributeSignature& sig) {
  Target out = Simplifier(sig).run(t);
  if (!target_equiv(t, out, sig)) throw Error("internal: policy simplification changed verdicts");
  return out;
}

Configuration simplify(const Configuration& c, const AttributeSignature& sig) {
  Configuration out;
  for (const auto& [e, t] : c.policies()) out.set(e, simplify_policy(t, sig));
  return out;
}

}  // namespace spctl
