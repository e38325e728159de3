#include "spctl/checker.hpp"

#include <unordered_map>

#include "spctl/error.hpp"
#include "spctl/regions.hpp"

namespace spctl {

namespace {

class Labeler {
 public:
  Labeler(const ResourceStructure& s, const Restriction& m) : s_(s), m_(m) {
    const auto n = s.resources().size();
    succ_.resize(n);
    pred_.resize(n);
    for (std::size_t e = 0; e < s.edges().size(); ++e) {
      if (!m.edge_kept[e]) continue;
      const auto& ed = s.edge(e);
      succ_[ed.from].push_back(ed.to);
      pred_[ed.to].push_back(ed.from);
    }
  }

  const std::vector<bool>& sat(const NodePtr& phi) {
    auto it = memo_.find(phi.get());
    if (it != memo_.end()) return it->second;
    std::vector<bool> out = compute(*phi);
    return memo_.emplace(phi.get(), std::move(out)).first->second;
  }

 private:
  std::vector<bool> compute(const Node& phi) {
    const auto n = s_.resources().size();
    std::vector<bool> z(n, false);
    switch (phi.op) {
      case Op::True:
        for (std::size_t r = 0; r < n; ++r) z[r] = m_.node_kept[r];
        return z;
      case Op::Member: {
        const Attribute& a = s_.sig()[phi.attr];
        if (a.cls != AttrClass::Resource)
          throw Error("constraint mentions non-resource attribute '" + a.name + "'");
        for (std::size_t r = 0; r < n; ++r)
          z[r] = m_.node_kept[r] && phi.set.contains(s_.resource(r).labels[phi.attr]);
        return z;
      }
      case Op::Not: {
        const auto& a = sat(phi.lhs);
        for (std::size_t r = 0; r < n; ++r) z[r] = m_.node_kept[r] && !a[r];
        return z;
      }
      case Op::And: {
        const auto a = sat(phi.lhs);
        const auto& b = sat(phi.rhs);
        for (std::size_t r = 0; r < n; ++r) z[r] = a[r] && b[r];
        return z;
      }
      case Op::EX: {
        const auto& a = sat(phi.lhs);
        for (std::size_t r = 0; r < n; ++r) {
          if (!m_.node_kept[r]) continue;
          for (auto t : succ_[r])
            if (a[t]) {
              z[r] = true;
              break;
            }
        }
        return z;
      }
      case Op::AX: {
        const auto& a = sat(phi.lhs);
        for (std::size_t r = 0; r < n; ++r) {
          if (!m_.node_kept[r]) continue;
          bool all = true;
          for (auto t : succ_[r]) all = all && a[t];
          z[r] = all;  // vacuous at deadlocks
        }
        return z;
      }
      case Op::EU: {
        const auto a = sat(phi.lhs);
        const auto& b = sat(phi.rhs);
        std::vector<std::size_t> work;
        for (std::size_t r = 0; r < n; ++r)
          if (b[r]) {
            z[r] = true;
            work.push_back(r);
          }
        while (!work.empty()) {
          const auto t = work.back();
          work.pop_back();
          for (auto p : pred_[t])
            if (!z[p] && a[p]) {
              z[p] = true;
              work.push_back(p);
            }
        }
        return z;
      }
      case Op::AU: {
        const auto a = sat(phi.lhs);
        const auto& b = sat(phi.rhs);
        // Successors not yet known to be in Z.
        std::vector<std::size_t> pending(n);
        for (std::size_t r = 0; r < n; ++r) pending[r] = succ_[r].size();
        std::vector<std::size_t> work;
        for (std::size_t r = 0; r < n; ++r)
          if (b[r]) {
            z[r] = true;
            work.push_back(r);
          }
        while (!work.empty()) {
          const auto t = work.back();
          work.pop_back();
          for (auto p : pred_[t]) {
            if (z[p]) continue;
            if (--pending[p] == 0 && a[p] && !succ_[p].empty()) {
              z[p] = true;
              work.push_back(p);
            }
          }
        }
        return z;
      }
    }
    throw Error("unknown operator");
  }

  const ResourceStructure& s_;
  const Restriction& m_;
  std::vector<std::vector<std::size_t>> succ_, pred_;
  std::unordered_map<const Node*, std::vector<bool>> memo_;
};

Restriction full(const ResourceStructure& s) {
  return restrict_edges(s, std::vector<bool>(s.edges().size(), true));
}

}  // namespace

std::vector<bool> label(const ResourceStructure& s, const Restriction& m, const Constraint& phi) {
  Labeler l(s, m);
  return l.sat(phi.ptr());
}

bool check_at(const ResourceStructure& s, const Restriction& m, std::size_t r0,
              const Constraint& phi) {
  return label(s, m, phi).at(r0);
}

bool check_at(const ResourceStructure& s, std::size_t r0, const Constraint& phi) {
  return check_at(s, full(s), r0, phi);
}

bool model_check(const ResourceStructure& s, const Constraint& phi) {
  return check_at(s, full(s), s.entry(), phi);
}

bool model_check(const ResourceStructure& s, const Restriction& m, const Constraint& phi) {
  return check_at(s, m, s.entry(), phi);
}

HoldsResult holds(const ResourceStructure& s, const Configuration& c,
                  const std::vector<Requirement>& reqs) {
  c.check_total(s);
  std::vector<Target> ts;
  for (const auto& r : reqs) ts.push_back(r.target);
  for (std::size_t e = 0; e < s.edges().size(); ++e) ts.push_back(edge_policy(s, c, e));
  const RegionSet rs = build_regions(s.sig(), target_atoms(ts));

  HoldsResult out;
  out.verdicts.resize(reqs.size());
  out.representatives = rs.size();
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const AccessRequest q = rs.representative(i);
    std::optional<Labeler> lab;
    std::optional<Restriction> m;
    for (std::size_t k = 0; k < reqs.size(); ++k) {
      if (!out.verdicts[k].ok || !eval_target(q, reqs[k].target)) continue;
      if (!m) {
        m = restrict_mask(s, c, q);
        lab.emplace(s, *m);
      }
      if (!lab->sat(reqs[k].constraint.ptr())[s.entry()]) {
        out.verdicts[k] = {false, q};
        if (out.ok) {
          out.ok = false;
          out.failed_requirement = k;
          out.witness = q;
        }
      }
    }
  }
  return out;
}

}  // namespace spctl
