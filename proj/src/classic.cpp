#include "spctl/classic.hpp"

#include "spctl/checker.hpp"
#include "spctl/error.hpp"
#include "spctl/regions.hpp"

namespace spctl {

namespace {

// Advances `idx` (k ascending indices below n) to the next combination in
// lexicographic order; false after the last one.
bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
  const std::size_t k = idx.size();
  for (std::size_t i = k; i-- > 0;) {
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

void check_fixed_grant_all(const ResourceStructure& s) {
  for (std::size_t e = 0; e < s.edges().size(); ++e) {
    const Edge& ed = s.edge(e);
    if (!ed.controlled && !target_equiv(ed.fixed_policy, Target::truth(), s.sig()))
      throw Error("controller-synthesis algorithm needs grant-all fixed edges; '" +
                  s.edge_name(e) + "' is restricted");
  }
}

}  // namespace

std::optional<std::vector<bool>> cs(const ResourceStructure& s, const Constraint& phi) {
  const auto ctrl = s.controlled_edges();
  const std::size_t n = ctrl.size();
  std::vector<bool> base(s.edges().size(), true);
  for (auto e : ctrl) base[e] = false;

  for (std::size_t k = n + 1; k-- > 0;) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    do {
      std::vector<bool> kept = base;
      for (auto i : idx) kept[ctrl[i]] = true;
      if (model_check(s, restrict_edges(s, kept), phi)) return kept;
    } while (k > 0 && next_combination(idx, n));
  }
  return std::nullopt;
}

Target subset_target(const std::vector<Requirement>& reqs, std::uint64_t mask) {
  std::vector<Target> parts;
  for (std::size_t i = 0; i < reqs.size(); ++i)
    parts.push_back(mask >> i & 1 ? reqs[i].target : negate(reqs[i].target));
  return conj_all(parts);
}

ClassicResult s_cs(const ResourceStructure& s, const std::vector<Requirement>& reqs) {
  if (reqs.size() >= 63) throw Error("too many requirements for subset enumeration");
  check_fixed_grant_all(s);
  ClassicResult out;
  Configuration c = Configuration::uniform(s, Target::truth());
  const std::uint64_t all = (std::uint64_t{1} << reqs.size()) - 1;
  for (std::uint64_t mask = all + 1; mask-- > 0;) {
    ++out.stats.iterations;
    const Target t = subset_target(reqs, mask);
    if (!target_sat(t, s.sig())) continue;
    ++out.stats.satisfiable;
    std::vector<Constraint> phis;
    for (std::size_t i = 0; i < reqs.size(); ++i)
      if (mask >> i & 1) phis.push_back(reqs[i].constraint);
    ++out.stats.cs_calls;
    const auto kept = cs(s, conj_all(phis));
    if (!kept) return out;
    for (auto e : s.controlled_edges())
      if (!(*kept)[e]) c.set(e, conj(c.at(e), negate(t)));
  }
  Configuration simple = simplify(c, s.sig());
  if (!holds(s, simple, reqs).ok)
    throw Error("internal error: controller-synthesis output fails verification");
  out.raw = std::move(c);
  out.config = std::move(simple);
  return out;
}

ConfigurationTemplate build_complete_template(const ResourceStructure& s,
                                              const std::vector<Requirement>& reqs,
                                              std::size_t cap) {
  if (reqs.size() >= 63) throw CapError("too many requirements for a complete template", cap);
  std::vector<Target> blocks;
  const std::uint64_t all = (std::uint64_t{1} << reqs.size()) - 1;
  for (std::uint64_t mask = all + 1; mask-- > 0;) {
    Target t = subset_target(reqs, mask);
    if (target_sat(t, s.sig())) blocks.push_back(std::move(t));
  }
  // Satisfiable subset targets are pairwise disjoint, so distinct sets of them
  // give distinct verdict functions; unsatisfiable ones only add duplicates.
  const std::size_t n = blocks.size();
  if (n >= 8 * sizeof(std::size_t) - 1 || (std::size_t{1} << n) > cap) {
    const std::size_t need = n >= 8 * sizeof(std::size_t) - 1 ? 0 : std::size_t{1} << n;
    throw CapError("complete template needs " +
                       (need ? std::to_string(need) : "2^" + std::to_string(n)) +
                       " menu entries per edge, cap is " + std::to_string(cap),
                   need);
  }
  std::vector<Target> menu;
  menu.reserve(std::size_t{1} << n);
  for (std::size_t f = 0; f < (std::size_t{1} << n); ++f) {
    std::vector<Target> parts;
    for (std::size_t j = 0; j < n; ++j)
      if (f >> j & 1) parts.push_back(negate(blocks[j]));
    menu.push_back(simplify_policy(conj_all(parts), s.sig()));
  }
  std::map<std::size_t, std::vector<Target>> menus;
  for (auto e : s.controlled_edges()) menus[e] = menu;
  return menu_template(s, menus);
}

}  // namespace spctl
