#include "spctl/structure.hpp"

#include <algorithm>

#include "spctl/error.hpp"
#include "spctl/regions.hpp"

namespace spctl {

std::size_t ResourceStructure::add_resource(const std::string& id) {
  if (id.empty()) throw Error("resource with empty id");
  if (index_.count(id)) throw Error("duplicate resource '" + id + "'");
  const std::size_t r = resources_.size();
  resources_.push_back({id, std::vector<Value>(sig_->size())});
  out_.emplace_back();
  index_.emplace(id, r);
  return r;
}

void ResourceStructure::set_label(std::size_t r, std::size_t attr, Value v) {
  const Attribute& a = sig_->operator[](attr);
  if (a.cls != AttrClass::Resource)
    throw Error("'" + a.name + "' is not a resource attribute");
  if (!a.admits(v))
    throw Error("label " + v.to_string() + " outside the domain of '" + a.name + "'");
  resources_.at(r).labels.at(attr) = std::move(v);
}

std::size_t ResourceStructure::add_edge(std::size_t from, std::size_t to, bool controlled,
                                        Target fixed_policy) {
  if (from >= resources_.size() || to >= resources_.size()) throw Error("edge endpoint out of range");
  if (from == to) throw Error("self-loop on '" + resources_[from].id + "'");
  if (find_edge(from, to))
    throw Error("duplicate edge " + resources_[from].id + "->" + resources_[to].id);
  const std::size_t e = edges_.size();
  edges_.push_back({from, to, controlled, std::move(fixed_policy), std::nullopt});
  out_[from].push_back(e);
  return e;
}

void ResourceStructure::set_allowed(std::size_t edge, std::vector<std::size_t> attrs) {
  for (auto a : attrs)
    if (a >= sig_->size() || !(*sig_)[a].is_request_attribute())
      throw Error("allowed attribute of edge " + edge_name(edge) + " is not a request attribute");
  std::sort(attrs.begin(), attrs.end());
  attrs.erase(std::unique(attrs.begin(), attrs.end()), attrs.end());
  edges_.at(edge).allowed = std::move(attrs);
}

std::optional<std::size_t> ResourceStructure::find_resource(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t ResourceStructure::resource_index(const std::string& id) const {
  auto r = find_resource(id);
  if (!r) throw Error("unknown resource '" + id + "'");
  return *r;
}

std::optional<std::size_t> ResourceStructure::find_edge(std::size_t from, std::size_t to) const {
  if (from >= out_.size()) return std::nullopt;
  for (auto e : out_[from])
    if (edges_[e].to == to) return e;
  return std::nullopt;
}

std::string ResourceStructure::edge_name(std::size_t e) const {
  const Edge& ed = edges_.at(e);
  return resources_[ed.from].id + "->" + resources_[ed.to].id;
}

std::size_t ResourceStructure::edge_by_name(const std::string& name) const {
  const auto arrow = name.find("->");
  if (arrow == std::string::npos) throw Error("malformed edge name '" + name + "'");
  auto trim = [](std::string s) {
    s.erase(0, s.find_first_not_of(" \t"));
    s.erase(s.find_last_not_of(" \t") + 1);
    return s;
  };
  const auto from = resource_index(trim(name.substr(0, arrow)));
  const auto to = resource_index(trim(name.substr(arrow + 2)));
  auto e = find_edge(from, to);
  if (!e) throw Error("no edge '" + name + "'");
  return *e;
}

std::vector<std::size_t> ResourceStructure::controlled_edges() const {
  std::vector<std::size_t> out;
  for (std::size_t e = 0; e < edges_.size(); ++e)
    if (edges_[e].controlled) out.push_back(e);
  return out;
}

std::vector<std::size_t> ResourceStructure::allowed_attributes(std::size_t e) const {
  const Edge& ed = edges_.at(e);
  if (ed.allowed) return *ed.allowed;
  return sig_->request_attributes();
}

void ResourceStructure::validate() const {
  if (resources_.empty()) throw Error("structure has no resources");
  if (entry_ >= resources_.size()) throw Error("entry resource out of range");
  std::vector<bool> all(edges_.size(), true);
  const Restriction m = restrict_edges(*this, all);
  for (std::size_t r = 0; r < resources_.size(); ++r) {
    if (!m.node_kept[r])
      throw Error("resource '" + resources_[r].id + "' is unreachable from the entry");
    if (out_[r].empty())
      throw Error("resource '" + resources_[r].id + "' has no outgoing edge");
  }
  for (const auto& e : edges_) {
    if (e.controlled) continue;
    std::vector<Atom> atoms;
    collect_atoms(e.fixed_policy.node(), atoms);
    for (const auto& a : atoms)
      if (!(*sig_)[a.attr].is_request_attribute())
        throw Error("fixed policy mentions resource attribute '" + (*sig_)[a.attr].name + "'");
  }
}

Configuration Configuration::uniform(const ResourceStructure& s, const Target& init) {
  Configuration c;
  for (auto e : s.controlled_edges()) c.set(e, init);
  return c;
}

const Target& Configuration::at(std::size_t edge) const {
  auto it = policies_.find(edge);
  if (it == policies_.end()) throw Error("configuration has no policy for edge #" + std::to_string(edge));
  return it->second;
}

void Configuration::check_total(const ResourceStructure& s) const {
  const auto ce = s.controlled_edges();
  for (auto e : ce)
    if (!contains(e)) throw Error("configuration misses edge " + s.edge_name(e));
  for (const auto& [e, t] : policies_) {
    if (e >= s.edges().size() || !s.edge(e).controlled)
      throw Error("configuration sets a policy on a non-controlled edge");
    std::vector<Atom> atoms;
    collect_atoms(t.node(), atoms);
    for (const auto& a : atoms)
      if (!s.sig()[a.attr].is_request_attribute())
        throw Error("policy of " + s.edge_name(e) + " mentions a resource attribute");
  }
}

const Target& edge_policy(const ResourceStructure& s, const Configuration& c, std::size_t e) {
  const Edge& ed = s.edge(e);
  return ed.controlled ? c.at(e) : ed.fixed_policy;
}

Restriction restrict_edges(const ResourceStructure& s, std::vector<bool> edge_kept) {
  Restriction m;
  m.node_kept.assign(s.resources().size(), false);
  std::vector<std::size_t> stack{s.entry()};
  m.node_kept[s.entry()] = true;
  while (!stack.empty()) {
    const auto r = stack.back();
    stack.pop_back();
    for (auto e : s.out_edges(r)) {
      if (!edge_kept[e]) continue;
      const auto t = s.edge(e).to;
      if (!m.node_kept[t]) {
        m.node_kept[t] = true;
        stack.push_back(t);
      }
    }
  }
  for (std::size_t e = 0; e < edge_kept.size(); ++e)
    if (edge_kept[e] && !m.node_kept[s.edge(e).from]) edge_kept[e] = false;
  m.edge_kept = std::move(edge_kept);
  return m;
}

Restriction restrict_mask(const ResourceStructure& s, const Configuration& c,
                          const AccessRequest& q) {
  std::vector<bool> kept(s.edges().size());
  for (std::size_t e = 0; e < kept.size(); ++e) kept[e] = eval_target(q, edge_policy(s, c, e));
  return restrict_edges(s, std::move(kept));
}

ResourceStructure apply_restriction(const ResourceStructure& s, const Restriction& m) {
  ResourceStructure out(s.sig_ptr());
  std::vector<std::size_t> map(s.resources().size(), SIZE_MAX);
  for (std::size_t r = 0; r < s.resources().size(); ++r) {
    if (!m.node_kept[r]) continue;
    map[r] = out.add_resource(s.resource(r).id);
    for (auto a : s.sig().resource_attributes()) out.set_label(map[r], a, s.resource(r).labels[a]);
  }
  out.set_entry(map[s.entry()]);
  for (std::size_t e = 0; e < s.edges().size(); ++e) {
    if (!m.edge_kept[e]) continue;
    const Edge& ed = s.edge(e);
    const auto ne = out.add_edge(map[ed.from], map[ed.to], ed.controlled, ed.fixed_policy);
    if (ed.allowed) out.set_allowed(ne, *ed.allowed);
  }
  return out;
}

ResourceStructure restrict(const ResourceStructure& s, const Configuration& c,
                           const AccessRequest& q) {
  return apply_restriction(s, restrict_mask(s, c, q));
}

std::string_view to_string(Order o) {
  switch (o) {
    case Order::LessOrEqual: return "less-or-equal";
    case Order::GreaterOrEqual: return "greater-or-equal";
    case Order::Equal: return "equal";
    case Order::Incomparable: return "incomparable";
  }
  return "?";
}

Order compare(const Configuration& c1, const Configuration& c2, const AttributeSignature& sig) {
  bool le = true, ge = true;
  for (const auto& [e, t1] : c1.policies()) {
    const Target& t2 = c2.at(e);
    if (le && !target_implies(t1, t2, sig)) le = false;
    if (ge && !target_implies(t2, t1, sig)) ge = false;
  }
  for (const auto& [e, t2] : c2.policies())
    if (!c1.contains(e)) throw Error("configurations differ in their edge sets");
  if (le && ge) return Order::Equal;
  if (le) return Order::LessOrEqual;
  if (ge) return Order::GreaterOrEqual;
  return Order::Incomparable;
}

ResourceStructure scale_replicate(const ResourceStructure& s, std::size_t copies) {
  if (copies == 0) throw Error("copies must be positive");
  ResourceStructure out(s.sig_ptr());
  const auto n = s.resources().size();
  const auto entry = s.entry();
  const auto resource_attrs = s.sig().resource_attributes();
  auto copy_labels = [&](std::size_t from, std::size_t to) {
    for (auto a : resource_attrs) out.set_label(to, a, s.resource(from).labels[a]);
  };
  const auto new_entry = out.add_resource(s.resource(entry).id);
  copy_labels(entry, new_entry);
  out.set_entry(new_entry);

  // map[k][r]: index of resource r in copy k.
  std::vector<std::vector<std::size_t>> map(copies, std::vector<std::size_t>(n));
  for (std::size_t k = 0; k < copies; ++k) {
    for (std::size_t r = 0; r < n; ++r) {
      if (r == entry) {
        map[k][r] = new_entry;
        continue;
      }
      map[k][r] = out.add_resource(s.resource(r).id + "@" + std::to_string(k + 1));
      copy_labels(r, map[k][r]);
    }
  }
  for (std::size_t k = 0; k < copies; ++k) {
    for (std::size_t e = 0; e < s.edges().size(); ++e) {
      const Edge& ed = s.edge(e);
      const auto ne = out.add_edge(map[k][ed.from], map[k][ed.to], ed.controlled, ed.fixed_policy);
      if (ed.allowed) out.set_allowed(ne, *ed.allowed);
    }
  }
  out.validate();
  return out;
}

}  // namespace spctl
