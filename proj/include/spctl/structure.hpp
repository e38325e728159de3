#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "spctl/formula.hpp"
#include "spctl/value.hpp"

namespace spctl {

struct Resource {
  std::string id;
  /// Indexed by attribute; only resource attributes are meaningful.
  std::vector<Value> labels;
};

struct Edge {
  std::size_t from = 0;
  std::size_t to = 0;
  bool controlled = true;
  /// Declared policy of a fixed edge; ignored for controlled edges.
  Target fixed_policy;
  /// Request attributes a PEP on this edge may read; nullopt means all.
  std::optional<std::vector<std::size_t>> allowed;
};

/// S = (R, E, r_e, L) plus per-edge mode.
class ResourceStructure {
 public:
  ResourceStructure() = default;
  explicit ResourceStructure(std::shared_ptr<const AttributeSignature> sig)
      : sig_(std::move(sig)) {}

  const AttributeSignature& sig() const { return *sig_; }
  const std::shared_ptr<const AttributeSignature>& sig_ptr() const { return sig_; }

  /// Adds a resource with all labels ⊥. Throws on a duplicate id.
  std::size_t add_resource(const std::string& id);
  void set_label(std::size_t r, std::size_t attr, Value v);
  /// Throws on self-loops, duplicate edges and unknown endpoints.
  std::size_t add_edge(std::size_t from, std::size_t to, bool controlled = true,
                       Target fixed_policy = Target::truth());
  void set_allowed(std::size_t edge, std::vector<std::size_t> attrs);
  void set_entry(std::size_t r) { entry_ = r; }

  std::size_t entry() const { return entry_; }
  const std::vector<Resource>& resources() const { return resources_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Resource& resource(std::size_t r) const { return resources_.at(r); }
  const Edge& edge(std::size_t e) const { return edges_.at(e); }
  const std::vector<std::size_t>& out_edges(std::size_t r) const { return out_.at(r); }

  std::optional<std::size_t> find_resource(const std::string& id) const;
  std::size_t resource_index(const std::string& id) const;
  std::optional<std::size_t> find_edge(std::size_t from, std::size_t to) const;
  /// "from->to"
  std::string edge_name(std::size_t e) const;
  std::size_t edge_by_name(const std::string& name) const;

  /// Controlled edge indices, ascending.
  std::vector<std::size_t> controlled_edges() const;
  /// The attributes a PEP on edge e may read (request attributes if unrestricted).
  std::vector<std::size_t> allowed_attributes(std::size_t e) const;

  /// Checks irreflexivity, reachability from the entry, deadlock-freeness of
  /// the unrestricted graph, and label domains. Throws Error.
  void validate() const;

 private:
  std::shared_ptr<const AttributeSignature> sig_;
  std::vector<Resource> resources_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> out_;
  std::map<std::string, std::size_t> index_;
  std::size_t entry_ = 0;
};

/// Local policies of the controlled edges, keyed by edge index.
class Configuration {
 public:
  Configuration() = default;
  /// Every controlled edge gets `init`.
  static Configuration uniform(const ResourceStructure& s, const Target& init);

  void set(std::size_t edge, Target t) { policies_[edge] = std::move(t); }
  const Target& at(std::size_t edge) const;
  bool contains(std::size_t edge) const { return policies_.count(edge) != 0; }
  const std::map<std::size_t, Target>& policies() const { return policies_; }

  /// Throws unless defined on exactly the controlled edges of s.
  void check_total(const ResourceStructure& s) const;

  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  std::map<std::size_t, Target> policies_;
};

/// The policy guarding edge e: c(e) for controlled edges, the declared policy
/// for fixed ones.
const Target& edge_policy(const ResourceStructure& s, const Configuration& c, std::size_t e);

/// Edge and node masks of S_{c,q}.
struct Restriction {
  std::vector<bool> edge_kept;
  std::vector<bool> node_kept;
};

/// Keeps the given edges, then prunes nodes unreachable from the entry.
Restriction restrict_edges(const ResourceStructure& s, std::vector<bool> edge_kept);
Restriction restrict_mask(const ResourceStructure& s, const Configuration& c,
                          const AccessRequest& q);
/// S_{c,q} as a standalone structure (deadlocked nodes are kept).
ResourceStructure restrict(const ResourceStructure& s, const Configuration& c,
                           const AccessRequest& q);
ResourceStructure apply_restriction(const ResourceStructure& s, const Restriction& m);

enum class Order { LessOrEqual, GreaterOrEqual, Equal, Incomparable };
std::string_view to_string(Order o);
Order compare(const Configuration& c1, const Configuration& c2, const AttributeSignature& sig);

/// `copies` label-preserving duplicates of the non-entry subgraph sharing one
/// entry; ids get the suffix @k.
ResourceStructure scale_replicate(const ResourceStructure& s, std::size_t copies);

}  // namespace spctl
