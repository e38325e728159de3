#pragma once

#include <cstddef>
#include <unordered_map>
#include <vector>

#include "spctl/control_formula.hpp"
#include "spctl/formula.hpp"
#include "spctl/structure.hpp"
#include "spctl/templates.hpp"

namespace spctl {

/// The τ / τ_U rewrite system. Output mentions EdgeGuard(e) for every edge,
/// fixed or controlled; guards are resolved by grounding or evaluation.
class Encoder {
 public:
  Encoder(const ResourceStructure& s, CfStore& st);

  /// T ⇒ τ(φ, r_e)
  CfId encode(const Requirement& r);
  CfId tau(const Constraint& phi, std::size_t r0);

  struct Stats {
    std::size_t tau_u_calls = 0;
    std::size_t max_visited = 0;
  };
  const Stats& stats() const { return stats_; }

 private:
  CfId tau(const NodePtr& phi, std::size_t r0);
  CfId tau_u(const Node& phi, std::size_t r, std::vector<bool>& visited, std::size_t depth);

  struct Key {
    const Node* n;
    std::size_t r;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return std::hash<const void*>()(k.n) * 31 + k.r;
    }
  };

  const ResourceStructure& s_;
  CfStore& st_;
  std::unordered_map<Key, CfId, KeyHash> memo_;
  Stats stats_;
};

CfId encode(const ResourceStructure& s, const Requirement& r, CfStore& st);

struct GroundStats {
  std::size_t representatives = 0;
};

/// ∀ over request attributes eliminated by conjoining φ instantiated at every
/// region representative; the result mentions only ControlEq nodes.
CfId ground_forall(CfStore& st, CfId phi, const ResourceStructure& s,
                   const ConfigurationTemplate& tmpl, GroundStats* stats = nullptr);

/// Evaluates φ under request q with EdgeGuards read from a concrete
/// configuration and ControlEqs from m.
bool eval_formula(const CfStore& st, CfId phi, const AccessRequest& q, const ControlAssignment& m,
                  const Configuration& c, const ResourceStructure& s);
/// Same, with the configuration derived from (template, m).
bool eval_formula(const CfStore& st, CfId phi, const AccessRequest& q, const ControlAssignment& m,
                  const ConfigurationTemplate& tmpl, const ResourceStructure& s);
/// Evaluates a control-only formula.
bool eval_control(const CfStore& st, CfId phi, const ControlAssignment& m);

}  // namespace spctl
