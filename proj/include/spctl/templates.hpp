#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "spctl/control_formula.hpp"
#include "spctl/formula.hpp"
#include "spctl/structure.hpp"

namespace spctl {

inline constexpr std::uint32_t kNoVar = std::numeric_limits<std::uint32_t>::max();

/// A finite-domain control variable ranging over 0..domain-1.
struct ControlVar {
  std::string name;
  std::uint32_t domain = 2;
};

/// Values of the template's control variables, indexed by variable id.
using ControlAssignment = std::vector<std::uint32_t>;

struct DnfTerm {
  std::uint32_t enable = kNoVar;
  std::uint32_t attr = kNoVar;  // selector over EdgeTemplate::attrs
  std::uint32_t op = kNoVar;    // 0: =, 1: !=
  std::uint32_t value = kNoVar;  // symbols in declaration order, then ⊥
  std::uint32_t lo = kNoVar;    // index into the attribute's lower candidates
  std::uint32_t hi = kNoVar;    // index into the attribute's upper candidates
};

struct DnfClause {
  std::uint32_t enable = kNoVar;
  std::vector<DnfTerm> terms;
};

/// Interval endpoints a numeric term may use; upper may contain kInfinity.
struct NumericCandidates {
  std::vector<std::uint64_t> lower;
  std::vector<std::uint64_t> upper;
};

enum class TemplateKind { Menu, Dnf, Guard };

struct EdgeTemplate {
  std::vector<Target> menu;         // Menu
  std::uint32_t selector = kNoVar;  // Menu
  std::vector<std::size_t> attrs;   // Dnf
  std::vector<DnfClause> clauses;   // Dnf
  std::uint32_t guard = kNoVar;     // Guard
};

/// A symbolic set of configurations indexed by control variables.
class ConfigurationTemplate {
 public:
  TemplateKind kind = TemplateKind::Menu;
  std::size_t k = 0;  // Dnf only
  std::vector<ControlVar> vars;
  std::map<std::size_t, EdgeTemplate> edges;
  std::map<std::size_t, NumericCandidates> numeric;  // Dnf only

  /// ControlEq for a declared variable; a missing (single-valued) variable is 0.
  CfId eq(CfStore& st, std::uint32_t var, std::uint32_t value) const;
  /// C(e): the symbolic policy of controlled edge e over Atoms and ControlEqs.
  CfId policy(CfStore& st, const AttributeSignature& sig, std::size_t edge) const;
  /// Constraints ruling out selector values that name nothing.
  CfId wellformed(CfStore& st, const AttributeSignature& sig) const;
  /// Every request atom a symbolic policy may mention.
  std::vector<Atom> atoms(const AttributeSignature& sig) const;

  /// Throws Error if m is not total or a value is out of range.
  Configuration derive(const ControlAssignment& m, const AttributeSignature& sig) const;

  std::uint32_t add_var(std::string name, std::uint32_t domain);
  std::size_t bit_count() const;
};

ConfigurationTemplate menu_template(const ResourceStructure& s,
                                    const std::map<std::size_t, std::vector<Target>>& menus);
ConfigurationTemplate singleton(const ResourceStructure& s, const Configuration& c);
/// One free Boolean per controlled edge; C(e) is that Boolean.
ConfigurationTemplate guard_template(const ResourceStructure& s);
/// C_k over the edges' allowed attributes. Numeric endpoints are the starts and
/// ends of the cells cut by the requirement targets.
ConfigurationTemplate dnf_template(const ResourceStructure& s, std::size_t k,
                                   const std::vector<Requirement>& reqs);
NumericCandidates numeric_candidates(std::size_t attr, const std::vector<Requirement>& reqs);

/// Constant folding, duplicate removal, same-attribute atom merging,
/// contradiction and absorption. Verdict-preserving (asserted).
Target simplify_policy(const Target& t, const AttributeSignature& sig);
Configuration simplify(const Configuration& c, const AttributeSignature& sig);

}  // namespace spctl
