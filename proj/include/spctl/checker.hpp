#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "spctl/formula.hpp"
#include "spctl/structure.hpp"

namespace spctl {

/// Satisfaction set of φ over the live part of S (maximal-path semantics).
/// Nodes outside the restriction are reported false.
std::vector<bool> label(const ResourceStructure& s, const Restriction& m, const Constraint& phi);

bool check_at(const ResourceStructure& s, const Restriction& m, std::size_t r0,
              const Constraint& phi);
bool check_at(const ResourceStructure& s, std::size_t r0, const Constraint& phi);
/// S, r_e ⊨ φ over all edges.
bool model_check(const ResourceStructure& s, const Constraint& phi);
bool model_check(const ResourceStructure& s, const Restriction& m, const Constraint& phi);

struct RequirementVerdict {
  bool ok = true;
  /// A representative request violating the requirement.
  std::optional<AccessRequest> witness;
};

struct HoldsResult {
  bool ok = true;
  std::vector<RequirementVerdict> verdicts;  // one per requirement
  std::size_t representatives = 0;
  /// First failure, if any.
  std::optional<std::size_t> failed_requirement;
  std::optional<AccessRequest> witness;
};

/// S, c ⊩ R, decided over region representatives of all target and policy atoms.
HoldsResult holds(const ResourceStructure& s, const Configuration& c,
                  const std::vector<Requirement>& reqs);

}  // namespace spctl
