#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "spctl/formula.hpp"
#include "spctl/structure.hpp"
#include "spctl/templates.hpp"

namespace spctl {

/// Edge subset controller synthesis. Returns a kept-edge mask E' with
/// (R, E', r_e, L) ⊨ φ, or nullopt. Fixed edges are always kept. Controlled
/// subsets are tried by descending size, lexicographically within a size.
std::optional<std::vector<bool>> cs(const ResourceStructure& s, const Constraint& phi);

struct ClassicStats {
  std::size_t iterations = 0;      // subsets R' visited (always 2^|R|)
  std::size_t satisfiable = 0;     // subsets whose target was satisfiable
  std::size_t cs_calls = 0;
};

struct ClassicResult {
  std::optional<Configuration> config;  // simplified
  std::optional<Configuration> raw;     // accumulated c(e) ∧ ¬T form
  ClassicStats stats;
};

/// The subset target T_{R'} = ∧ targets(R') ∧ ∧ ¬targets(R \ R'), with R'
/// given as a bit mask over reqs.
Target subset_target(const std::vector<Requirement>& reqs, std::uint64_t mask);

/// Reference synthesis by controller synthesis. Requires every fixed edge to
/// grant all requests. A returned configuration has passed holds.
ClassicResult s_cs(const ResourceStructure& s, const std::vector<Requirement>& reqs);

/// Menu template containing every configuration s_cs can output: per
/// controlled edge, the conjunctions of ¬T_{R'} over sets of satisfiable
/// subset targets. Throws CapError when the menu would exceed `cap` entries.
ConfigurationTemplate build_complete_template(const ResourceStructure& s,
                                              const std::vector<Requirement>& reqs,
                                              std::size_t cap = std::size_t{1} << 16);

}  // namespace spctl
