#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "spctl/formula.hpp"
#include "spctl/value.hpp"

namespace spctl {

bool eval_target(const AccessRequest& q, const Node& t);
inline bool eval_target(const AccessRequest& q, const Target& t) {
  return eval_target(q, t.node());
}

/// One equivalence class of an attribute's domain.
struct Cell {
  /// Membership in each mentioned set of the attribute, in AttributeCells order.
  std::vector<bool> signature;
  ValueSet members;
  Value representative;
};

struct AttributeCells {
  std::size_t attr = 0;
  std::vector<ValueSet> mentioned;  // distinct sets, sorted
  std::vector<Cell> cells;          // ⊥ cell first

  /// Index of the cell containing v.
  std::size_t cell_of(const Value& v) const;
};

/// The finite abstraction of the request space induced by a set of atoms.
class RegionSet {
 public:
  RegionSet() = default;
  RegionSet(const AttributeSignature& sig, std::vector<AttributeCells> attrs);

  /// Per request attribute, subject first then contextual.
  const std::vector<AttributeCells>& attributes() const { return attrs_; }
  const AttributeCells& cells_for(std::size_t attr) const;

  /// Number of representative requests (product of cell counts).
  std::size_t size() const { return size_; }
  /// The i-th representative; the first request attribute varies slowest.
  AccessRequest representative(std::size_t i) const;
  std::vector<AccessRequest> representatives() const;

 private:
  const AttributeSignature* sig_ = nullptr;
  std::vector<AttributeCells> attrs_;
  std::size_t size_ = 1;
};

/// Throws Error for atoms over resource attributes.
RegionSet build_regions(const AttributeSignature& sig, const std::vector<Atom>& atoms);

/// Request atoms of a list of targets (deduplicated).
std::vector<Atom> target_atoms(const std::vector<Target>& ts);

std::optional<AccessRequest> target_sat(const Target& t, const AttributeSignature& sig);
bool target_equiv(const Target& a, const Target& b, const AttributeSignature& sig);
/// a ⊆ b on every request.
bool target_implies(const Target& a, const Target& b, const AttributeSignature& sig);

/// Contiguous numeric segments cut at every atom boundary of `attr`; starts are
/// ascending, the last segment is unbounded. Always starts at 0.
std::vector<Interval> numeric_segments(std::size_t attr, const std::vector<Atom>& atoms);

}  // namespace spctl
