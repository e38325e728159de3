#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace spctl {

/// The designated "unknown" value contained in every attribute domain.
struct Bottom {
  friend constexpr auto operator<=>(Bottom, Bottom) = default;
};

/// An attribute value: ⊥, a natural number, or a symbol. Booleans are the
/// symbols "false" and "true".
class Value {
 public:
  Value() = default;
  Value(Bottom) {}
  static Value natural(std::uint64_t n) { return Value(n); }
  static Value symbol(std::string s) { return Value(std::move(s)); }
  static Value boolean(bool b) { return Value(std::string(b ? "true" : "false")); }

  bool is_bottom() const { return std::holds_alternative<Bottom>(v_); }
  bool is_natural() const { return std::holds_alternative<std::uint64_t>(v_); }
  bool is_symbol() const { return std::holds_alternative<std::string>(v_); }

  std::uint64_t as_natural() const { return std::get<std::uint64_t>(v_); }
  const std::string& as_symbol() const { return std::get<std::string>(v_); }

  std::string to_string() const;

  friend bool operator==(const Value&, const Value&) = default;
  friend auto operator<=>(const Value& a, const Value& b) { return a.v_ <=> b.v_; }

 private:
  explicit Value(std::uint64_t n) : v_(n) {}
  explicit Value(std::string s) : v_(std::move(s)) {}
  std::variant<Bottom, std::uint64_t, std::string> v_;
};

inline constexpr std::uint64_t kInfinity = std::numeric_limits<std::uint64_t>::max();

/// Closed natural-number interval; hi == kInfinity means unbounded.
struct Interval {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  friend bool operator==(const Interval&, const Interval&) = default;
  friend auto operator<=>(const Interval&, const Interval&) = default;
};

/// A finite description of a set of values D in an atom `a ∈ D`. Numeric
/// members are kept as normalized (sorted, disjoint, non-adjacent) intervals.
class ValueSet {
 public:
  ValueSet() = default;

  static ValueSet of(const Value& v);
  static ValueSet range(std::uint64_t lo, std::uint64_t hi);

  void insert(const Value& v);
  void insert_range(std::uint64_t lo, std::uint64_t hi);

  bool contains(const Value& v) const;
  bool empty() const { return !bottom_ && ranges_.empty() && symbols_.empty(); }
  bool has_bottom() const { return bottom_; }
  const std::vector<Interval>& ranges() const { return ranges_; }
  const std::vector<std::string>& symbols() const { return symbols_; }

  /// Number of elements, or nullopt when an unbounded range is present.
  std::optional<std::uint64_t> finite_size() const;
  /// The single element, when the set has exactly one.
  std::optional<Value> singleton() const;

  std::string to_string() const;

  friend bool operator==(const ValueSet&, const ValueSet&) = default;
  friend auto operator<=>(const ValueSet&, const ValueSet&) = default;

 private:
  bool bottom_ = false;
  std::vector<Interval> ranges_;
  std::vector<std::string> symbols_;
};

ValueSet unite(const ValueSet& a, const ValueSet& b);
ValueSet intersect(const ValueSet& a, const ValueSet& b);
ValueSet subtract(const ValueSet& a, const ValueSet& b);

enum class AttrClass { Subject, Contextual, Resource };
enum class AttrKind { Boolean, Numeric, Enumerated };

std::string_view to_string(AttrClass c);
std::string_view to_string(AttrKind k);

struct Attribute {
  std::string name;
  AttrClass cls = AttrClass::Subject;
  AttrKind kind = AttrKind::Boolean;
  /// Declared symbols, in declaration order (enumerated: the declared domain;
  /// boolean: "false", "true"; numeric: empty). ⊥ is implicit.
  std::vector<std::string> symbols;

  bool is_request_attribute() const { return cls != AttrClass::Resource; }
  bool admits(const Value& v) const;
  /// dom(a) including ⊥.
  ValueSet domain() const;
};

class AttributeSignature {
 public:
  /// Throws Error on duplicate names or empty enumerated domains.
  std::size_t add(Attribute a);
  std::size_t add_boolean(std::string name, AttrClass cls);
  std::size_t add_numeric(std::string name, AttrClass cls);
  std::size_t add_enumerated(std::string name, AttrClass cls,
                             std::vector<std::string> symbols);

  std::size_t size() const { return attrs_.size(); }
  const Attribute& operator[](std::size_t i) const { return attrs_[i]; }
  std::optional<std::size_t> find(std::string_view name) const;
  std::size_t index_of(std::string_view name) const;

  /// Subject and contextual attributes, subject first, each in declaration
  /// order.
  const std::vector<std::size_t>& request_attributes() const { return request_; }
  std::vector<std::size_t> resource_attributes() const;

 private:
  std::vector<Attribute> attrs_;
  std::vector<std::size_t> request_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// q: a total map from subject/contextual attributes to values. Stored over the
/// whole signature; resource slots stay ⊥ and are never consulted.
class AccessRequest {
 public:
  AccessRequest() = default;
  explicit AccessRequest(const AttributeSignature& sig) : values_(sig.size()) {}

  const Value& operator[](std::size_t attr) const { return values_.at(attr); }
  void set(std::size_t attr, Value v) { values_.at(attr) = std::move(v); }
  std::size_t size() const { return values_.size(); }

  std::string to_string(const AttributeSignature& sig) const;

  friend bool operator==(const AccessRequest&, const AccessRequest&) = default;

 private:
  std::vector<Value> values_;
};

/// Parses "k=v,k2=v2"; unset request attributes are ⊥. Values are checked
/// against the attribute's domain.
AccessRequest parse_request(std::string_view text, const AttributeSignature& sig);

/// Parses one value token for attribute `a` ("bot"/"⊥", a number, a symbol).
Value parse_value(std::string_view text, const Attribute& a);

}  // namespace spctl
