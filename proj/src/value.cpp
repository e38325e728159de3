#include "spctl/value.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

#include "spctl/error.hpp"

namespace spctl {

std::string Value::to_string() const {
  if (is_bottom()) return "bot";
  if (is_natural()) return std::to_string(as_natural());
  return as_symbol();
}

ValueSet ValueSet::of(const Value& v) {
  ValueSet s;
  s.insert(v);
  return s;
}

ValueSet ValueSet::range(std::uint64_t lo, std::uint64_t hi) {
  ValueSet s;
  s.insert_range(lo, hi);
  return s;
}

void ValueSet::insert(const Value& v) {
  if (v.is_bottom()) {
    bottom_ = true;
  } else if (v.is_natural()) {
    insert_range(v.as_natural(), v.as_natural());
  } else {
    auto it = std::lower_bound(symbols_.begin(), symbols_.end(), v.as_symbol());
    if (it == symbols_.end() || *it != v.as_symbol()) symbols_.insert(it, v.as_symbol());
  }
}

void ValueSet::insert_range(std::uint64_t lo, std::uint64_t hi) {
  if (lo > hi) return;
  ranges_.push_back({lo, hi});
  std::sort(ranges_.begin(), ranges_.end());
  std::vector<Interval> merged;
  for (const auto& r : ranges_) {
    if (!merged.empty() &&
        (merged.back().hi == kInfinity || r.lo <= merged.back().hi + 1)) {
      merged.back().hi = std::max(merged.back().hi, r.hi);
    } else {
      merged.push_back(r);
    }
  }
  ranges_ = std::move(merged);
}

bool ValueSet::contains(const Value& v) const {
  if (v.is_bottom()) return bottom_;
  if (v.is_natural()) {
    const auto n = v.as_natural();
    return std::any_of(ranges_.begin(), ranges_.end(),
                       [n](const Interval& r) { return r.lo <= n && n <= r.hi; });
  }
  return std::binary_search(symbols_.begin(), symbols_.end(), v.as_symbol());
}

std::optional<std::uint64_t> ValueSet::finite_size() const {
  std::uint64_t n = (bottom_ ? 1 : 0) + symbols_.size();
  for (const auto& r : ranges_) {
    if (r.hi == kInfinity) return std::nullopt;
    n += r.hi - r.lo + 1;
  }
  return n;
}

std::optional<Value> ValueSet::singleton() const {
  if (finite_size() != 1) return std::nullopt;
  if (bottom_) return Value(Bottom{});
  if (!symbols_.empty()) return Value::symbol(symbols_.front());
  return Value::natural(ranges_.front().lo);
}

std::string ValueSet::to_string() const {
  std::vector<std::string> items;
  if (bottom_) items.emplace_back("bot");
  for (const auto& r : ranges_) {
    if (r.hi == kInfinity)
      items.push_back(std::to_string(r.lo) + "..");
    else if (r.lo == r.hi)
      items.push_back(std::to_string(r.lo));
    else
      items.push_back(std::to_string(r.lo) + ".." + std::to_string(r.hi));
  }
  for (const auto& s : symbols_) items.push_back(s);
  std::string out = "{";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += items[i];
  }
  return out + "}";
}

ValueSet unite(const ValueSet& a, const ValueSet& b) {
  ValueSet out = a;
  if (b.has_bottom()) out.insert(Value(Bottom{}));
  for (const auto& r : b.ranges()) out.insert_range(r.lo, r.hi);
  for (const auto& s : b.symbols()) out.insert(Value::symbol(s));
  return out;
}

ValueSet intersect(const ValueSet& a, const ValueSet& b) {
  ValueSet out;
  if (a.has_bottom() && b.has_bottom()) out.insert(Value(Bottom{}));
  for (const auto& x : a.ranges())
    for (const auto& y : b.ranges()) {
      const auto lo = std::max(x.lo, y.lo);
      const auto hi = std::min(x.hi, y.hi);
      if (lo <= hi) out.insert_range(lo, hi);
    }
  for (const auto& s : a.symbols())
    if (b.contains(Value::symbol(s))) out.insert(Value::symbol(s));
  return out;
}

ValueSet subtract(const ValueSet& a, const ValueSet& b) {
  ValueSet out;
  if (a.has_bottom() && !b.has_bottom()) out.insert(Value(Bottom{}));
  for (const auto& x : a.ranges()) {
    std::uint64_t lo = x.lo;
    bool done = false;
    for (const auto& y : b.ranges()) {  // sorted, disjoint
      if (y.hi < lo || y.lo > x.hi) continue;
      if (y.lo > lo) out.insert_range(lo, y.lo - 1);
      if (y.hi >= x.hi) {
        done = true;
        break;
      }
      lo = y.hi + 1;
    }
    if (!done) out.insert_range(lo, x.hi);
  }
  for (const auto& s : a.symbols())
    if (!b.contains(Value::symbol(s))) out.insert(Value::symbol(s));
  return out;
}

ValueSet Attribute::domain() const {
  ValueSet d = ValueSet::of(Value(Bottom{}));
  if (kind == AttrKind::Numeric) {
    d.insert_range(0, kInfinity);
  } else {
    for (const auto& s : symbols) d.insert(Value::symbol(s));
  }
  return d;
}

std::string_view to_string(AttrClass c) {
  switch (c) {
    case AttrClass::Subject: return "subject";
    case AttrClass::Contextual: return "contextual";
    case AttrClass::Resource: return "resource";
  }
  return "?";
}

std::string_view to_string(AttrKind k) {
  switch (k) {
    case AttrKind::Boolean: return "boolean";
    case AttrKind::Numeric: return "numeric";
    case AttrKind::Enumerated: return "enumerated";
  }
  return "?";
}

bool Attribute::admits(const Value& v) const {
  if (v.is_bottom()) return true;
  if (kind == AttrKind::Numeric) return v.is_natural();
  if (!v.is_symbol()) return false;
  return std::find(symbols.begin(), symbols.end(), v.as_symbol()) != symbols.end();
}

std::size_t AttributeSignature::add(Attribute a) {
  if (a.name.empty()) throw Error("attribute with empty name");
  if (index_.count(a.name)) throw Error("duplicate attribute '" + a.name + "'");
  if (a.kind == AttrKind::Boolean) a.symbols = {"false", "true"};
  if (a.kind == AttrKind::Numeric) a.symbols.clear();
  if (a.kind == AttrKind::Enumerated) {
    if (a.symbols.empty())
      throw Error("enumerated attribute '" + a.name + "' has an empty domain");
    std::vector<std::string> sorted = a.symbols;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw Error("enumerated attribute '" + a.name + "' repeats a value");
  }
  const std::size_t idx = attrs_.size();
  index_.emplace(a.name, idx);
  attrs_.push_back(std::move(a));

  request_.clear();
  for (auto cls : {AttrClass::Subject, AttrClass::Contextual})
    for (std::size_t i = 0; i < attrs_.size(); ++i)
      if (attrs_[i].cls == cls) request_.push_back(i);
  return idx;
}

std::size_t AttributeSignature::add_boolean(std::string name, AttrClass cls) {
  return add({std::move(name), cls, AttrKind::Boolean, {}});
}

std::size_t AttributeSignature::add_numeric(std::string name, AttrClass cls) {
  return add({std::move(name), cls, AttrKind::Numeric, {}});
}

std::size_t AttributeSignature::add_enumerated(std::string name, AttrClass cls,
                                               std::vector<std::string> symbols) {
  return add({std::move(name), cls, AttrKind::Enumerated, std::move(symbols)});
}

std::optional<std::size_t> AttributeSignature::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t AttributeSignature::index_of(std::string_view name) const {
  auto i = find(name);
  if (!i) throw Error("unknown attribute '" + std::string(name) + "'");
  return *i;
}

std::vector<std::size_t> AttributeSignature::resource_attributes() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < attrs_.size(); ++i)
    if (attrs_[i].cls == AttrClass::Resource) out.push_back(i);
  return out;
}

std::string AccessRequest::to_string(const AttributeSignature& sig) const {
  std::string out = "{";
  bool first = true;
  for (auto i : sig.request_attributes()) {
    if (!first) out += ", ";
    first = false;
    out += sig[i].name + "=" + values_.at(i).to_string();
  }
  return out + "}";
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Value parse_value(std::string_view text, const Attribute& a) {
  text = trim(text);
  if (text == "bot" || text == "\xE2\x8A\xA5") return Value(Bottom{});
  Value v;
  if (a.kind == AttrKind::Numeric) {
    std::uint64_t n = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
    if (ec != std::errc() || ptr != text.data() + text.size())
      throw Error("attribute '" + a.name + "' expects a natural number, got '" +
                  std::string(text) + "'");
    v = Value::natural(n);
  } else {
    v = Value::symbol(std::string(text));
  }
  if (!a.admits(v))
    throw Error("value '" + std::string(text) + "' outside the domain of '" + a.name + "'");
  return v;
}

AccessRequest parse_request(std::string_view text, const AttributeSignature& sig) {
  AccessRequest q(sig);
  std::vector<bool> seen(sig.size(), false);
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto next = text.find(',', pos);
    if (next == std::string_view::npos) next = text.size();
    auto item = trim(text.substr(pos, next - pos));
    pos = next + 1;
    if (item.empty()) {
      if (next == text.size()) break;
      throw Error("malformed request: empty item");
    }
    auto eq = item.find('=');
    if (eq == std::string_view::npos)
      throw Error("malformed request item '" + std::string(item) + "' (expected k=v)");
    auto name = trim(item.substr(0, eq));
    auto attr = sig.find(name);
    if (!attr) throw Error("unknown attribute '" + std::string(name) + "' in request");
    if (!sig[*attr].is_request_attribute())
      throw Error("resource attribute '" + std::string(name) + "' in request");
    if (seen[*attr]) throw Error("attribute '" + std::string(name) + "' set twice");
    seen[*attr] = true;
    q.set(*attr, parse_value(item.substr(eq + 1), sig[*attr]));
  }
  return q;
}

}  // namespace spctl
