#include "spctl/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "spctl/error.hpp"
#include "spctl/parser.hpp"
#include "spctl/regions.hpp"

namespace spctl {

using ojson = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

ojson parse_json(const std::string& text, const char* what) {
  try {
    return ojson::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed ") + what + " JSON: " + e.what());
  }
}

Attribute parse_attribute(const std::string& name, AttrClass cls, const ojson& j) {
  Attribute a{name, cls, AttrKind::Boolean, {}};
  if (j.is_string()) {
    const auto k = j.get<std::string>();
    if (k == "boolean" || k == "bool") {
      a.kind = AttrKind::Boolean;
    } else if (k == "numeric" || k == "nat") {
      a.kind = AttrKind::Numeric;
    } else {
      throw Error("attribute '" + name + "': unknown kind '" + k + "'");
    }
  } else if (j.is_array()) {
    a.kind = AttrKind::Enumerated;
    for (const auto& v : j) {
      if (!v.is_string()) throw Error("attribute '" + name + "': enum values must be strings");
      a.symbols.push_back(v.get<std::string>());
    }
  } else {
    throw Error("attribute '" + name + "': expected a kind string or a value list");
  }
  return a;
}

Value json_value(const ojson& j, const Attribute& a) {
  if (j.is_null()) return Value(Bottom{});
  if (j.is_boolean()) return parse_value(j.get<bool>() ? "true" : "false", a);
  if (j.is_number_unsigned() || j.is_number_integer()) {
    if (j.is_number_integer() && j.get<long long>() < 0)
      throw Error("negative value for '" + a.name + "'");
    return parse_value(std::to_string(j.get<unsigned long long>()), a);
  }
  if (j.is_string()) return parse_value(j.get<std::string>(), a);
  throw Error("unsupported label value for '" + a.name + "'");
}

ojson value_json(const Value& v, const Attribute& a) {
  if (v.is_bottom()) return nullptr;
  if (v.is_natural()) return v.as_natural();
  if (a.kind == AttrKind::Boolean) return v.as_symbol() == "true";
  return v.as_symbol();
}

}  // namespace

ResourceStructure load_model(const std::string& json_text) {
  const ojson j = parse_json(json_text, "model");
  if (!j.is_object()) throw Error("model must be a JSON object");
  auto sig = std::make_shared<AttributeSignature>();
  if (j.contains("attributes")) {
    const auto& attrs = j.at("attributes");
    for (const auto& [cls_name, cls] :
         {std::pair{"subject", AttrClass::Subject}, std::pair{"contextual", AttrClass::Contextual},
          std::pair{"resource", AttrClass::Resource}}) {
      if (!attrs.contains(cls_name)) continue;
      for (const auto& [name, spec] : attrs.at(cls_name).items())
        sig->add(parse_attribute(name, cls, spec));
    }
    for (const auto& [k, v] : attrs.items())
      if (k != "subject" && k != "contextual" && k != "resource")
        throw Error("unknown attribute class '" + k + "'");
  }
  ResourceStructure s(sig);
  if (!j.contains("resources") || !j.at("resources").is_array())
    throw Error("model needs a \"resources\" array");
  for (const auto& r : j.at("resources")) {
    const auto id = r.at("id").get<std::string>();
    const auto idx = s.add_resource(id);
    if (!r.contains("labels")) continue;
    for (const auto& [name, v] : r.at("labels").items()) {
      const auto a = sig->index_of(name);
      s.set_label(idx, a, json_value(v, (*sig)[a]));
    }
  }
  if (!j.contains("entry")) throw Error("model needs an \"entry\"");
  s.set_entry(s.resource_index(j.at("entry").get<std::string>()));
  if (j.contains("edges")) {
    for (const auto& e : j.at("edges")) {
      const auto from = s.resource_index(e.at("from").get<std::string>());
      const auto to = s.resource_index(e.at("to").get<std::string>());
      bool controlled = true;
      Target fixed = Target::truth();
      if (e.contains("mode")) {
        const auto& m = e.at("mode");
        if (m.is_string() && m.get<std::string>() == "controlled") {
          controlled = true;
        } else if (m.is_string() && m.get<std::string>() == "fixed") {
          controlled = false;
        } else if (m.is_object() && m.contains("fixed")) {
          controlled = false;
          fixed = parse_target(m.at("fixed").get<std::string>(), *sig);
        } else {
          throw Error("edge mode must be \"controlled\" or {\"fixed\": policy}");
        }
      }
      const auto idx = s.add_edge(from, to, controlled, fixed);
      if (e.contains("attributes")) {
        std::vector<std::size_t> allowed;
        for (const auto& n : e.at("attributes")) allowed.push_back(sig->index_of(n.get<std::string>()));
        s.set_allowed(idx, allowed);
      }
    }
  }
  s.validate();
  return s;
}

ResourceStructure load_model_file(const std::string& path) { return load_model(read_file(path)); }

std::string model_to_json(const ResourceStructure& s) {
  const auto& sig = s.sig();
  ojson j;
  ojson attrs = ojson::object();
  for (const auto& [cls_name, cls] :
       {std::pair{"subject", AttrClass::Subject}, std::pair{"contextual", AttrClass::Contextual},
        std::pair{"resource", AttrClass::Resource}}) {
    ojson group = ojson::object();
    for (std::size_t i = 0; i < sig.size(); ++i) {
      const Attribute& a = sig[i];
      if (a.cls != cls) continue;
      if (a.kind == AttrKind::Boolean)
        group[a.name] = "boolean";
      else if (a.kind == AttrKind::Numeric)
        group[a.name] = "numeric";
      else
        group[a.name] = a.symbols;
    }
    attrs[cls_name] = group;
  }
  j["attributes"] = attrs;
  j["entry"] = s.resource(s.entry()).id;
  ojson res = ojson::array();
  for (const auto& r : s.resources()) {
    ojson labels = ojson::object();
    for (auto a : sig.resource_attributes())
      if (!r.labels[a].is_bottom()) labels[sig[a].name] = value_json(r.labels[a], sig[a]);
    res.push_back({{"id", r.id}, {"labels", labels}});
  }
  j["resources"] = res;
  ojson edges = ojson::array();
  for (const auto& e : s.edges()) {
    ojson je = {{"from", s.resource(e.from).id}, {"to", s.resource(e.to).id}};
    if (e.controlled)
      je["mode"] = "controlled";
    else
      je["mode"] = {{"fixed", to_string(e.fixed_policy, sig)}};
    if (e.allowed) {
      ojson names = ojson::array();
      for (auto a : *e.allowed) names.push_back(sig[a].name);
      je["attributes"] = names;
    }
    edges.push_back(je);
  }
  j["edges"] = edges;
  return j.dump(2) + "\n";
}

Configuration load_configuration(const std::string& json_text, const ResourceStructure& s) {
  const ojson j = parse_json(json_text, "configuration");
  if (!j.is_object()) throw Error("configuration must be a JSON object");
  std::optional<Target> dflt;
  Configuration c;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_string()) throw Error("policy for '" + k + "' must be a string");
    Target t = parse_target(v.get<std::string>(), s.sig());
    if (k == "*") {
      dflt = t;
      continue;
    }
    const auto e = s.edge_by_name(k);
    if (!s.edge(e).controlled) throw Error("edge '" + k + "' is fixed and takes no policy");
    c.set(e, t);
  }
  for (auto e : s.controlled_edges()) {
    if (c.contains(e)) continue;
    if (!dflt) throw Error("configuration misses edge " + s.edge_name(e));
    c.set(e, *dflt);
  }
  return c;
}

Configuration load_configuration_file(const std::string& path, const ResourceStructure& s) {
  return load_configuration(read_file(path), s);
}

std::string configuration_to_json(const Configuration& c, const ResourceStructure& s) {
  ojson j = ojson::object();
  for (const auto& [e, t] : c.policies()) j[s.edge_name(e)] = to_string(t, s.sig());
  return j.dump(2) + "\n";
}

std::map<std::size_t, std::vector<Target>> load_menu(const std::string& json_text,
                                                     const ResourceStructure& s) {
  const ojson j = parse_json(json_text, "menu");
  if (!j.is_object()) throw Error("menu must be a JSON object");
  auto list = [&](const std::string& key, const ojson& v) {
    if (!v.is_array() || v.empty()) throw Error("menu entry '" + key + "' must be a non-empty list");
    std::vector<Target> out;
    for (const auto& p : v) out.push_back(parse_target(p.get<std::string>(), s.sig()));
    return out;
  };
  std::optional<std::vector<Target>> dflt;
  std::map<std::size_t, std::vector<Target>> out;
  for (const auto& [k, v] : j.items()) {
    if (k == "*") {
      dflt = list(k, v);
      continue;
    }
    const auto e = s.edge_by_name(k);
    if (!s.edge(e).controlled) throw Error("edge '" + k + "' is fixed");
    out[e] = list(k, v);
  }
  for (auto e : s.controlled_edges()) {
    if (out.count(e)) continue;
    if (!dflt) throw Error("menu misses edge " + s.edge_name(e));
    out[e] = *dflt;
  }
  return out;
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out;
}

}  // namespace

std::string to_dot(const ResourceStructure& s, const DotOptions& opt) {
  std::optional<Restriction> m;
  if (opt.config && opt.request) m = restrict_mask(s, *opt.config, *opt.request);
  std::ostringstream out;
  out << "digraph S {\n  rankdir=LR;\n";
  for (std::size_t r = 0; r < s.resources().size(); ++r) {
    const auto& res = s.resource(r);
    out << "  n" << r << " [label=\"" << dot_escape(res.id) << "\"";
    if (r == s.entry()) out << ", shape=doublecircle";
    if (m && !m->node_kept[r]) out << ", style=dashed, color=gray, fontcolor=gray";
    out << "];\n";
  }
  for (std::size_t e = 0; e < s.edges().size(); ++e) {
    const auto& ed = s.edge(e);
    out << "  n" << ed.from << " -> n" << ed.to << " [";
    std::vector<std::string> attrs;
    if (!ed.controlled) attrs.push_back("style=dashed");
    const Target* policy = nullptr;
    if (!ed.controlled && ed.fixed_policy.op() != Op::True) policy = &ed.fixed_policy;
    if (ed.controlled && opt.config && opt.config->contains(e)) policy = &opt.config->at(e);
    if (policy) attrs.push_back("label=\"" + dot_escape(to_string(*policy, s.sig())) + "\"");
    if (m && !m->edge_kept[e]) attrs.push_back("color=red, fontcolor=red");
    for (std::size_t i = 0; i < attrs.size(); ++i) out << (i ? ", " : "") << attrs[i];
    out << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace spctl
