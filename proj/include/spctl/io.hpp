#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spctl/formula.hpp"
#include "spctl/structure.hpp"

namespace spctl {

// Model file:
//   {"attributes": {"subject": {"role": ["visitor", "employee"], "pin": "boolean"},
//                   "contextual": {"time": "numeric"},
//                   "resource": {"id": ["out", "cor"], "sec_zone": "boolean"}},
//    "entry": "out",
//    "resources": [{"id": "out", "labels": {"id": "out"}}, ...],
//    "edges": [{"from": "out", "to": "cor", "mode": "controlled",
//               "attributes": ["role", "pin"]},
//              {"from": "cor", "to": "out", "mode": {"fixed": "true"}}, ...]}
// Missing labels are ⊥. "attributes" on an edge restricts what its PEP may read.

ResourceStructure load_model(const std::string& json_text);
ResourceStructure load_model_file(const std::string& path);
std::string model_to_json(const ResourceStructure& s);

/// {"from->to": "<policy>", ...}; the key "*" supplies a default.
Configuration load_configuration(const std::string& json_text, const ResourceStructure& s);
Configuration load_configuration_file(const std::string& path, const ResourceStructure& s);
std::string configuration_to_json(const Configuration& c, const ResourceStructure& s);

/// Per-edge candidate policy lists: {"from->to": ["true", "role = employee"], "*": [...]}.
std::map<std::size_t, std::vector<Target>> load_menu(const std::string& json_text,
                                                     const ResourceStructure& s);

struct DotOptions {
  const Configuration* config = nullptr;
  /// When set, denied edges and pruned nodes of S_{c,q} are drawn greyed out.
  const AccessRequest* request = nullptr;
};
std::string to_dot(const ResourceStructure& s, const DotOptions& opt = {});

std::string read_file(const std::string& path);

}  // namespace spctl
