#pragma once

#include <optional>
#include <string>

#include "spctl/control_formula.hpp"
#include "spctl/structure.hpp"
#include "spctl/templates.hpp"

namespace spctl {

/// SMT-LIB v2 script for ∃z. φ (grounded: φ control-only, quantifier free) or
/// ∃z. ∀a. φ (ungrounded: φ may mention Atoms and EdgeGuards, which are
/// expanded to the template's symbolic policies). Enumerated and boolean
/// attributes become datatypes with an explicit bottom constructor; numeric
/// attributes become a (defined flag, value) pair. Ends with (check-sat) and
/// (get-value ...) over all control variables.
std::string emit_smtlib(CfStore& st, CfId phi, const ConfigurationTemplate& tmpl,
                        const ResourceStructure& s, bool grounded);

struct ExternalResult {
  enum class Status { Sat, Unsat, Unknown, Error };
  Status status = Status::Error;
  std::optional<ControlAssignment> model;
  std::string message;
};

/// Runs `<command> <scriptfile>` with a timeout and parses the verdict and the
/// control-variable values (`unknown` is reported as its own status).
ExternalResult run_external(const std::string& script, const std::string& command,
                            std::size_t num_vars, double timeout_seconds);

/// Parses solver output; exposed for tests.
ExternalResult parse_solver_output(const std::string& out, std::size_t num_vars);

}  // namespace spctl
