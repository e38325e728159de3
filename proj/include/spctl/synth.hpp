#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spctl/checker.hpp"
#include "spctl/formula.hpp"
#include "spctl/structure.hpp"
#include "spctl/templates.hpp"

namespace spctl {

enum class DeadlockMode { Auto, On, Off };

struct SynthesisOptions {
  enum class Family { Dnf, Custom };
  Family family = Family::Dnf;
  /// Used when family == Custom (a menu or a singleton).
  std::optional<ConfigurationTemplate> custom;
  std::size_t max_k = 3;
  /// After C_1..C_max_k fail, try the complete template (when it fits the
  /// cap) to tell global unsatisfiability apart from template exhaustion.
  bool try_complete = true;
  std::size_t complete_cap = std::size_t{1} << 10;

  enum class Solver { Builtin, External };
  Solver solver = Solver::Builtin;
  std::string solver_cmd = "z3";
  double timeout_seconds = 60;

  DeadlockMode deadlock_free = DeadlockMode::Auto;
  /// (attribute, value) of the entry resource label; enables deny-by-default.
  std::optional<std::pair<std::string, std::string>> deny_by_default;

  /// Write the SMT-LIB script of the last template tried here.
  std::string emit_smt;
  bool smt_grounded = true;

  /// Models that fail verification are blocked and the solver re-run this
  /// many times before the template is given up on.
  std::size_t max_retries = 64;
};

struct PhaseTimes {
  double encode = 0, ground = 0, solve = 0, verify = 0;
};

struct SynthesisStats {
  std::size_t k = 0;                 // last DNF k tried (0 for other templates)
  std::string template_name;         // "C_2", "menu", "complete", ...
  std::size_t requirements = 0;      // after injection
  std::size_t formula_nodes = 0;     // encoded formula, distinct nodes
  std::size_t ground_nodes = 0;
  std::size_t representatives = 0;
  std::size_t control_vars = 0;
  std::size_t cnf_vars = 0;
  std::size_t cnf_clauses = 0;
  std::size_t retries = 0;           // models rejected by the verifier
  PhaseTimes time;
};

struct SynthesisResult {
  enum class Outcome { Configuration, Unsat, CapExceeded };
  Outcome outcome = Outcome::Unsat;
  std::optional<Configuration> config;
  /// Unsat is global only when proven over a complete template.
  bool global = false;
  std::vector<Requirement> requirements;  // the checked set, with injections
  SynthesisStats stats;
  std::string message;
  std::vector<std::string> warnings;
};

std::string_view to_string(SynthesisResult::Outcome o);

/// `(¬T_1 ∧ … ∧ ¬T_n) ⇒ AX(attr = value)` over the positive requirements.
/// Throws Error for unknown polarities or a mismatching entry label.
Requirement deny_by_default(const ResourceStructure& s, const std::vector<Requirement>& reqs,
                            const std::string& attr, const std::string& value);

/// The requirement list synth actually solves for (injections applied).
std::vector<Requirement> effective_requirements(const ResourceStructure& s,
                                                const std::vector<Requirement>& reqs,
                                                const SynthesisOptions& opt,
                                                std::vector<std::string>* warnings = nullptr);

/// Result of solving one template.
struct TemplateOutcome {
  std::optional<Configuration> config;
  bool exhausted_retries = false;
};

/// Encode, ground, solve, derive and verify against one template.
TemplateOutcome solve_template(const ResourceStructure& s, const std::vector<Requirement>& reqs,
                               const ConfigurationTemplate& tmpl, const SynthesisOptions& opt,
                               SynthesisStats& stats);

SynthesisResult synth(const ResourceStructure& s, const std::vector<Requirement>& reqs,
                      const SynthesisOptions& opt = {});

/// Grows the requirement set one requirement at a time and returns the index
/// of the first one whose addition makes synthesis fail.
std::optional<std::size_t> first_conflict(const ResourceStructure& s,
                                          const std::vector<Requirement>& reqs,
                                          const SynthesisOptions& opt = {});

struct SimulationReport {
  std::vector<bool> granted;    // per edge
  std::vector<bool> reachable;  // per resource
  std::string dot;
};
SimulationReport simulate(const ResourceStructure& s, const Configuration& c,
                          const AccessRequest& q);
std::string to_text(const SimulationReport& r, const ResourceStructure& s);

struct ClassifyReport {
  Polarity declared = Polarity::Unknown;
  Polarity confirmed = Polarity::Unknown;
  std::size_t samples = 0;
  std::size_t upward_violations = 0;    // holds(c) but not holds(c') with c ⊑ c'
  std::size_t downward_violations = 0;  // holds(c') but not holds(c)
  std::string diagnostic;
};

/// Spot-checks the declared polarity on random pairs c ⊑ c' drawn from a
/// small policy lattice built from the requirement's atoms.
ClassifyReport classify(const Requirement& r, const ResourceStructure& s,
                        std::size_t samples = 64, std::uint64_t seed = 1);

}  // namespace spctl
