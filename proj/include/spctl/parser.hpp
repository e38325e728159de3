#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "spctl/formula.hpp"
#include "spctl/value.hpp"

namespace spctl {

// Requirement files: UTF-8, `#` line comments, one requirement per line:
//
//   requirement := [expr] '=>' body [':' ('positive' | 'negative')]
//   body        := pattern | expr
//   pattern     := ('grant' | 'deny') '(' expr ')'
//                | ('waypoint' | 'blocking') '(' expr ',' expr ')'
//   expr        := or ['->' expr]
//   or          := and {'or' and}
//   and         := unary {'and' unary}
//   unary       := ('not' | 'EX' | 'AX' | 'EF' | 'AF' | 'AG' | 'EG') unary
//                | primary
//   primary     := 'true' | 'false' | '(' expr ')'
//                | ('E' | 'A') '[' expr 'U' expr ']' | 'A' '[' expr 'R' expr ']'
//                | atom
//   atom        := id '=' value | id '!=' value | id '<=' nat | id '>=' nat
//                | nat '<=' id '<=' nat | id 'in' '{' [item {',' item}] '}' | id
//   item        := value | nat '..' [nat]
//
// Temporal operators are rejected in targets; targets may only mention
// subject/contextual attributes, constraints only resource attributes.

std::vector<Requirement> parse_requirements(std::string_view text,
                                            const AttributeSignature& sig);
Requirement parse_requirement(std::string_view line, const AttributeSignature& sig);
Target parse_target(std::string_view text, const AttributeSignature& sig);
Constraint parse_constraint(std::string_view text, const AttributeSignature& sig);

enum class ShorthandKind { Eq, Neq, Bare, Le, Ge, Range };

/// A surface comparison before desugaring.
struct Shorthand {
  ShorthandKind kind = ShorthandKind::Eq;
  std::size_t attr = 0;
  Value value;            // Eq / Neq
  std::uint64_t low = 0;  // Ge bound, Range lower bound
  std::uint64_t high = 0; // Le bound, Range upper bound
};

/// Desugars one shorthand atom into the core AST. Throws Error if an ordering
/// shorthand is applied to a non-numeric attribute, a bare attribute is not
/// boolean, or a value lies outside the attribute's domain.
NodePtr desugar_shorthand(const Shorthand& s, const AttributeSignature& sig);

enum class PatternKind { Grant, Deny, Waypoint, Blocking };

/// grant(φ) = E[true U φ]; deny(φ) = ¬E[true U φ];
/// blocking(φ,ψ) = ¬E[true U (φ ∧ E[true U ψ])];
/// waypoint(φ,ψ) = ¬E[¬φ U (ψ ∧ ¬φ)].
/// Throws Error on arity mismatch.
Constraint desugar_pattern(PatternKind kind, const std::vector<Constraint>& args);
Polarity pattern_polarity(PatternKind kind);

/// The polarity assigned to a raw (non-pattern) constraint: deadlock-freeness
/// and `AX atom` are negative; everything else unknown.
Polarity syntactic_polarity(const Constraint& c);

// Canonical printing. Sugar is only emitted when it re-parses to the identical
// core tree.
std::string to_string(const Target& t, const AttributeSignature& sig);
std::string to_string(const Constraint& c, const AttributeSignature& sig);
std::string to_string(const Requirement& r, const AttributeSignature& sig);

}  // namespace spctl
