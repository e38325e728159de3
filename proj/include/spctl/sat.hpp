#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "spctl/control_formula.hpp"
#include "spctl/templates.hpp"

namespace spctl {

/// A literal is 2*var + (negated ? 1 : 0).
using Lit = std::uint32_t;
inline Lit make_lit(std::uint32_t var, bool negated = false) { return 2 * var + (negated ? 1 : 0); }
inline Lit neg(Lit l) { return l ^ 1u; }
inline std::uint32_t lit_var(Lit l) { return l >> 1; }
inline bool lit_negated(Lit l) { return l & 1u; }

/// CDCL solver: two watched literals, first-UIP learning, VSIDS with ties
/// broken towards lower variable indices, Luby restarts, phase saving with an
/// initial phase of false. Fully deterministic.
class SatSolver {
 public:
  std::uint32_t new_var();
  std::uint32_t num_vars() const { return static_cast<std::uint32_t>(assign_.size()); }
  /// Returns false if the clause set became trivially unsatisfiable.
  bool add_clause(std::vector<Lit> lits);
  /// Satisfying assignment over all variables, or nullopt if UNSAT.
  std::optional<std::vector<bool>> solve();

  struct Stats {
    std::uint64_t decisions = 0;
    std::uint64_t conflicts = 0;
    std::uint64_t propagations = 0;
    std::uint64_t restarts = 0;
  };
  const Stats& stats() const { return stats_; }

 private:
  static constexpr std::int8_t kFalse = 0, kTrue = 1, kUndef = 2;

  std::int8_t value(Lit l) const {
    const auto a = assign_[lit_var(l)];
    return a == kUndef ? kUndef : static_cast<std::int8_t>(a ^ static_cast<std::int8_t>(lit_negated(l)));
  }
  void enqueue(Lit l, std::int32_t reason);
  std::int32_t propagate();
  void analyze(std::int32_t confl, std::vector<Lit>& learnt, std::uint32_t& bt_level);
  void backtrack(std::uint32_t level);
  std::int32_t attach(std::vector<Lit> lits);
  void bump(std::uint32_t v);
  void decay() { inc_ *= 1.0 / 0.95; }
  // heap
  bool before(std::uint32_t a, std::uint32_t b) const {
    return activity_[a] > activity_[b] || (activity_[a] == activity_[b] && a < b);
  }
  void heap_insert(std::uint32_t v);
  void heap_up(std::size_t i);
  void heap_down(std::size_t i);
  std::optional<std::uint32_t> heap_pop();
  std::uint32_t level() const { return static_cast<std::uint32_t>(trail_lim_.size()); }

  std::vector<std::vector<Lit>> clauses_;
  std::vector<std::vector<std::int32_t>> watches_;  // per literal: clause ids watching ¬lit
  std::vector<std::int8_t> assign_;
  std::vector<std::uint32_t> level_;
  std::vector<std::int32_t> reason_;
  std::vector<bool> phase_;
  std::vector<double> activity_;
  std::vector<std::int32_t> heap_pos_;
  std::vector<std::uint32_t> heap_;
  std::vector<Lit> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;
  double inc_ = 1.0;
  bool unsat_ = false;
  std::vector<bool> seen_;
  Stats stats_;
};

/// Solves control-only formulas over a template's variables. Each control
/// variable is log-encoded with ⌈log2 domain⌉ bits; gate definitions are
/// added per formula node. Supports blocking found models and re-solving.
class ControlSolver {
 public:
  explicit ControlSolver(const ConfigurationTemplate& tmpl);
  /// Asserts a control-only formula.
  void add(const CfStore& st, CfId phi);
  std::optional<ControlAssignment> solve();
  /// Excludes exactly this assignment.
  void block(const ControlAssignment& m);

  std::size_t cnf_vars() const { return solver_.num_vars(); }
  std::size_t cnf_clauses() const { return clause_count_; }
  const SatSolver::Stats& stats() const { return solver_.stats(); }

 private:
  Lit literal_of(const CfStore& st, CfId x);
  Lit eq_literal(std::uint32_t var, std::uint32_t value);
  void clause(std::vector<Lit> lits);

  const ConfigurationTemplate& tmpl_;
  SatSolver solver_;
  std::vector<std::vector<std::uint32_t>> bits_;  // per control var
  std::uint32_t true_var_ = 0;
  std::unordered_map<CfId, Lit> gate_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, Lit> eq_;
  const CfStore* store_ = nullptr;
  std::size_t clause_count_ = 0;
};

/// One-shot convenience wrapper.
std::optional<ControlAssignment> sat_solve(const CfStore& st, CfId phi,
                                           const ConfigurationTemplate& tmpl);

}  // namespace spctl
