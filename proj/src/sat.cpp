#include "spctl/sat.hpp"

#include <algorithm>
#include <bit>

#include "spctl/error.hpp"

namespace spctl {

namespace {

double luby(double y, std::uint64_t x) {
  std::uint64_t size = 1, seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  double r = 1;
  for (std::uint64_t i = 0; i < seq; ++i) r *= y;
  return r;
}

}  // namespace

std::uint32_t SatSolver::new_var() {
  const auto v = static_cast<std::uint32_t>(assign_.size());
  assign_.push_back(kUndef);
  level_.push_back(0);
  reason_.push_back(-1);
  phase_.push_back(false);
  activity_.push_back(0.0);
  heap_pos_.push_back(-1);
  seen_.push_back(false);
  watches_.emplace_back();
  watches_.emplace_back();
  heap_insert(v);
  return v;
}

void SatSolver::heap_insert(std::uint32_t v) {
  if (heap_pos_[v] >= 0) return;
  heap_pos_[v] = static_cast<std::int32_t>(heap_.size());
  heap_.push_back(v);
  heap_up(heap_.size() - 1);
}

void SatSolver::heap_up(std::size_t i) {
  const auto v = heap_[i];
  while (i > 0) {
    const auto parent = (i - 1) / 2;
    if (!before(v, heap_[parent])) break;
    heap_[i] = heap_[parent];
    heap_pos_[heap_[i]] = static_cast<std::int32_t>(i);
    i = parent;
  }
  heap_[i] = v;
  heap_pos_[v] = static_cast<std::int32_t>(i);
}

void SatSolver::heap_down(std::size_t i) {
  const auto v = heap_[i];
  for (;;) {
    std::size_t child = 2 * i + 1;
    if (child >= heap_.size()) break;
    if (child + 1 < heap_.size() && before(heap_[child + 1], heap_[child])) ++child;
    if (!before(heap_[child], v)) break;
    heap_[i] = heap_[child];
    heap_pos_[heap_[i]] = static_cast<std::int32_t>(i);
    i = child;
  }
  heap_[i] = v;
  heap_pos_[v] = static_cast<std::int32_t>(i);
}

std::optional<std::uint32_t> SatSolver::heap_pop() {
  if (heap_.empty()) return std::nullopt;
  const auto top = heap_[0];
  heap_pos_[top] = -1;
  const auto last = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_[0] = last;
    heap_pos_[last] = 0;
    heap_down(0);
  }
  return top;
}

void SatSolver::bump(std::uint32_t v) {
  activity_[v] += inc_;
  if (activity_[v] > 1e100) {
    for (auto& a : activity_) a *= 1e-100;
    inc_ *= 1e-100;
  }
  if (heap_pos_[v] >= 0) heap_up(static_cast<std::size_t>(heap_pos_[v]));
}

void SatSolver::enqueue(Lit l, std::int32_t reason) {
  const auto v = lit_var(l);
  assign_[v] = lit_negated(l) ? kFalse : kTrue;
  level_[v] = level();
  reason_[v] = reason;
  trail_.push_back(l);
}

std::int32_t SatSolver::attach(std::vector<Lit> lits) {
  const auto id = static_cast<std::int32_t>(clauses_.size());
  watches_[neg(lits[0])].push_back(id);
  watches_[neg(lits[1])].push_back(id);
  clauses_.push_back(std::move(lits));
  return id;
}

bool SatSolver::add_clause(std::vector<Lit> lits) {
  if (unsat_) return false;
  backtrack(0);
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  std::vector<Lit> kept;
  for (std::size_t i = 0; i < lits.size(); ++i) {
    if (lit_var(lits[i]) >= num_vars()) throw Error("SAT literal over an undeclared variable");
    if (i + 1 < lits.size() && lits[i + 1] == neg(lits[i])) return true;  // tautology
    const auto val = value(lits[i]);
    if (val == kTrue) return true;
    if (val == kUndef) kept.push_back(lits[i]);
  }
  if (kept.empty()) {
    unsat_ = true;
    return false;
  }
  if (kept.size() == 1) {
    enqueue(kept[0], -1);
    if (propagate() >= 0) unsat_ = true;
    return !unsat_;
  }
  attach(std::move(kept));
  return true;
}

std::int32_t SatSolver::propagate() {
  while (qhead_ < trail_.size()) {
    const Lit p = trail_[qhead_++];
    const Lit false_lit = neg(p);
    auto& ws = watches_[p];
    ++stats_.propagations;
    std::size_t i = 0, j = 0;
    while (i < ws.size()) {
      const auto cid = ws[i++];
      auto& c = clauses_[cid];
      if (c[0] == false_lit) std::swap(c[0], c[1]);
      if (value(c[0]) == kTrue) {
        ws[j++] = cid;
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < c.size(); ++k) {
        if (value(c[k]) != kFalse) {
          std::swap(c[1], c[k]);
          watches_[neg(c[1])].push_back(cid);
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[j++] = cid;
      if (value(c[0]) == kFalse) {
        while (i < ws.size()) ws[j++] = ws[i++];
        ws.resize(j);
        qhead_ = trail_.size();
        return cid;
      }
      enqueue(c[0], cid);
    }
    ws.resize(j);
  }
  return -1;
}

void SatSolver::analyze(std::int32_t confl, std::vector<Lit>& learnt, std::uint32_t& bt_level) {
  learnt.assign(1, 0);
  int path = 0;
  bool have_p = false;
  Lit p = 0;
  std::size_t idx = trail_.size();
  do {
    const auto& c = clauses_[confl];
    for (std::size_t j = have_p ? 1 : 0; j < c.size(); ++j) {
      const Lit q = c[j];
      const auto v = lit_var(q);
      if (seen_[v] || level_[v] == 0) continue;
      seen_[v] = true;
      bump(v);
      if (level_[v] == level())
        ++path;
      else
        learnt.push_back(q);
    }
    do {
      --idx;
    } while (!seen_[lit_var(trail_[idx])]);
    p = trail_[idx];
    have_p = true;
    confl = reason_[lit_var(p)];
    seen_[lit_var(p)] = false;
    --path;
  } while (path > 0);
  learnt[0] = neg(p);

  bt_level = 0;
  std::size_t max_i = 1;
  for (std::size_t i = 1; i < learnt.size(); ++i) {
    if (level_[lit_var(learnt[i])] > bt_level) {
      bt_level = level_[lit_var(learnt[i])];
      max_i = i;
    }
  }
  if (learnt.size() > 1) std::swap(learnt[1], learnt[max_i]);
  for (auto l : learnt) seen_[lit_var(l)] = false;
}

void SatSolver::backtrack(std::uint32_t lvl) {
  if (level() <= lvl) return;
  for (std::size_t i = trail_.size(); i-- > trail_lim_[lvl];) {
    const auto v = lit_var(trail_[i]);
    phase_[v] = assign_[v] == kTrue;
    assign_[v] = kUndef;
    reason_[v] = -1;
    heap_insert(v);
  }
  trail_.resize(trail_lim_[lvl]);
  trail_lim_.resize(lvl);
  qhead_ = trail_.size();
}

std::optional<std::vector<bool>> SatSolver::solve() {
  if (unsat_) return std::nullopt;
  backtrack(0);
  if (propagate() >= 0) {
    unsat_ = true;
    return std::nullopt;
  }
  std::uint64_t restart_no = 0;
  std::uint64_t budget = static_cast<std::uint64_t>(luby(2, restart_no) * 100);
  std::uint64_t since_restart = 0;
  std::vector<Lit> learnt;
  for (;;) {
    const auto confl = propagate();
    if (confl >= 0) {
      ++stats_.conflicts;
      ++since_restart;
      if (level() == 0) {
        unsat_ = true;
        return std::nullopt;
      }
      std::uint32_t bt = 0;
      analyze(confl, learnt, bt);
      backtrack(bt);
      if (learnt.size() == 1) {
        enqueue(learnt[0], -1);
      } else {
        const auto cid = attach(learnt);
        enqueue(learnt[0], cid);
      }
      decay();
      continue;
    }
    if (since_restart >= budget) {
      ++stats_.restarts;
      backtrack(0);
      since_restart = 0;
      budget = static_cast<std::uint64_t>(luby(2, ++restart_no) * 100);
      continue;
    }
    std::optional<std::uint32_t> next;
    while ((next = heap_pop()))
      if (assign_[*next] == kUndef) break;
    if (!next) {
      std::vector<bool> model(num_vars());
      for (std::uint32_t v = 0; v < num_vars(); ++v) model[v] = assign_[v] == kTrue;
      backtrack(0);
      return model;
    }
    ++stats_.decisions;
    trail_lim_.push_back(trail_.size());
    enqueue(make_lit(*next, !phase_[*next]), -1);
  }
}

// ---- control formulas -------------------------------------------------------

ControlSolver::ControlSolver(const ConfigurationTemplate& tmpl) : tmpl_(tmpl) {
  true_var_ = solver_.new_var();
  clause({make_lit(true_var_)});
  for (const auto& v : tmpl.vars) {
    const auto width = static_cast<std::uint32_t>(std::bit_width(v.domain - 1));
    std::vector<std::uint32_t> bits;
    for (std::uint32_t b = 0; b < width; ++b) bits.push_back(solver_.new_var());
    // Values ≥ domain are excluded.
    for (std::uint64_t val = v.domain; val < (std::uint64_t{1} << width); ++val) {
      std::vector<Lit> c;
      for (std::uint32_t b = 0; b < width; ++b) c.push_back(make_lit(bits[b], (val >> b) & 1));
      clause(std::move(c));
    }
    bits_.push_back(std::move(bits));
  }
}

void ControlSolver::clause(std::vector<Lit> lits) {
  ++clause_count_;
  solver_.add_clause(std::move(lits));
}

Lit ControlSolver::eq_literal(std::uint32_t var, std::uint32_t value) {
  auto key = std::pair{var, value};
  if (auto it = eq_.find(key); it != eq_.end()) return it->second;
  const auto& bits = bits_.at(var);
  Lit out;
  if (value >= tmpl_.vars[var].domain) {
    out = make_lit(true_var_, true);
  } else if (bits.size() == 1) {
    out = make_lit(bits[0], !(value & 1));
  } else {
    const auto g = solver_.new_var();
    std::vector<Lit> back{make_lit(g)};
    for (std::size_t b = 0; b < bits.size(); ++b) {
      const Lit bl = make_lit(bits[b], !((value >> b) & 1));
      clause({make_lit(g, true), bl});
      back.push_back(neg(bl));
    }
    clause(std::move(back));
    out = make_lit(g);
  }
  eq_.emplace(key, out);
  return out;
}

Lit ControlSolver::literal_of(const CfStore& st, CfId root) {
  // Iterative post-order so deep formulas do not exhaust the stack.
  std::vector<std::pair<CfId, bool>> stack{{root, false}};
  while (!stack.empty()) {
    auto [x, expanded] = stack.back();
    stack.pop_back();
    if (gate_.count(x)) continue;
    const auto ch = st.children(x);
    if (!expanded) {
      stack.push_back({x, true});
      for (auto c : ch)
        if (!gate_.count(c)) stack.push_back({c, false});
      continue;
    }
    Lit out = 0;
    switch (st.kind(x)) {
      case CfKind::True: out = make_lit(true_var_); break;
      case CfKind::False: out = make_lit(true_var_, true); break;
      case CfKind::ControlEq: out = eq_literal(st.var_of(x), st.value_of(x)); break;
      case CfKind::Not: out = neg(gate_.at(ch[0])); break;
      case CfKind::And:
      case CfKind::Or: {
        const bool is_and = st.kind(x) == CfKind::And;
        const auto g = solver_.new_var();
        out = make_lit(g);
        // AND: g → c_i, (∧ c_i) → g. OR is the dual.
        std::vector<Lit> back{is_and ? out : neg(out)};
        for (auto c : ch) {
          const Lit cl = gate_.at(c);
          if (is_and) {
            clause({neg(out), cl});
            back.push_back(neg(cl));
          } else {
            clause({out, neg(cl)});
            back.push_back(cl);
          }
        }
        clause(std::move(back));
        break;
      }
      case CfKind::Implies: {
        const Lit a = gate_.at(ch[0]), b = gate_.at(ch[1]);
        const auto g = solver_.new_var();
        out = make_lit(g);
        clause({neg(out), neg(a), b});
        clause({out, a});
        clause({out, neg(b)});
        break;
      }
      case CfKind::Atom:
      case CfKind::EdgeGuard:
        throw Error("SAT input must be control-only (ground the formula first)");
    }
    gate_.emplace(x, out);
  }
  return gate_.at(root);
}

void ControlSolver::add(const CfStore& st, CfId phi) {
  if (store_ && store_ != &st) throw Error("ControlSolver used with two formula stores");
  store_ = &st;
  clause({literal_of(st, phi)});
}

std::optional<ControlAssignment> ControlSolver::solve() {
  auto model = solver_.solve();
  if (!model) return std::nullopt;
  ControlAssignment m(tmpl_.vars.size(), 0);
  for (std::size_t v = 0; v < bits_.size(); ++v)
    for (std::size_t b = 0; b < bits_[v].size(); ++b)
      if ((*model)[bits_[v][b]]) m[v] |= 1u << b;
  return m;
}

void ControlSolver::block(const ControlAssignment& m) {
  std::vector<Lit> c;
  for (std::size_t v = 0; v < bits_.size(); ++v)
    for (std::size_t b = 0; b < bits_[v].size(); ++b)
      c.push_back(make_lit(bits_[v][b], (m[v] >> b) & 1));
  clause(std::move(c));
}

std::optional<ControlAssignment> sat_solve(const CfStore& st, CfId phi,
                                           const ConfigurationTemplate& tmpl) {
  ControlSolver s(tmpl);
  s.add(st, phi);
  return s.solve();
}

}  // namespace spctl
