#include "spctl/synth.hpp"

#include <chrono>
#include <fstream>
#include <random>
#include <sstream>

#include "spctl/classic.hpp"
#include "spctl/encoder.hpp"
#include "spctl/error.hpp"
#include "spctl/io.hpp"
#include "spctl/parser.hpp"
#include "spctl/regions.hpp"
#include "spctl/sat.hpp"
#include "spctl/smtlib.hpp"

namespace spctl {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool mentions_au(const std::vector<Requirement>& reqs) {
  for (const auto& r : reqs)
    if (contains_op(r.constraint.node(), Op::AU)) return true;
  return false;
}

bool has_deadlock_freeness(const std::vector<Requirement>& reqs) {
  const Requirement df = deadlock_freeness();
  for (const auto& r : reqs)
    if (r == df) return true;
  return false;
}

bool fixed_edges_grant_all(const ResourceStructure& s) {
  for (const auto& e : s.edges())
    if (!e.controlled && !target_equiv(e.fixed_policy, Target::truth(), s.sig())) return false;
  return true;
}

bool attributes_restricted(const ResourceStructure& s) {
  for (auto e : s.controlled_edges())
    if (s.edge(e).allowed) return true;
  return false;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write '" + path + "'");
  f << text;
}

}  // namespace

std::string_view to_string(SynthesisResult::Outcome o) {
  switch (o) {
    case SynthesisResult::Outcome::Configuration: return "configuration";
    case SynthesisResult::Outcome::Unsat: return "unsat";
    case SynthesisResult::Outcome::CapExceeded: return "cap-exceeded";
  }
  return "?";
}

Requirement deny_by_default(const ResourceStructure& s, const std::vector<Requirement>& reqs,
                            const std::string& attr, const std::string& value) {
  const auto& sig = s.sig();
  const auto a = sig.find(attr);
  if (!a || sig[*a].cls != AttrClass::Resource)
    throw Error("entry label '" + attr + "' is not a resource attribute");
  const Value v = parse_value(value, sig[*a]);
  if (s.resource(s.entry()).labels[*a] != v)
    throw Error("entry resource '" + s.resource(s.entry()).id + "' is not labeled " + attr + " = " +
                value);
  std::vector<Target> parts;
  for (std::size_t i = 0; i < reqs.size(); ++i) {
    const auto& r = reqs[i];
    if (r.polarity == Polarity::Unknown)
      throw Error("requirement " + (r.name.empty() ? "#" + std::to_string(i + 1) : r.name) +
                  " has unknown polarity; annotate it with ': positive' or ': negative'");
    if (r.polarity == Polarity::Positive) parts.push_back(negate(r.target));
  }
  Requirement out;
  out.target = conj_all(parts);
  out.constraint = ax(Constraint::member(*a, ValueSet::of(v)));
  out.polarity = Polarity::Negative;
  out.name = "deny-by-default";
  return out;
}

std::vector<Requirement> effective_requirements(const ResourceStructure& s,
                                                const std::vector<Requirement>& reqs,
                                                const SynthesisOptions& opt,
                                                std::vector<std::string>* warnings) {
  std::vector<Requirement> out = reqs;
  if (opt.deny_by_default) {
    Requirement d = deny_by_default(s, reqs, opt.deny_by_default->first, opt.deny_by_default->second);
    if (!target_sat(d.target, s.sig()) && warnings)
      warnings->push_back("deny-by-default target is unsatisfiable; the requirement is vacuous");
    out.push_back(std::move(d));
  }
  const bool want = opt.deadlock_free == DeadlockMode::On ||
                    (opt.deadlock_free == DeadlockMode::Auto && mentions_au(out));
  if (want && !has_deadlock_freeness(out)) {
    Requirement df = deadlock_freeness();
    df.name = "deadlock-free";
    out.push_back(std::move(df));
  }
  return out;
}

TemplateOutcome solve_template(const ResourceStructure& s, const std::vector<Requirement>& reqs,
                               const ConfigurationTemplate& tmpl, const SynthesisOptions& opt,
                               SynthesisStats& stats) {
  const auto& sig = s.sig();
  CfStore st;
  auto t0 = Clock::now();
  Encoder enc(s, st);
  std::vector<CfId> parts;
  for (const auto& r : reqs) parts.push_back(enc.encode(r));
  const CfId phi = st.conj(std::move(parts));
  stats.formula_nodes = st.dag_size(phi);
  stats.time.encode += seconds_since(t0);

  t0 = Clock::now();
  GroundStats gs;
  const CfId wf = tmpl.wellformed(st, sig);
  CfId g = st.conj(ground_forall(st, phi, s, tmpl, &gs), wf);
  stats.ground_nodes = st.dag_size(g);
  stats.representatives = gs.representatives;
  stats.control_vars = tmpl.vars.size();
  stats.time.ground += seconds_since(t0);

  if (!opt.emit_smt.empty())
    write_text(opt.emit_smt, emit_smtlib(st, opt.smt_grounded ? g : st.conj(phi, wf), tmpl, s,
                                         opt.smt_grounded));

  TemplateOutcome out;
  auto verified = [&](const ControlAssignment& m) -> std::optional<Configuration> {
    const auto tv = Clock::now();
    Configuration c = tmpl.derive(m, sig);
    const bool ok = holds(s, c, reqs).ok;
    stats.time.verify += seconds_since(tv);
    if (ok) return c;
    ++stats.retries;
    return std::nullopt;
  };

  if (opt.solver == SynthesisOptions::Solver::Builtin) {
    t0 = Clock::now();
    ControlSolver solver(tmpl);
    solver.add(st, g);
    stats.cnf_vars = solver.cnf_vars();
    stats.cnf_clauses = solver.cnf_clauses();
    for (std::size_t attempt = 0; attempt <= opt.max_retries; ++attempt) {
      const auto ts = Clock::now();
      auto m = solver.solve();
      stats.time.solve += seconds_since(ts);
      if (!m) return out;
      if ((out.config = verified(*m))) return out;
      solver.block(*m);
    }
    out.exhausted_retries = true;
    return out;
  }

  for (std::size_t attempt = 0; attempt <= opt.max_retries; ++attempt) {
    const auto ts = Clock::now();
    const ExternalResult r =
        run_external(emit_smtlib(st, g, tmpl, s, true), opt.solver_cmd, tmpl.vars.size(),
                     opt.timeout_seconds);
    stats.time.solve += seconds_since(ts);
    if (r.status == ExternalResult::Status::Unsat) return out;
    if (r.status != ExternalResult::Status::Sat) throw Error(r.message);
    if ((out.config = verified(*r.model))) return out;
    std::vector<CfId> same;
    for (std::uint32_t v = 0; v < tmpl.vars.size(); ++v) same.push_back(tmpl.eq(st, v, (*r.model)[v]));
    g = st.conj(g, st.negate(st.conj(std::move(same))));
  }
  out.exhausted_retries = true;
  return out;
}

SynthesisResult synth(const ResourceStructure& s, const std::vector<Requirement>& reqs,
                      const SynthesisOptions& opt) {
  SynthesisResult res;
  res.requirements = effective_requirements(s, reqs, opt, &res.warnings);
  const auto& rs = res.requirements;
  res.stats.requirements = rs.size();

  auto attempt = [&](const ConfigurationTemplate& tmpl, const std::string& name) {
    res.stats.template_name = name;
    const TemplateOutcome o = solve_template(s, rs, tmpl, opt, res.stats);
    if (o.exhausted_retries)
      res.warnings.push_back("template " + name + ": gave up after " +
                             std::to_string(opt.max_retries) + " models failed verification");
    return o;
  };

  if (opt.family == SynthesisOptions::Family::Custom) {
    if (!opt.custom) throw Error("custom template family without a template");
    const auto o = attempt(*opt.custom, "custom");
    if (o.config) {
      res.outcome = SynthesisResult::Outcome::Configuration;
      res.config = o.config;
      res.message = "configuration found";
    } else {
      res.outcome = SynthesisResult::Outcome::Unsat;
      res.message = "no configuration in the given template satisfies the requirements";
    }
    return res;
  }

  if (opt.max_k == 0) throw Error("max-k must be at least 1");
  for (std::size_t k = 1; k <= opt.max_k; ++k) {
    res.stats.k = k;
    const auto o = attempt(dnf_template(s, k, rs), "C_" + std::to_string(k));
    if (o.config) {
      res.outcome = SynthesisResult::Outcome::Configuration;
      res.config = o.config;
      res.message = "configuration found in C_" + std::to_string(k);
      return res;
    }
  }

  res.outcome = SynthesisResult::Outcome::CapExceeded;
  res.message = "unsat within searched templates (C_1..C_" + std::to_string(opt.max_k) + ")";
  if (!opt.try_complete) return res;

  std::optional<ConfigurationTemplate> complete;
  try {
    complete = build_complete_template(s, rs, opt.complete_cap);
  } catch (const CapError& e) {
    res.message += "; complete template skipped: " + std::string(e.what());
    return res;
  }
  // The complete template decides global satisfiability only when the
  // encoding is exact for every configuration in it and every fixed edge
  // grants all requests.
  const bool exact = !mentions_au(rs) || has_deadlock_freeness(rs);
  const bool decisive = exact && fixed_edges_grant_all(s);
  const auto o = attempt(*complete, "complete");
  if (o.config) {
    if (attributes_restricted(s)) {
      res.message += "; a configuration exists, but only with attributes the PEPs cannot read";
      return res;
    }
    res.outcome = SynthesisResult::Outcome::Configuration;
    res.config = simplify(*o.config, s.sig());
    res.message = "configuration found in the complete template";
    return res;
  }
  if (decisive && !o.exhausted_retries) {
    res.outcome = SynthesisResult::Outcome::Unsat;
    res.global = true;
    res.message = "unsat: no configuration satisfies the requirements";
  }
  return res;
}

std::optional<std::size_t> first_conflict(const ResourceStructure& s,
                                          const std::vector<Requirement>& reqs,
                                          const SynthesisOptions& opt) {
  const auto all = effective_requirements(s, reqs, opt);
  SynthesisOptions plain = opt;
  plain.deny_by_default.reset();
  plain.deadlock_free = DeadlockMode::Off;
  plain.emit_smt.clear();
  std::vector<Requirement> prefix;
  for (std::size_t i = 0; i < all.size(); ++i) {
    prefix.push_back(all[i]);
    if (synth(s, prefix, plain).outcome != SynthesisResult::Outcome::Configuration) return i;
  }
  return std::nullopt;
}

SimulationReport simulate(const ResourceStructure& s, const Configuration& c,
                          const AccessRequest& q) {
  c.check_total(s);
  SimulationReport r;
  for (std::size_t e = 0; e < s.edges().size(); ++e)
    r.granted.push_back(eval_target(q, edge_policy(s, c, e)));
  r.reachable = restrict_mask(s, c, q).node_kept;
  DotOptions d;
  d.config = &c;
  d.request = &q;
  r.dot = to_dot(s, d);
  return r;
}

std::string to_text(const SimulationReport& r, const ResourceStructure& s) {
  std::ostringstream out;
  for (std::size_t e = 0; e < s.edges().size(); ++e)
    out << s.edge_name(e) << ": " << (r.granted[e] ? "granted" : "denied")
        << (s.edge(e).controlled ? "" : " (fixed)") << "\n";
  out << "reachable:";
  for (std::size_t i = 0; i < r.reachable.size(); ++i)
    if (r.reachable[i]) out << " " << s.resource(i).id;
  out << "\n";
  return out.str();
}

ClassifyReport classify(const Requirement& r, const ResourceStructure& s, std::size_t samples,
                        std::uint64_t seed) {
  ClassifyReport rep;
  rep.declared = r.polarity;
  std::vector<Target> pool{Target::truth(), Target::falsity()};
  std::vector<Atom> atoms;
  collect_atoms(r.target.node(), atoms);
  for (const auto& a : atoms) {
    pool.push_back(Target::member(a.attr, a.set));
    pool.push_back(negate(Target::member(a.attr, a.set)));
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  const std::vector<Requirement> one{r};
  for (std::size_t i = 0; i < samples; ++i) {
    Configuration hi, lo;
    for (auto e : s.controlled_edges()) {
      const Target& p = pool[pick(rng)];
      hi.set(e, p);
      lo.set(e, conj(p, pool[pick(rng)]));
    }
    const bool h_lo = holds(s, lo, one).ok;
    const bool h_hi = holds(s, hi, one).ok;
    if (h_lo && !h_hi) ++rep.upward_violations;
    if (h_hi && !h_lo) ++rep.downward_violations;
    ++rep.samples;
  }
  std::ostringstream d;
  switch (rep.declared) {
    case Polarity::Positive:
      rep.confirmed = rep.upward_violations ? Polarity::Unknown : Polarity::Positive;
      if (rep.upward_violations)
        d << rep.upward_violations << " of " << rep.samples
          << " sampled pairs lose the requirement when permissions grow";
      break;
    case Polarity::Negative:
      rep.confirmed = rep.downward_violations ? Polarity::Unknown : Polarity::Negative;
      if (rep.downward_violations)
        d << rep.downward_violations << " of " << rep.samples
          << " sampled pairs lose the requirement when permissions shrink";
      break;
    case Polarity::Unknown:
      d << "no pattern polarity; observed " << rep.upward_violations << " upward and "
        << rep.downward_violations << " downward violations in " << rep.samples << " samples";
      break;
  }
  rep.diagnostic = d.str();
  return rep;
}

}  // namespace spctl
