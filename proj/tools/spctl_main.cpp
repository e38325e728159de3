// spctl: synthesize, verify and inspect physical access-control policies.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "spctl/checker.hpp"
#include "spctl/classic.hpp"
#include "spctl/error.hpp"
#include "spctl/io.hpp"
#include "spctl/parser.hpp"
#include "spctl/synth.hpp"
#include "spctl/templates.hpp"

namespace {

using namespace spctl;

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kError = 2;

void write_out(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write '" + path + "'");
  f << text;
}

std::vector<Requirement> load_reqs(const std::string& path, const ResourceStructure& s) {
  return parse_requirements(read_file(path), s.sig());
}

std::string req_label(const Requirement& r, std::size_t i) {
  return r.name.empty() ? "#" + std::to_string(i + 1) : r.name;
}

std::pair<std::string, std::string> split_label(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == text.size())
    throw Error("entry label must look like attr=value, got '" + text + "'");
  return {text.substr(0, eq), text.substr(eq + 1)};
}

std::pair<std::string, std::string> default_entry_label(const ResourceStructure& s) {
  const auto id = s.sig().find("id");
  if (!id) throw Error("--entry-label is required: the model has no 'id' attribute");
  return {"id", s.resource(s.entry()).labels[*id].to_string()};
}

struct SynthArgs {
  std::string model, reqs, tmpl = "dnf", solver = "builtin", solver_cmd = "z3";
  std::string deadlock = "auto", entry_label, out, emit_smt;
  std::size_t max_k = 3, complete_cap = 1024;
  double timeout = 60;
  bool deny_default = false, stats = false, smt_quantified = false, no_complete = false;
  bool explain = false;
};

DeadlockMode parse_deadlock(const std::string& m) {
  if (m == "auto") return DeadlockMode::Auto;
  if (m == "on") return DeadlockMode::On;
  if (m == "off") return DeadlockMode::Off;
  throw Error("--deadlock-free expects auto, on or off");
}

SynthesisOptions build_options(const SynthArgs& a, const ResourceStructure& s) {
  SynthesisOptions o;
  o.max_k = a.max_k;
  o.complete_cap = a.complete_cap;
  o.try_complete = !a.no_complete;
  o.deadlock_free = parse_deadlock(a.deadlock);
  if (a.deny_default)
    o.deny_by_default = a.entry_label.empty() ? default_entry_label(s) : split_label(a.entry_label);
  if (a.solver == "external") {
    o.solver = SynthesisOptions::Solver::External;
    o.solver_cmd = a.solver_cmd;
    o.timeout_seconds = a.timeout;
  } else if (a.solver != "builtin") {
    throw Error("--solver expects builtin or external");
  }
  o.emit_smt = a.emit_smt;
  o.smt_grounded = !a.smt_quantified;
  if (a.tmpl.rfind("menu:", 0) == 0) {
    o.family = SynthesisOptions::Family::Custom;
    o.custom = menu_template(s, load_menu(read_file(a.tmpl.substr(5)), s));
  } else if (a.tmpl.rfind("config:", 0) == 0) {
    o.family = SynthesisOptions::Family::Custom;
    o.custom = singleton(s, load_configuration_file(a.tmpl.substr(7), s));
  } else if (a.tmpl != "dnf") {
    throw Error("--template expects dnf, menu:FILE or config:FILE");
  }
  return o;
}

void print_stats(const SynthesisStats& st) {
  std::cerr << "template:        " << st.template_name << "\n"
            << "requirements:    " << st.requirements << "\n"
            << "formula nodes:   " << st.formula_nodes << "\n"
            << "ground nodes:    " << st.ground_nodes << "\n"
            << "representatives: " << st.representatives << "\n"
            << "control vars:    " << st.control_vars << "\n"
            << "cnf vars/clauses: " << st.cnf_vars << " / " << st.cnf_clauses << "\n"
            << "rejected models: " << st.retries << "\n"
            << "time encode/ground/solve/verify (s): " << st.time.encode << " / "
            << st.time.ground << " / " << st.time.solve << " / " << st.time.verify << "\n";
}

int run_synth(const SynthArgs& a) {
  const ResourceStructure s = load_model_file(a.model);
  const auto reqs = load_reqs(a.reqs, s);
  const SynthesisOptions o = build_options(a, s);
  const SynthesisResult r = synth(s, reqs, o);
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  if (a.stats) print_stats(r.stats);
  std::cerr << r.message << "\n";
  if (r.outcome != SynthesisResult::Outcome::Configuration) {
    std::cout << (r.global ? "unsat" : to_string(r.outcome)) << "\n";
    if (a.explain) {
      if (const auto i = first_conflict(s, reqs, o)) {
        const auto& all = r.requirements;
        std::cerr << "first conflicting addition: " << to_string(all[*i], s.sig()) << "\n";
      }
    }
    return kFail;
  }
  const std::string json = configuration_to_json(*r.config, s);
  if (a.out.empty())
    std::cout << json;
  else
    write_out(a.out, json);
  return kOk;
}

int run_verify(const std::string& model, const std::string& reqs_path, const std::string& cfg,
               bool deadlock, bool deny_default, const std::string& entry_label) {
  const ResourceStructure s = load_model_file(model);
  auto reqs = load_reqs(reqs_path, s);
  const Configuration c = load_configuration_file(cfg, s);
  if (deny_default) {
    const auto [k, v] = entry_label.empty() ? default_entry_label(s) : split_label(entry_label);
    reqs.push_back(deny_by_default(s, reqs, k, v));
  }
  if (deadlock) {
    reqs.push_back(deadlock_freeness());
    reqs.back().name = "deadlock-free";
  }
  const HoldsResult h = holds(s, c, reqs);
  for (std::size_t i = 0; i < reqs.size(); ++i) {
    const auto& v = h.verdicts[i];
    std::cout << (v.ok ? "PASS " : "FAIL ") << req_label(reqs[i], i);
    if (!v.ok) std::cout << "  witness: " << v.witness->to_string(s.sig());
    std::cout << "\n";
  }
  std::cout << (h.ok ? "holds" : "violated") << " (" << h.representatives
            << " representative requests)\n";
  return h.ok ? kOk : kFail;
}

int run_check(const std::string& model, const std::string& formula, const std::string& cfg,
              const std::string& request) {
  const ResourceStructure s = load_model_file(model);
  const Constraint phi = parse_constraint(formula, s.sig());
  bool ok;
  if (!cfg.empty() || !request.empty()) {
    if (cfg.empty() || request.empty()) throw Error("--config and --request go together");
    const Configuration c = load_configuration_file(cfg, s);
    ok = model_check(s, restrict_mask(s, c, parse_request(request, s.sig())), phi);
  } else {
    ok = model_check(s, phi);
  }
  std::cout << (ok ? "true" : "false") << "\n";
  return ok ? kOk : kFail;
}

int run_simulate(const std::string& model, const std::string& cfg, const std::string& request,
                 const std::string& dot) {
  const ResourceStructure s = load_model_file(model);
  const Configuration c = load_configuration_file(cfg, s);
  const SimulationReport r = simulate(s, c, parse_request(request, s.sig()));
  std::cout << to_text(r, s);
  if (!dot.empty()) write_out(dot, r.dot);
  return kOk;
}

int run_scale(const std::string& model, std::size_t copies, const std::string& out) {
  if (copies == 0) throw Error("--copies must be positive");
  const ResourceStructure s = scale_replicate(load_model_file(model), copies);
  const std::string json = model_to_json(s);
  if (out.empty())
    std::cout << json;
  else
    write_out(out, json);
  std::cerr << s.resources().size() << " resources, " << s.edges().size() << " edges, "
            << s.controlled_edges().size() << " controlled\n";
  return kOk;
}

int run_classic(const std::string& model, const std::string& reqs_path, const std::string& out) {
  const ResourceStructure s = load_model_file(model);
  const auto reqs = load_reqs(reqs_path, s);
  if (reqs.size() > 12 || s.controlled_edges().size() > 16)
    std::cerr << "warning: controller-synthesis search is exponential in requirements and edges\n";
  const ClassicResult r = s_cs(s, reqs);
  std::cerr << r.stats.iterations << " subsets, " << r.stats.cs_calls << " cs calls\n";
  if (!r.config) {
    std::cout << "unsat\n";
    return kFail;
  }
  const std::string json = configuration_to_json(*r.config, s);
  if (out.empty())
    std::cout << json;
  else
    write_out(out, json);
  return kOk;
}

int run_classify(const std::string& model, const std::string& reqs_path, std::size_t samples) {
  const ResourceStructure s = load_model_file(model);
  const auto reqs = load_reqs(reqs_path, s);
  bool all_confirmed = true;
  for (std::size_t i = 0; i < reqs.size(); ++i) {
    const ClassifyReport r = classify(reqs[i], s, samples);
    std::cout << req_label(reqs[i], i) << ": declared " << to_string(r.declared) << ", "
              << to_string(r.confirmed);
    if (!r.diagnostic.empty()) std::cout << " (" << r.diagnostic << ")";
    std::cout << "\n";
    all_confirmed = all_confirmed && r.declared == r.confirmed;
  }
  return all_confirmed ? kOk : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthesis and verification of physical access-control policies"};
  app.require_subcommand(1);

  SynthArgs sa;
  auto* synth_cmd = app.add_subcommand("synth", "synthesize local policies");
  synth_cmd->add_option("MODEL", sa.model)->required();
  synth_cmd->add_option("REQS", sa.reqs)->required();
  synth_cmd->add_option("--template", sa.tmpl, "dnf | menu:FILE | config:FILE");
  synth_cmd->add_option("--max-k", sa.max_k, "largest DNF size tried")->capture_default_str();
  synth_cmd->add_option("--solver", sa.solver, "builtin | external")->capture_default_str();
  synth_cmd->add_option("--solver-cmd", sa.solver_cmd, "external solver command")
      ->capture_default_str();
  synth_cmd->add_option("--timeout", sa.timeout, "external solver timeout (s)")
      ->capture_default_str();
  synth_cmd->add_option("--deadlock-free", sa.deadlock, "auto | on | off")->capture_default_str();
  synth_cmd->add_flag("--deny-by-default", sa.deny_default);
  synth_cmd->add_option("--entry-label", sa.entry_label, "attr=value labeling the entry");
  synth_cmd->add_option("-o,--output", sa.out, "configuration output file");
  synth_cmd->add_option("--emit-smt", sa.emit_smt, "write the SMT-LIB script here");
  synth_cmd->add_flag("--smt-quantified", sa.smt_quantified,
                      "emit the attribute-quantified script instead of the grounded one");
  synth_cmd->add_flag("--no-complete", sa.no_complete,
                      "skip the complete-template check after C_1..C_k fail");
  synth_cmd->add_option("--complete-cap", sa.complete_cap, "menu size limit of that check")
      ->capture_default_str();
  synth_cmd->add_flag("--explain", sa.explain, "on failure, report the first conflicting requirement");
  synth_cmd->add_flag("--stats", sa.stats);

  std::string model, reqs, cfg, formula, request, dot, out, entry_label;
  bool deadlock = false, deny_default = false;
  std::size_t copies = 1, samples = 64;

  auto* verify_cmd = app.add_subcommand("verify", "check a configuration against requirements");
  verify_cmd->add_option("MODEL", model)->required();
  verify_cmd->add_option("REQS", reqs)->required();
  verify_cmd->add_option("CONFIG", cfg)->required();
  verify_cmd->add_flag("--deadlock-free", deadlock, "also require deadlock-freeness");
  verify_cmd->add_flag("--deny-by-default", deny_default);
  verify_cmd->add_option("--entry-label", entry_label);

  auto* check_cmd = app.add_subcommand("check", "model check a constraint at the entry");
  check_cmd->add_option("MODEL", model)->required();
  check_cmd->add_option("--formula", formula)->required();
  check_cmd->add_option("--config", cfg);
  check_cmd->add_option("--request", request);

  auto* sim_cmd = app.add_subcommand("simulate", "show what one request can reach");
  sim_cmd->add_option("MODEL", model)->required();
  sim_cmd->add_option("CONFIG", cfg)->required();
  sim_cmd->add_option("--request", request)->required();
  sim_cmd->add_option("--dot", dot);

  auto* scale_cmd = app.add_subcommand("scale", "replicate the non-entry part of a model");
  scale_cmd->add_option("MODEL", model)->required();
  scale_cmd->add_option("--copies", copies)->required();
  scale_cmd->add_option("-o,--output", out);

  auto* classic_cmd = app.add_subcommand("classic", "reference synthesis by controller synthesis");
  classic_cmd->add_option("MODEL", model)->required();
  classic_cmd->add_option("REQS", reqs)->required();
  classic_cmd->add_option("-o,--output", out);

  auto* classify_cmd = app.add_subcommand("classify", "spot-check requirement polarities");
  classify_cmd->add_option("MODEL", model)->required();
  classify_cmd->add_option("REQS", reqs)->required();
  classify_cmd->add_option("--samples", samples)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kError;
  }

  try {
    if (*synth_cmd) return run_synth(sa);
    if (*verify_cmd) return run_verify(model, reqs, cfg, deadlock, deny_default, entry_label);
    if (*check_cmd) return run_check(model, formula, cfg, request);
    if (*sim_cmd) return run_simulate(model, cfg, request, dot);
    if (*scale_cmd) return run_scale(model, copies, out);
    if (*classic_cmd) return run_classic(model, reqs, out);
    if (*classify_cmd) return run_classify(model, reqs, samples);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
