#include "spctl/smtlib.hpp"

#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>

#include "spctl/error.hpp"

namespace spctl {

namespace {

std::string num(std::uint64_t n) { return std::to_string(n); }

class Emitter {
 public:
  Emitter(CfStore& st, const ConfigurationTemplate& tmpl, const ResourceStructure& s,
          bool grounded)
      : st_(st), tmpl_(tmpl), s_(s), sig_(s.sig()), grounded_(grounded) {}

  std::string run(CfId phi) {
    std::ostringstream out;
    out << "; spctl policy synthesis instance\n";
    if (grounded_) out << "(set-logic QF_LIA)\n";
    for (std::size_t v = 0; v < tmpl_.vars.size(); ++v) {
      out << "; z" << v << " = " << tmpl_.vars[v].name << "\n";
      out << "(declare-const z" << v << " Int)\n";
      out << "(assert (and (<= 0 z" << v << ") (< z" << v << " " << tmpl_.vars[v].domain << ")))\n";
    }
    if (!grounded_) declare_sorts(out);

    // Expand guards for the ungrounded form so the body is closed.
    CfStore& mst = st_;
    if (!grounded_) {
      for (std::size_t e = 0; e < s_.edges().size(); ++e) {
        const Edge& ed = s_.edges()[e];
        guards_[e] = ed.controlled ? tmpl_.policy(mst, sig_, e) : mst.from_target(ed.fixed_policy);
      }
    }
    const std::string top = expr(phi);
    out << defs_.str();
    if (grounded_ || params_.empty()) {
      out << "(assert " << top << ")\n";
    } else {
      out << "(assert (forall (" << params_ << ")\n  (=> " << domain_guard() << " " << top
          << ")))\n";
    }
    out << "(check-sat)\n";
    if (!tmpl_.vars.empty()) {
      out << "(get-value (";
      for (std::size_t v = 0; v < tmpl_.vars.size(); ++v) out << (v ? " " : "") << "z" << v;
      out << "))\n";
    }
    return out.str();
  }

 private:
  void declare_sorts(std::ostringstream& out) {
    std::ostringstream params, args;
    for (auto a : sig_.request_attributes()) {
      const Attribute& at = sig_[a];
      out << "; a" << a << " = " << at.name << "\n";
      if (at.kind == AttrKind::Numeric) {
        params << "(a" << a << "_def Bool) (a" << a << "_val Int) ";
        args << " a" << a << "_def a" << a << "_val";
        numeric_.push_back(a);
      } else {
        out << "(declare-datatypes ((S" << a << " 0)) ((";
        out << "(a" << a << "_bot)";
        for (std::size_t j = 0; j < at.symbols.size(); ++j) out << " (a" << a << "_v" << j << ")";
        out << ")))\n";
        params << "(a" << a << " S" << a << ") ";
        args << " a" << a;
      }
    }
    params_ = params.str();
    if (!params_.empty()) params_.pop_back();
    args_ = args.str();
  }

  std::string domain_guard() const {
    if (numeric_.empty()) return "true";
    std::string g = "(and true";
    for (auto a : numeric_) g += " (<= 0 a" + num(a) + "_val)";
    return g + ")";
  }

  std::string atom(const Atom& a) const {
    const Attribute& at = sig_[a.attr];
    std::vector<std::string> alts;
    const std::string n = "a" + num(a.attr);
    if (at.kind == AttrKind::Numeric) {
      if (a.set.has_bottom()) alts.push_back("(not " + n + "_def)");
      for (const auto& r : a.set.ranges()) {
        std::string c = "(and " + n + "_def (<= " + num(r.lo) + " " + n + "_val)";
        if (r.hi != kInfinity) c += " (<= " + n + "_val " + num(r.hi) + ")";
        alts.push_back(c + ")");
      }
    } else {
      if (a.set.has_bottom()) alts.push_back("(= " + n + " " + n + "_bot)");
      for (std::size_t j = 0; j < at.symbols.size(); ++j)
        if (a.set.contains(Value::symbol(at.symbols[j])))
          alts.push_back("(= " + n + " " + n + "_v" + num(j) + ")");
    }
    if (alts.empty()) return "false";
    if (alts.size() == 1) return alts[0];
    std::string out = "(or";
    for (const auto& s : alts) out += " " + s;
    return out + ")";
  }

  // Emits definitions bottom-up; returns the term for x.
  std::string expr(CfId root) {
    std::vector<std::pair<CfId, bool>> stack{{root, false}};
    while (!stack.empty()) {
      auto [x, expanded] = stack.back();
      stack.pop_back();
      if (names_.count(x)) continue;
      std::vector<CfId> kids(st_.children(x).begin(), st_.children(x).end());
      if (st_.kind(x) == CfKind::EdgeGuard) {
        if (grounded_) throw Error("edge guard in a grounded SMT-LIB script");
        kids = {guards_.at(st_.edge_of(x))};
      }
      if (!expanded) {
        stack.push_back({x, true});
        for (auto c : kids)
          if (!names_.count(c)) stack.push_back({c, false});
        continue;
      }
      std::string term;
      switch (st_.kind(x)) {
        case CfKind::True: term = "true"; break;
        case CfKind::False: term = "false"; break;
        case CfKind::ControlEq:
          term = "(= z" + num(st_.var_of(x)) + " " + num(st_.value_of(x)) + ")";
          break;
        case CfKind::Atom:
          if (grounded_) throw Error("attribute atom in a grounded SMT-LIB script");
          term = atom(st_.atom_of(x));
          break;
        case CfKind::EdgeGuard: term = names_.at(kids[0]); break;
        case CfKind::Not: term = "(not " + names_.at(kids[0]) + ")"; break;
        case CfKind::And:
        case CfKind::Or:
        case CfKind::Implies: {
          term = st_.kind(x) == CfKind::And ? "(and" : st_.kind(x) == CfKind::Or ? "(or" : "(=>";
          for (auto c : kids) term += " " + names_.at(c);
          term += ")";
          break;
        }
      }
      const auto k = st_.kind(x);
      if (k == CfKind::True || k == CfKind::False || k == CfKind::ControlEq ||
          k == CfKind::EdgeGuard) {
        names_[x] = term;
        continue;
      }
      const std::string name = "n" + num(x);
      if (grounded_ || params_.empty()) {
        defs_ << "(define-fun " << name << " () Bool " << term << ")\n";
        names_[x] = name;
      } else {
        defs_ << "(define-fun " << name << " (" << params_ << ") Bool " << term << ")\n";
        names_[x] = "(" + name + args_ + ")";
      }
    }
    return names_.at(root);
  }

  CfStore& st_;
  const ConfigurationTemplate& tmpl_;
  const ResourceStructure& s_;
  const AttributeSignature& sig_;
  bool grounded_;
  std::string params_, args_;
  std::vector<std::size_t> numeric_;
  std::map<std::size_t, CfId> guards_;
  std::unordered_map<CfId, std::string> names_;
  std::ostringstream defs_;
};

}  // namespace

std::string emit_smtlib(CfStore& st, CfId phi, const ConfigurationTemplate& tmpl,
                        const ResourceStructure& s, bool grounded) {
  return Emitter(st, tmpl, s, grounded).run(phi);
}

ExternalResult parse_solver_output(const std::string& out, std::size_t num_vars) {
  ExternalResult r;
  std::istringstream in(out);
  std::string first;
  while (in >> first) {
    if (first == "sat" || first == "unsat" || first == "unknown") break;
    if (first.rfind("(error", 0) == 0) {
      r.message = "solver error: " + out;
      return r;
    }
  }
  if (first == "unsat") {
    r.status = ExternalResult::Status::Unsat;
    return r;
  }
  if (first == "unknown") {
    r.status = ExternalResult::Status::Unknown;
    r.message = "solver answered unknown";
    return r;
  }
  if (first != "sat") {
    r.message = "unparsable solver output: " + out.substr(0, 200);
    return r;
  }
  ControlAssignment m(num_vars, 0);
  std::vector<bool> seen(num_vars, false);
  static const std::regex pair(R"(\(\s*z(\d+)\s+(\d+)\s*\))");
  for (auto it = std::sregex_iterator(out.begin(), out.end(), pair); it != std::sregex_iterator(); ++it) {
    const auto v = std::stoul((*it)[1]);
    if (v >= num_vars) continue;
    m[v] = static_cast<std::uint32_t>(std::stoul((*it)[2]));
    seen[v] = true;
  }
  for (std::size_t v = 0; v < num_vars; ++v)
    if (!seen[v]) {
      r.message = "solver output lacks a value for z" + std::to_string(v);
      return r;
    }
  r.status = ExternalResult::Status::Sat;
  r.model = std::move(m);
  return r;
}

ExternalResult run_external(const std::string& script, const std::string& command,
                            std::size_t num_vars, double timeout_seconds) {
  ExternalResult fail;
  char path[] = "/tmp/spctl-XXXXXX.smt2";
  const int fd = mkstemps(path, 5);
  if (fd < 0) {
    fail.message = "cannot create a temporary script file";
    return fail;
  }
  {
    const auto n = ::write(fd, script.data(), script.size());
    ::close(fd);
    if (n != static_cast<ssize_t>(script.size())) {
      ::unlink(path);
      fail.message = "cannot write the temporary script file";
      return fail;
    }
  }
  int pipefd[2];
  if (pipe(pipefd) != 0) {
    ::unlink(path);
    fail.message = "pipe() failed";
    return fail;
  }
  const std::string cmdline = command + " '" + path + "'";
  const pid_t pid = fork();
  if (pid < 0) {
    ::unlink(path);
    fail.message = "fork() failed";
    return fail;
  }
  if (pid == 0) {
    setpgid(0, 0);
    dup2(pipefd[1], STDOUT_FILENO);
    dup2(pipefd[1], STDERR_FILENO);
    close(pipefd[0]);
    close(pipefd[1]);
    execl("/bin/sh", "sh", "-c", cmdline.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(pipefd[1]);
  std::string out;
  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::milliseconds(static_cast<long long>(timeout_seconds * 1000));
  bool timed_out = false;
  char buf[4096];
  for (;;) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                          deadline - std::chrono::steady_clock::now())
                          .count();
    if (left <= 0) {
      timed_out = true;
      break;
    }
    pollfd p{pipefd[0], POLLIN, 0};
    const int rc = poll(&p, 1, static_cast<int>(std::min<long long>(left, 1000)));
    if (rc < 0) break;
    if (rc == 0) continue;
    const auto n = read(pipefd[0], buf, sizeof buf);
    if (n <= 0) break;
    out.append(buf, static_cast<std::size_t>(n));
  }
  close(pipefd[0]);
  if (timed_out) kill(-pid, SIGKILL);
  int status = 0;
  waitpid(pid, &status, 0);
  ::unlink(path);
  if (timed_out) {
    fail.message = "external solver timed out after " + std::to_string(timeout_seconds) + " s";
    return fail;
  }
  ExternalResult r = parse_solver_output(out, num_vars);
  if (r.status == ExternalResult::Status::Error && WIFEXITED(status) && WEXITSTATUS(status) == 127)
    r.message = "cannot run external solver '" + command + "'";
  return r;
}

}  // namespace spctl
