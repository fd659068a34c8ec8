#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "protosynth/json_io.hpp"
#include "protosynth/parser.hpp"

using namespace protosynth;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitBudget = 2;
constexpr int kExitUsage = 3;

struct CommonFlags {
  std::string input;
  CLI::Option* opt_no_pruning = nullptr;
  CLI::Option* opt_no_reduction = nullptr;
  CLI::Option* opt_exact_stut = nullptr;
  CLI::Option* opt_timeout = nullptr;
  CLI::Option* opt_candidate_budget = nullptr;
  bool json_output = false;
  bool timing = false;
  double timeout = 3600;
  long long state_budget = 1'000'000;
  long long candidate_budget = 10'000'000;
  bool no_pruning = false;
  bool no_reduction = false;
  bool exact_stut = false;
  bool no_deadlock = false;
  int workers = 1;
  int verbosity = 0;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("input", f.input, "input .sketch file")->required();
  cmd->add_flag("--json", f.json_output, "emit a machine-readable JSON report");
  cmd->add_flag("--timing", f.timing, "include wall-clock time in the JSON report");
  f.opt_timeout =
      cmd->add_option("--timeout", f.timeout, "wall-clock timeout in seconds")
          ->check(CLI::PositiveNumber);
  cmd->add_option("--state-budget", f.state_budget, "reachable-state cap")->check(CLI::PositiveNumber);
  f.opt_candidate_budget = cmd->add_option("--candidate-budget", f.candidate_budget,
                                           "candidate cap")
                               ->check(CLI::PositiveNumber);
  f.opt_no_pruning =
      cmd->add_flag("--no-pruning", f.no_pruning, "ignore pruning constraints when picking");
  f.opt_no_reduction =
      cmd->add_flag("--no-reduction", f.no_reduction, "key classes by expression identity");
  f.opt_exact_stut =
      cmd->add_flag("--exact-stut", f.exact_stut, "use the exact stuttering generalization");
  cmd->add_flag("--no-deadlock", f.no_deadlock, "disable deadlock detection");
  cmd->add_option("--workers", f.workers, "parallel workers for state expansion")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("-v,--verbose", f.verbosity, "per-iteration progress on stderr");
}

ParseResult load_or_exit(const std::string& path, int* rc) {
  ParseResult pr = parse_sketch_file(path);
  if (!pr.ok) {
    for (const auto& d : pr.diags) std::cerr << d.render(path) << "\n";
    *rc = kExitUsage;
  }
  return pr;
}

void emit(const json& report) { std::cout << report.dump(2) << "\n"; }

int run_synth(const CommonFlags& f) {
  int rc = kExitOk;
  ParseResult pr = load_or_exit(f.input, &rc);
  if (rc != kExitOk) return rc;

  SynthOptions opts;
  opts.timeout_seconds = f.timeout;
  opts.state_budget = f.state_budget;
  opts.candidate_budget = f.candidate_budget;
  opts.no_pruning = f.no_pruning;
  opts.no_reduction = f.no_reduction;
  opts.exact_stut = f.exact_stut;
  opts.check_deadlock = !f.no_deadlock;
  opts.workers = f.workers;
  opts.verbosity = f.verbosity;
  opts.log = &std::cerr;

  SynthResult r = synth(pr.sketch, pr.props, opts);

  if (f.json_output) {
    json report;
    report["mode"] = "synth";
    report["input"] = f.input;
    report["outcome"] = outcome_name(r.outcome);
    if (r.completion) {
      json comp = json::object();
      for (size_t hi = 0; hi < pr.sketch.holes.size(); ++hi)
        comp[pr.sketch.holes[hi].name] = pretty(r.completion->exprs[hi]);
      report["completion"] = comp;
    } else {
      report["completion"] = nullptr;
    }
    report["stats"] = stats_to_json(r.stats, pr.sketch, f.timing);
    emit(report);
  } else {
    std::cout << "outcome: " << outcome_name(r.outcome) << "\n";
    if (r.completion)
      for (size_t hi = 0; hi < pr.sketch.holes.size(); ++hi)
        std::cout << "  " << pr.sketch.holes[hi].name << " = "
                  << pretty(r.completion->exprs[hi]) << "\n";
    std::cout << "candidates: " << r.stats.candidates_enumerated
              << " (pruned " << r.stats.candidates_pruned << "), verifier calls: "
              << r.stats.verifier_calls << ", constraints: " << r.stats.constraints_added
              << ", interps: " << r.stats.interps_total << "\n";
    if (f.timing) std::cout << "wall time: " << r.stats.wall_time_seconds << "s\n";
  }
  switch (r.outcome) {
    case SynthOutcome::Solution: return kExitOk;
    case SynthOutcome::Unrealizable: return kExitViolation;
    default: return kExitBudget;
  }
}

int run_check(const CommonFlags& f) {
  for (const CLI::Option* opt : {f.opt_no_pruning, f.opt_no_reduction, f.opt_exact_stut,
                                 f.opt_candidate_budget, f.opt_timeout}) {
    if (opt && opt->count() > 0) {
      std::cerr << "check mode does not accept " << opt->get_name() << "\n";
      return kExitUsage;
    }
  }
  int rc = kExitOk;
  ParseResult pr = load_or_exit(f.input, &rc);
  if (rc != kExitOk) return rc;
  if (!pr.sketch.holes.empty()) {
    std::cerr << f.input << ": check mode needs a hole-free specification; found "
              << pr.sketch.holes.size() << " hole(s)\n";
    return kExitUsage;
  }
  CheckOptions opts;
  opts.state_budget = f.state_budget;
  opts.check_deadlock = !f.no_deadlock;
  opts.workers = f.workers;

  CheckResult r;
  try {
    r = check(pr.sketch, Completion{}, pr.props, opts);
  } catch (const StateBudgetExceeded&) {
    std::cerr << f.input << ": state budget exceeded\n";
    return kExitBudget;
  }
  if (f.json_output) {
    json report;
    report["mode"] = "check";
    report["input"] = f.input;
    report["outcome"] = r.ok ? "ok" : "violation";
    report["states_explored"] = r.states_explored;
    report["counterexample"] =
        r.cex ? counterexample_to_json(pr.sketch, pr.props, *r.cex) : json(nullptr);
    emit(report);
  } else {
    if (r.ok) {
      std::cout << "ok (" << r.states_explored << " states)\n";
    } else {
      std::cout << "violation: " << cex_kind_name(r.cex->kind) << "\n";
      std::cout << counterexample_to_json(pr.sketch, pr.props, *r.cex).dump(2) << "\n";
    }
  }
  return r.ok ? kExitOk : kExitViolation;
}

int run_enumerate(const CommonFlags& f, int size_cap, bool dump) {
  int rc = kExitOk;
  ParseResult pr = load_or_exit(f.input, &rc);
  if (rc != kExitOk) return rc;

  GlobalSpace gs = init_search_space(pr.sketch, f.no_reduction);
  for (size_t hi = 0; hi < gs.hole_count(); ++hi)
    gs.enumerate_pass(static_cast<int>(hi), size_cap);

  if (f.json_output) {
    json report;
    report["mode"] = "enumerate-classes";
    report["input"] = f.input;
    report["size_cap"] = size_cap;
    json holes = json::array();
    for (size_t hi = 0; hi < gs.hole_count(); ++hi) {
      const HoleSpace& hs = gs.hole_space(static_cast<int>(hi));
      json h;
      h["hole"] = pr.sketch.holes[hi].name;
      h["closed"] = hs.closed;
      json per_nt = json::object();
      for (const auto& nt : pr.sketch.holes[hi].grammar.nonterminals) {
        long long n = 0;
        for (const auto& e : hs.classes)
          if (e.nt == nt) ++n;
        per_nt[nt] = n;
      }
      h["classes_per_nonterminal"] = per_nt;
      h["total"] = static_cast<long long>(hs.classes.size());
      holes.push_back(h);
    }
    report["holes"] = holes;
    if (dump) report["cache"] = cache_dump(gs);
    emit(report);
  } else {
    for (size_t hi = 0; hi < gs.hole_count(); ++hi) {
      const HoleSpace& hs = gs.hole_space(static_cast<int>(hi));
      std::cout << pr.sketch.holes[hi].name << ": " << hs.classes.size() << " classes"
                << (hs.closed ? " (closed)" : "") << "\n";
      if (dump)
        for (const auto& e : hs.classes)
          std::cout << "  " << e.nt << " size " << e.size << " rep " << pretty(e.rep) << "\n";
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"protocol sketch completion synthesizer"};
  app.require_subcommand(1);

  CommonFlags synth_flags, check_flags, enum_flags;
  int size_cap = 6;
  bool dump_cache = false;

  CLI::App* synth_cmd = app.add_subcommand("synth", "synthesize hole completions");
  add_common(synth_cmd, synth_flags);
  CLI::App* check_cmd = app.add_subcommand("check", "model check a hole-free specification");
  add_common(check_cmd, check_flags);
  CLI::App* enum_cmd =
      app.add_subcommand("enumerate-classes", "enumerate equivalence classes per hole");
  add_common(enum_cmd, enum_flags);
  enum_cmd->add_option("--size-cap", size_cap, "maximum expression size")
      ->check(CLI::PositiveNumber);
  enum_cmd->add_flag("--dump-cache", dump_cache, "include every class in the output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (synth_cmd->parsed()) return run_synth(synth_flags);
    if (check_cmd->parsed()) return run_check(check_flags);
    if (enum_cmd->parsed()) return run_enumerate(enum_flags, size_cap, dump_cache);
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
