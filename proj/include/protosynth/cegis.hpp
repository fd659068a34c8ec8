#pragma once

#include <iosfwd>

#include "protosynth/reduction.hpp"

namespace protosynth {

struct SynthOptions {
  double timeout_seconds = 3600;
  long long state_budget = 1'000'000;
  long long candidate_budget = 10'000'000;
  bool no_pruning = false;
  bool no_reduction = false;
  bool exact_stut = false;
  bool check_deadlock = true;
  int workers = 1;
  int verbosity = 0;
  std::ostream* log = nullptr;
};

// Ablation toggles for comparison runs.
SynthOptions ablate(SynthOptions opts, bool no_pruning, bool no_reduction, bool exact_stut);

struct SynthStats {
  long long candidates_enumerated = 0;
  long long candidates_pruned = 0;
  long long verifier_calls = 0;
  long long constraints_added = 0;
  long long interps_total = 0;
  std::vector<long long> classes_per_hole;
  double wall_time_seconds = 0;
};

enum class SynthOutcome { Solution, Unrealizable, Timeout, Budget };

const char* outcome_name(SynthOutcome o);

struct SynthResult {
  SynthOutcome outcome = SynthOutcome::Timeout;
  std::optional<Completion> completion;
  std::optional<Counterexample> last_cex;
  SynthStats stats;
};

struct InternalError : std::runtime_error {
  explicit InternalError(const std::string& what) : std::runtime_error(what) {}
};

// The pick / check / generalize / prune / abstract loop. Returns Solution with
// a re-verified completion, Unrealizable when the reduced space is exhausted,
// or Timeout/Budget.
SynthResult synth(const Sketch& sk, const std::vector<Property>& props,
                  const SynthOptions& opts = {});

}  // namespace protosynth
