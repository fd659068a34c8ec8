#include "protosynth/cegis.hpp"

#include <chrono>
#include <ostream>

namespace protosynth {

namespace {

struct TimeoutSignal {};

}  // namespace

SynthOptions ablate(SynthOptions opts, bool no_pruning, bool no_reduction, bool exact_stut) {
  opts.no_pruning = no_pruning;
  opts.no_reduction = no_reduction;
  opts.exact_stut = exact_stut;
  return opts;
}

const char* outcome_name(SynthOutcome o) {
  switch (o) {
    case SynthOutcome::Solution: return "solution";
    case SynthOutcome::Unrealizable: return "unrealizable";
    case SynthOutcome::Timeout: return "timeout";
    case SynthOutcome::Budget: return "budget";
  }
  return "?";
}

SynthResult synth(const Sketch& sk, const std::vector<Property>& props,
                  const SynthOptions& opts) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const auto deadline = start + std::chrono::duration_cast<Clock::duration>(
                                    std::chrono::duration<double>(opts.timeout_seconds));
  auto elapsed = [&] {
    return std::chrono::duration<double>(Clock::now() - start).count();
  };

  SynthResult result;
  GlobalSpace space = init_search_space(sk, opts.no_reduction);
  space.no_pruning = opts.no_pruning;
  space.checkpoint = [&] {
    if (Clock::now() > deadline) throw TimeoutSignal{};
  };

  CheckOptions copts;
  copts.state_budget = opts.state_budget;
  copts.check_deadlock = opts.check_deadlock;
  copts.workers = opts.workers;

  PickStats pick_stats;
  GeneralizeMode mode =
      opts.exact_stut ? GeneralizeMode::ExactStuttering : GeneralizeMode::Standard;

  auto finish = [&](SynthOutcome outcome) {
    result.outcome = outcome;
    result.stats.candidates_enumerated = pick_stats.candidates_enumerated;
    result.stats.candidates_pruned = pick_stats.candidates_pruned;
    result.stats.interps_total = 0;
    result.stats.classes_per_hole.clear();
    for (size_t hi = 0; hi < space.hole_count(); ++hi) {
      result.stats.interps_total +=
          static_cast<long long>(space.hole_space(static_cast<int>(hi)).interps.size());
      result.stats.classes_per_hole.push_back(static_cast<long long>(
          space.hole_space(static_cast<int>(hi)).start_classes.size()));
    }
    result.stats.wall_time_seconds = elapsed();
    return result;
  };

  long long iteration = 0;
  long long prev_verified = -1;
  try {
    while (true) {
      if (Clock::now() > deadline) return finish(SynthOutcome::Timeout);
      std::optional<Completion> cand;
      try {
        cand = space.pick(&pick_stats);
      } catch (const GrowthBudgetExceeded&) {
        return finish(SynthOutcome::Budget);
      }
      if (!cand) return finish(SynthOutcome::Unrealizable);

      ++iteration;
      ++result.stats.verifier_calls;
      CheckResult verdict;
      try {
        verdict = check(sk, *cand, props, copts);
      } catch (const StateBudgetExceeded&) {
        return finish(SynthOutcome::Budget);
      }
      space.mark_verified();
      if (space.verified_count() <= prev_verified)
        throw InternalError("no progress across iterations");
      prev_verified = space.verified_count();

      if (opts.verbosity >= 1 && opts.log) {
        int total = 0;
        for (const auto& e : cand->exprs) total += node_count(e);
        *opts.log << "iter " << iteration << ": size " << total << " "
                  << (verdict.ok ? "correct" : cex_kind_name(verdict.cex->kind));
        if (opts.verbosity >= 2) {
          *opts.log << " [";
          for (size_t i = 0; i < cand->exprs.size(); ++i) {
            if (i) *opts.log << ", ";
            *opts.log << pretty(cand->exprs[i]);
          }
          *opts.log << "]";
        }
        *opts.log << "\n";
      }

      if (verdict.ok) {
        // Tripwire: the returned completion is re-verified independently.
        CheckResult confirm = check(sk, *cand, props, copts);
        if (!confirm.ok) throw InternalError("final re-check rejected the solution");
        result.completion = *cand;
        return finish(SynthOutcome::Solution);
      }

      // Budget and deadline sit between the check and generalize phases, so
      // every picked candidate has been verified by the time they fire and
      // the counter bookkeeping stays consistent.
      if (pick_stats.candidates_enumerated > opts.candidate_budget)
        return finish(SynthOutcome::Budget);
      if (Clock::now() > deadline) return finish(SynthOutcome::Timeout);

      result.last_cex = verdict.cex;
      PruningConstraint pc = generalize(*verdict.cex, *cand, sk, mode);
      if (satisfies(sk, *cand, pc))
        throw InternalError("generalized constraint does not exclude its candidate");
      space.prune(std::move(pc));
      ++result.stats.constraints_added;
      space.abstract_update(space.constraints().constraints.back());
    }
  } catch (const TimeoutSignal&) {
    return finish(SynthOutcome::Timeout);
  }
}

}  // namespace protosynth
