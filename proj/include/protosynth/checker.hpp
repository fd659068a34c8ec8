#pragma once

#include <optional>
#include <stdexcept>

#include "protosynth/sketch.hpp"

namespace protosynth {

// An expression for every hole, in hole index order.
struct Completion {
  std::vector<ExprPtr> exprs;
  std::vector<std::string> provenance;  // annotated-nonterminal labels, may be empty

  std::string key() const;  // canonical text form, one line
};

// A ground disjunct of the transition relation: action plus parameter values.
struct ActionInstance {
  int action = -1;
  std::vector<Value> params;

  bool operator==(const ActionInstance& o) const {
    return action == o.action && params == o.params;
  }
  bool operator!=(const ActionInstance& o) const { return !(*this == o); }
  std::string to_string(const Sketch& sk) const;
};

enum class CexKind { Safety, Deadlock, Liveness, Stuttering };

const char* cex_kind_name(CexKind k);

// Action-annotated finite run s_0 -A_1-> s_1 ... -A_k-> s_k. For liveness the
// suffix from loop_start is a cycle: states[loop_start] == states.back().
struct Counterexample {
  CexKind kind = CexKind::Safety;
  std::vector<State> states;
  std::vector<ActionInstance> taken;
  int loop_start = -1;
  int property_index = -1;  // -1 for deadlock

  // Loop states in order of first appearance (liveness only).
  std::vector<State> cycle_states() const;
  std::vector<ActionInstance> cycle_taken() const;
};

struct StateGraph {
  struct Edge {
    int from;
    ActionInstance inst;
    int to;
  };
  std::vector<State> states;  // discovery order
  std::vector<int> initial;
  std::vector<Edge> edges;
  std::vector<std::vector<int>> out;  // per-state edge ids, enumeration order
  std::vector<int> parent_edge;       // BFS tree, -1 for initial states

  std::vector<int> path_to(int state) const;  // edge ids from an initial state
};

struct CheckOptions {
  long long state_budget = 1'000'000;
  bool check_deadlock = true;
  int workers = 1;
};

struct StateBudgetExceeded : std::runtime_error {
  StateBudgetExceeded() : std::runtime_error("state budget exceeded") {}
};

struct NotEnabledError : std::runtime_error {
  NotEnabledError() : std::runtime_error("action instance not enabled") {}
};

struct CheckResult {
  bool ok = true;
  std::optional<Counterexample> cex;
  long long states_explored = 0;
};

// Ground instances: action declaration order, then lexicographic parameters.
std::vector<ActionInstance> all_instances(const Sketch& sk);

Env state_env(const Sketch& sk, const State& s);
Env param_env(const Sketch& sk, const ActionInstance& ai);

// Interpretation of hole `hi` at state s under the instance's parameters.
Interpretation hole_interp(const Sketch& sk, int hi, const State& s, const ActionInstance& ai);

bool is_can_enable(const Sketch& sk, const State& s, const ActionInstance& ai);
bool is_enabled(const Sketch& sk, const Completion& c, const State& s, const ActionInstance& ai);

std::vector<ActionInstance> enabled_instances(const Sketch& sk, const Completion& c,
                                              const State& s);

State successor(const Sketch& sk, const Completion& c, const State& s, const ActionInstance& ai);

// All initial states, in variable-domain enumeration order.
std::vector<State> initial_states(const Sketch& sk, const CheckOptions& opts = {});

StateGraph reachable_graph(const Sketch& sk, const Completion& c, const CheckOptions& opts = {});

// First violation in the order safety, deadlock, liveness, stuttering; OK when
// no property is violated.
CheckResult check(const Sketch& sk, const Completion& c, const std::vector<Property>& props,
                  const CheckOptions& opts = {});

bool holds_at(const Sketch& sk, const ExprPtr& prop, const State& s);

}  // namespace protosynth
