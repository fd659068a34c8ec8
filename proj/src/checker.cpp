#include "protosynth/checker.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cassert>
#include <deque>
#include <map>
#include <set>
#include <thread>
#include <unordered_map>

namespace protosynth {

std::string Completion::key() const {
  std::string out;
  for (const auto& e : exprs) {
    out += pretty(e);
    out += ";";
  }
  return out;
}

std::string ActionInstance::to_string(const Sketch& sk) const {
  std::string out = sk.actions[action].name + "(";
  for (size_t i = 0; i < params.size(); ++i) {
    if (i) out += ", ";
    out += params[i].to_string();
  }
  return out + ")";
}

const char* cex_kind_name(CexKind k) {
  switch (k) {
    case CexKind::Safety: return "safety";
    case CexKind::Deadlock: return "deadlock";
    case CexKind::Liveness: return "liveness";
    case CexKind::Stuttering: return "stuttering";
  }
  return "?";
}

std::vector<State> Counterexample::cycle_states() const {
  std::vector<State> out;
  if (loop_start < 0) return out;
  for (size_t i = loop_start; i < states.size(); ++i) {
    bool seen = false;
    for (const auto& s : out)
      if (s == states[i]) seen = true;
    if (!seen) out.push_back(states[i]);
  }
  return out;
}

std::vector<ActionInstance> Counterexample::cycle_taken() const {
  std::vector<ActionInstance> out;
  if (loop_start < 0) return out;
  for (size_t i = loop_start; i < taken.size(); ++i) {
    bool seen = false;
    for (const auto& a : out)
      if (a == taken[i]) seen = true;
    if (!seen) out.push_back(taken[i]);
  }
  return out;
}

std::vector<int> StateGraph::path_to(int state) const {
  std::vector<int> rev;
  int cur = state;
  while (parent_edge[cur] >= 0) {
    rev.push_back(parent_edge[cur]);
    cur = edges[parent_edge[cur]].from;
  }
  std::reverse(rev.begin(), rev.end());
  return rev;
}

std::vector<ActionInstance> all_instances(const Sketch& sk) {
  std::vector<ActionInstance> out;
  for (size_t ai = 0; ai < sk.actions.size(); ++ai) {
    const ActionDecl& a = sk.actions[ai];
    std::vector<int> idx(a.params.size(), 1);
    std::vector<int> card;
    for (const auto& p : a.params) card.push_back(sk.sorts.cardinality_of(p.second));
    while (true) {
      ActionInstance inst;
      inst.action = static_cast<int>(ai);
      for (size_t i = 0; i < a.params.size(); ++i)
        inst.params.push_back(Value::atom_of(a.params[i].second, idx[i]));
      out.push_back(std::move(inst));
      int pos = static_cast<int>(a.params.size()) - 1;
      while (pos >= 0) {
        if (++idx[pos] <= card[pos]) break;
        idx[pos] = 1;
        --pos;
      }
      if (pos < 0) break;
    }
  }
  return out;
}

Env state_env(const Sketch& sk, const State& s) {
  Env env;
  env.items.reserve(sk.vars.size());
  for (size_t i = 0; i < sk.vars.size(); ++i) env.push(sk.vars[i].name, s.vals[i]);
  return env;
}

Env param_env(const Sketch& sk, const ActionInstance& ai) {
  Env env;
  const ActionDecl& a = sk.actions[ai.action];
  for (size_t i = 0; i < a.params.size(); ++i) env.push(a.params[i].first, ai.params[i]);
  return env;
}

static Env combined_env(const Sketch& sk, const State& s, const ActionInstance& ai) {
  Env env = state_env(sk, s);
  const ActionDecl& a = sk.actions[ai.action];
  for (size_t i = 0; i < a.params.size(); ++i) env.push(a.params[i].first, ai.params[i]);
  return env;
}

Interpretation hole_interp(const Sketch& sk, int hi, const State& s, const ActionInstance& ai) {
  return restrict_to_args(state_env(sk, s), param_env(sk, ai), sk.holes[hi].arg_names);
}

bool is_can_enable(const Sketch& sk, const State& s, const ActionInstance& ai) {
  const ActionDecl& a = sk.actions[ai.action];
  Env env = combined_env(sk, s, ai);
  for (const auto& pre : a.fixed_pres)
    if (!eval(pre, env, sk.sorts).b) return false;
  return true;
}

bool is_enabled(const Sketch& sk, const Completion& c, const State& s, const ActionInstance& ai) {
  if (!is_can_enable(sk, s, ai)) return false;
  const ActionDecl& a = sk.actions[ai.action];
  for (int hi : a.pre_holes) {
    Interpretation interp = hole_interp(sk, hi, s, ai);
    Env env;
    for (size_t i = 0; i < sk.holes[hi].arg_names.size(); ++i)
      env.push(sk.holes[hi].arg_names[i], interp.vals[i]);
    if (!eval(c.exprs[hi], env, sk.sorts).b) return false;
  }
  return true;
}

std::vector<ActionInstance> enabled_instances(const Sketch& sk, const Completion& c,
                                              const State& s) {
  std::vector<ActionInstance> out;
  for (const auto& inst : all_instances(sk))
    if (is_enabled(sk, c, s, inst)) out.push_back(inst);
  return out;
}

State successor(const Sketch& sk, const Completion& c, const State& s, const ActionInstance& ai) {
  if (!is_enabled(sk, c, s, ai)) throw NotEnabledError();
  const ActionDecl& a = sk.actions[ai.action];
  Env env = combined_env(sk, s, ai);
  State t;
  t.vals.reserve(sk.vars.size());
  for (size_t vi = 0; vi < sk.vars.size(); ++vi) {
    const PostClause& pc = a.post_clauses[vi];
    if (pc.hole_index >= 0) {
      int hi = pc.hole_index;
      Interpretation interp = hole_interp(sk, hi, s, ai);
      Env henv;
      for (size_t i = 0; i < sk.holes[hi].arg_names.size(); ++i)
        henv.push(sk.holes[hi].arg_names[i], interp.vals[i]);
      t.vals.push_back(eval(c.exprs[hi], henv, sk.sorts));
    } else {
      t.vals.push_back(eval(pc.fixed, env, sk.sorts));
    }
  }
  return t;
}

bool holds_at(const Sketch& sk, const ExprPtr& prop, const State& s) {
  return eval(prop, state_env(sk, s), sk.sorts).b;
}

namespace {

void enumerate_domain(const ValType& t, const SortTable& sorts, std::vector<Value>& out) {
  switch (t.kind) {
    case TypeKind::Bool:
      out.push_back(Value::boolean(false));
      out.push_back(Value::boolean(true));
      break;
    case TypeKind::Atom: {
      int k = sorts.cardinality_of(t.sort);
      for (int i = 1; i <= k; ++i) out.push_back(Value::atom_of(t.sort, i));
      break;
    }
    case TypeKind::Set: {
      int k = sorts.cardinality_of(t.sort);
      for (uint32_t m = 0; m <= full_mask(k); ++m) out.push_back(Value::set_of(t.sort, m));
      break;
    }
  }
}

}  // namespace

std::vector<State> initial_states(const Sketch& sk, const CheckOptions& opts) {
  std::vector<std::vector<Value>> domains;
  double product = 1;
  for (const auto& v : sk.vars) {
    std::vector<Value> d;
    enumerate_domain(v.type, sk.sorts, d);
    product *= static_cast<double>(d.size());
    domains.push_back(std::move(d));
  }
  if (product > 5e7) throw StateBudgetExceeded();
  std::vector<State> out;
  std::vector<size_t> idx(domains.size(), 0);
  while (true) {
    State s;
    s.vals.reserve(domains.size());
    for (size_t i = 0; i < domains.size(); ++i) s.vals.push_back(domains[i][idx[i]]);
    if (eval(sk.init, state_env(sk, s), sk.sorts).b) {
      out.push_back(std::move(s));
      if (static_cast<long long>(out.size()) > opts.state_budget) throw StateBudgetExceeded();
    }
    int pos = static_cast<int>(domains.size()) - 1;
    while (pos >= 0) {
      if (++idx[pos] < domains[pos].size()) break;
      idx[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
    if (domains.empty()) break;
  }
  return out;
}

StateGraph reachable_graph(const Sketch& sk, const Completion& c, const CheckOptions& opts) {
  StateGraph g;
  std::unordered_map<State, int, StateHash> index;
  auto instances = all_instances(sk);

  auto intern = [&](const State& s) {
    auto it = index.find(s);
    if (it != index.end()) return std::make_pair(it->second, false);
    int id = static_cast<int>(g.states.size());
    if (static_cast<long long>(id) >= opts.state_budget) throw StateBudgetExceeded();
    g.states.push_back(s);
    g.out.emplace_back();
    g.parent_edge.push_back(-1);
    index.emplace(s, id);
    return std::make_pair(id, true);
  };

  for (const auto& s : initial_states(sk, opts)) {
    auto [id, fresh] = intern(s);
    if (fresh) g.initial.push_back(id);
  }

  // Level-synchronized expansion: successor lists may be computed by worker
  // threads but are merged in frontier order, so numbering matches workers=1.
  std::vector<int> frontier = g.initial;
  while (!frontier.empty()) {
    std::vector<std::vector<std::pair<ActionInstance, State>>> results(frontier.size());
    auto expand = [&](size_t i) {
      const State s = g.states[frontier[i]];
      for (const auto& inst : instances)
        if (is_enabled(sk, c, s, inst)) results[i].emplace_back(inst, successor(sk, c, s, inst));
    };
    int workers = std::max(1, opts.workers);
    if (workers > 1 && frontier.size() > 1) {
      std::vector<std::thread> pool;
      std::atomic<size_t> next{0};
      for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
          size_t i;
          while ((i = next.fetch_add(1)) < frontier.size()) expand(i);
        });
      for (auto& t : pool) t.join();
    } else {
      for (size_t i = 0; i < frontier.size(); ++i) expand(i);
    }
    std::vector<int> next_frontier;
    for (size_t i = 0; i < frontier.size(); ++i) {
      int from = frontier[i];
      for (auto& [inst, t] : results[i]) {
        auto [to, fresh] = intern(t);
        int eid = static_cast<int>(g.edges.size());
        g.edges.push_back({from, inst, to});
        g.out[from].push_back(eid);
        if (fresh) {
          g.parent_edge[to] = eid;
          next_frontier.push_back(to);
        }
      }
    }
    frontier = std::move(next_frontier);
  }
  return g;
}

namespace {

// Per-property restricted subgraph search. Mode 1 marks positions from which
// the violating suffix runs: for eventually(P) the whole run stays in ~P; for
// leadsto(P, Q) the suffix starts at a (P and ~Q) state and stays in ~Q.
struct ModeReach {
  // discovery order of (state, mode) pairs
  std::vector<std::pair<int, int>> order;
  std::vector<std::array<int, 2>> parent;  // product parent: encoded pair index, -1 none
  std::vector<std::array<int, 2>> parent_edge_id;  // graph edge id, -2 epsilon, -1 none
  std::vector<std::array<bool, 2>> seen;

  int entry_of(int state, int mode) const { return state * 2 + mode; }
};

struct LivenessCtx {
  const Sketch& sk;
  const Completion& c;
  const StateGraph& g;
  const Property& prop;

  bool suffix_ok(int state) const {
    // State predicate the violating suffix must keep satisfying.
    if (prop.kind == Property::Kind::Eventually) return !holds_at(sk, prop.a, g.states[state]);
    return !holds_at(sk, prop.b, g.states[state]);
  }
  bool can_enter_mode1(int state) const {
    if (prop.kind == Property::Kind::Eventually) return suffix_ok(state);
    return holds_at(sk, prop.a, g.states[state]) && suffix_ok(state);
  }
};

ModeReach mode_reach(const LivenessCtx& ctx) {
  const StateGraph& g = ctx.g;
  ModeReach mr;
  mr.parent.assign(g.states.size(), {-1, -1});
  mr.parent_edge_id.assign(g.states.size(), {-1, -1});
  mr.seen.assign(g.states.size(), {false, false});
  std::deque<std::pair<int, int>> queue;

  auto push = [&](int state, int mode, int parent_pair, int via_edge) {
    if (mr.seen[state][mode]) return;
    mr.seen[state][mode] = true;
    mr.parent[state][mode] = parent_pair;
    mr.parent_edge_id[state][mode] = via_edge;
    mr.order.emplace_back(state, mode);
    queue.emplace_back(state, mode);
  };

  for (int init : g.initial) {
    if (ctx.prop.kind == Property::Kind::Eventually) {
      if (ctx.can_enter_mode1(init)) push(init, 1, -1, -1);
    } else {
      push(init, 0, -1, -1);
    }
  }
  while (!queue.empty()) {
    auto [s, mode] = queue.front();
    queue.pop_front();
    if (mode == 0 && ctx.can_enter_mode1(s)) push(s, 1, s * 2 + 0, -2);
    for (int eid : g.out[s]) {
      int t = g.edges[eid].to;
      if (mode == 0)
        push(t, 0, s * 2 + 0, eid);
      else if (ctx.suffix_ok(t))
        push(t, 1, s * 2 + 1, eid);
    }
  }
  return mr;
}

// Reconstructs the run reaching (state, mode): list of edge ids (epsilon steps
// dropped).
std::vector<int> mode_path(const ModeReach& mr, int state, int mode) {
  std::vector<int> rev;
  int s = state, m = mode;
  while (true) {
    int pe = mr.parent_edge_id[s][m];
    int pp = mr.parent[s][m];
    if (pp < 0) break;
    if (pe >= 0) rev.push_back(pe);
    s = pp / 2;
    m = pp % 2;
  }
  std::reverse(rev.begin(), rev.end());
  return rev;
}

struct FairInstanceInfo {
  ActionInstance inst;
  Fairness fairness;
};

// Tarjan over a subgraph; components returned in a deterministic order.
std::vector<std::vector<int>> strongly_connected(const std::vector<int>& nodes,
                                                 const std::map<int, std::vector<int>>& succs) {
  std::map<int, int> indexof, low;
  std::map<int, bool> onstack;
  std::vector<int> stack;
  std::vector<std::vector<int>> out;
  int counter = 0;

  struct Frame {
    int node;
    size_t child = 0;
  };
  for (int root : nodes) {
    if (indexof.count(root)) continue;
    std::vector<Frame> call;
    call.push_back({root});
    indexof[root] = low[root] = counter++;
    stack.push_back(root);
    onstack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      const auto& kids = succs.at(f.node);
      if (f.child < kids.size()) {
        int k = kids[f.child++];
        if (!indexof.count(k)) {
          indexof[k] = low[k] = counter++;
          stack.push_back(k);
          onstack[k] = true;
          call.push_back({k});
        } else if (onstack[k]) {
          low[f.node] = std::min(low[f.node], indexof[k]);
        }
      } else {
        if (low[f.node] == indexof[f.node]) {
          std::vector<int> comp;
          while (true) {
            int v = stack.back();
            stack.pop_back();
            onstack[v] = false;
            comp.push_back(v);
            if (v == f.node) break;
          }
          std::sort(comp.begin(), comp.end());
          out.push_back(std::move(comp));
        }
        int me = f.node;
        call.pop_back();
        if (!call.empty()) low[call.back().node] = std::min(low[call.back().node], low[me]);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct CycleSearch {
  const Sketch& sk;
  const Completion& c;
  const StateGraph& g;
  std::vector<FairInstanceInfo> fair_instances;

  CycleSearch(const Sketch& sk_, const Completion& c_, const StateGraph& g_)
      : sk(sk_), c(c_), g(g_) {
    for (const auto& inst : all_instances(sk)) {
      Fairness f = sk.actions[inst.action].fairness;
      if (f != Fairness::None) fair_instances.push_back({inst, f});
    }
  }

  bool instance_has_edge(const ActionInstance& inst, const std::vector<int>& edge_ids) const {
    for (int eid : edge_ids)
      if (g.edges[eid].inst == inst) return true;
    return false;
  }

  // Streett-style refinement. Returns accepted components, each a sorted state
  // list with its internal edge set.
  std::vector<std::pair<std::vector<int>, std::vector<int>>> accepted_components(
      const std::vector<int>& h_states, const std::vector<int>& h_edges) {
    std::vector<std::pair<std::vector<int>, std::vector<int>>> accepted;
    std::deque<std::pair<std::vector<int>, std::vector<int>>> work;
    work.emplace_back(h_states, h_edges);
    while (!work.empty()) {
      auto [nodes, edge_ids] = work.front();
      work.pop_front();
      if (nodes.empty() || edge_ids.empty()) continue;

      std::set<int> node_set(nodes.begin(), nodes.end());
      std::map<int, std::vector<int>> succs;
      std::map<int, std::vector<int>> out_edges;
      for (int n : nodes) {
        succs[n] = {};
        out_edges[n] = {};
      }
      for (int eid : edge_ids) {
        const auto& e = g.edges[eid];
        if (node_set.count(e.from) && node_set.count(e.to)) {
          succs[e.from].push_back(e.to);
          out_edges[e.from].push_back(eid);
        }
      }
      for (auto comp : strongly_connected(nodes, succs)) {
        std::set<int> comp_set(comp.begin(), comp.end());
        std::vector<int> comp_edges;
        for (int n : comp)
          for (int eid : out_edges[n])
            if (comp_set.count(g.edges[eid].to)) comp_edges.push_back(eid);
        if (comp_edges.empty()) continue;  // single state without self-loop

        // Strongly fair instances enabled inside the component but absent
        // from its edges force their enabled states out of any fair cycle.
        std::set<int> removed;
        for (const auto& fi : fair_instances) {
          if (fi.fairness != Fairness::Strong) continue;
          if (instance_has_edge(fi.inst, comp_edges)) continue;
          for (int n : comp)
            if (is_enabled(sk, c, g.states[n], fi.inst)) removed.insert(n);
        }
        if (!removed.empty()) {
          std::vector<int> rest;
          for (int n : comp)
            if (!removed.count(n)) rest.push_back(n);
          std::vector<int> rest_edges;
          std::set<int> rest_set(rest.begin(), rest.end());
          for (int eid : comp_edges)
            if (rest_set.count(g.edges[eid].from) && rest_set.count(g.edges[eid].to))
              rest_edges.push_back(eid);
          if (!rest.empty() && !rest_edges.empty()) work.emplace_back(rest, rest_edges);
          continue;
        }
        // Weak fairness: an untaken weakly fair instance enabled at every
        // component state excludes every cycle inside the component.
        bool weak_excluded = false;
        for (const auto& fi : fair_instances) {
          if (fi.fairness != Fairness::Weak) continue;
          if (instance_has_edge(fi.inst, comp_edges)) continue;
          bool everywhere = true;
          for (int n : comp)
            if (!is_enabled(sk, c, g.states[n], fi.inst)) {
              everywhere = false;
              break;
            }
          if (everywhere) {
            weak_excluded = true;
            break;
          }
        }
        if (!weak_excluded) accepted.emplace_back(comp, comp_edges);
      }
    }
    return accepted;
  }

  // Closed walk from `start` covering every edge of the component.
  std::vector<int> covering_walk(const std::vector<int>& comp, const std::vector<int>& edge_ids,
                                 int start) const {
    std::set<int> comp_set(comp.begin(), comp.end());
    std::map<int, std::vector<int>> adj;
    for (int n : comp) adj[n] = {};
    for (int eid : edge_ids) adj[g.edges[eid].from].push_back(eid);

    auto shortest = [&](int from, int to) {
      std::map<int, int> via;
      std::deque<int> q{from};
      std::set<int> seen{from};
      while (!q.empty()) {
        int n = q.front();
        q.pop_front();
        if (n == to) break;
        for (int eid : adj[n]) {
          int t = g.edges[eid].to;
          if (seen.insert(t).second) {
            via[t] = eid;
            q.push_back(t);
          }
        }
      }
      std::vector<int> rev;
      int cur = to;
      while (cur != from) {
        int eid = via.at(cur);
        rev.push_back(eid);
        cur = g.edges[eid].from;
      }
      std::reverse(rev.begin(), rev.end());
      return rev;
    };

    std::vector<int> walk;
    int cur = start;
    std::vector<int> ordered = edge_ids;
    std::sort(ordered.begin(), ordered.end());
    for (int eid : ordered) {
      for (int step : shortest(cur, g.edges[eid].from)) walk.push_back(step);
      walk.push_back(eid);
      cur = g.edges[eid].to;
    }
    for (int step : shortest(cur, start)) walk.push_back(step);
    return walk;
  }
};

}  // namespace

CheckResult check(const Sketch& sk, const Completion& c, const std::vector<Property>& props,
                  const CheckOptions& opts) {
  CheckResult result;
  StateGraph g = reachable_graph(sk, c, opts);
  result.states_explored = static_cast<long long>(g.states.size());

  auto build_run = [&](const std::vector<int>& edge_path, int final_state) {
    std::pair<std::vector<State>, std::vector<ActionInstance>> run;
    if (edge_path.empty()) {
      run.first.push_back(g.states[final_state]);
      return run;
    }
    run.first.push_back(g.states[g.edges[edge_path.front()].from]);
    for (int eid : edge_path) {
      run.second.push_back(g.edges[eid].inst);
      run.first.push_back(g.states[g.edges[eid].to]);
    }
    return run;
  };

  // 1. safety
  for (size_t idx = 0; idx < g.states.size(); ++idx) {
    for (size_t pi = 0; pi < props.size(); ++pi) {
      if (props[pi].kind != Property::Kind::Always) continue;
      if (!holds_at(sk, props[pi].a, g.states[idx])) {
        Counterexample cex;
        cex.kind = CexKind::Safety;
        cex.property_index = static_cast<int>(pi);
        auto run = build_run(g.path_to(static_cast<int>(idx)), static_cast<int>(idx));
        cex.states = std::move(run.first);
        cex.taken = std::move(run.second);
        result.ok = false;
        result.cex = std::move(cex);
        return result;
      }
    }
  }

  // 2. deadlock
  if (opts.check_deadlock) {
    for (size_t idx = 0; idx < g.states.size(); ++idx) {
      if (g.out[idx].empty()) {
        Counterexample cex;
        cex.kind = CexKind::Deadlock;
        auto run = build_run(g.path_to(static_cast<int>(idx)), static_cast<int>(idx));
        cex.states = std::move(run.first);
        cex.taken = std::move(run.second);
        result.ok = false;
        result.cex = std::move(cex);
        return result;
      }
    }
  }

  // 3. liveness lassos
  CycleSearch cs(sk, c, g);
  for (size_t pi = 0; pi < props.size(); ++pi) {
    if (props[pi].kind == Property::Kind::Always) continue;
    LivenessCtx ctx{sk, c, g, props[pi]};
    ModeReach mr = mode_reach(ctx);
    std::vector<int> h_states;
    for (size_t s = 0; s < g.states.size(); ++s)
      if (mr.seen[s][1]) h_states.push_back(static_cast<int>(s));
    if (h_states.empty()) continue;
    std::set<int> h_set(h_states.begin(), h_states.end());
    std::vector<int> h_edges;
    for (size_t eid = 0; eid < g.edges.size(); ++eid) {
      const auto& e = g.edges[eid];
      if (h_set.count(e.from) && h_set.count(e.to) && ctx.suffix_ok(e.to))
        h_edges.push_back(static_cast<int>(eid));
    }
    auto accepted = cs.accepted_components(h_states, h_edges);
    if (accepted.empty()) continue;
    std::set<int> accepted_states;
    for (const auto& [comp, edges] : accepted)
      accepted_states.insert(comp.begin(), comp.end());
    // First accepted state in product-BFS discovery order gives the shortest
    // violating prefix.
    int entry = -1;
    for (const auto& [s, mode] : mr.order) {
      if (mode == 1 && accepted_states.count(s)) {
        entry = s;
        break;
      }
    }
    if (entry < 0) continue;
    const std::pair<std::vector<int>, std::vector<int>>* chosen = nullptr;
    for (const auto& comp : accepted) {
      if (std::binary_search(comp.first.begin(), comp.first.end(), entry)) {
        chosen = &comp;
        break;
      }
    }
    std::vector<int> walk = cs.covering_walk(chosen->first, chosen->second, entry);

    Counterexample cex;
    cex.kind = CexKind::Liveness;
    cex.property_index = static_cast<int>(pi);
    auto run = build_run(mode_path(mr, entry, 1), entry);
    cex.loop_start = static_cast<int>(run.first.size()) - 1;
    for (int eid : walk) {
      run.second.push_back(g.edges[eid].inst);
      run.first.push_back(g.states[g.edges[eid].to]);
    }
    cex.states = std::move(run.first);
    cex.taken = std::move(run.second);
    assert(cex.states[cex.loop_start] == cex.states.back());
    // Tripwire: the returned loop must not be excluded by any fairness
    // constraint.
    {
      std::vector<State> loop_states = cex.cycle_states();
      std::vector<ActionInstance> loop_taken = cex.cycle_taken();
      for (const auto& fi : cs.fair_instances) {
        bool taken = false;
        for (const auto& t : loop_taken)
          if (t == fi.inst) taken = true;
        if (taken) continue;
        if (fi.fairness == Fairness::Strong) {
          for (const auto& s : loop_states)
            if (is_enabled(sk, c, s, fi.inst))
              throw std::logic_error("liveness loop is a strongly fair cycle");
        } else {
          bool everywhere = true;
          for (const auto& s : loop_states)
            if (!is_enabled(sk, c, s, fi.inst)) everywhere = false;
          if (everywhere) throw std::logic_error("liveness loop is a weakly fair cycle");
        }
      }
    }
    result.ok = false;
    result.cex = std::move(cex);
    return result;
  }

  // 4. stuttering
  auto instances = all_instances(sk);
  for (size_t pi = 0; pi < props.size(); ++pi) {
    if (props[pi].kind == Property::Kind::Always) continue;
    LivenessCtx ctx{sk, c, g, props[pi]};
    ModeReach mr = mode_reach(ctx);
    for (const auto& [s, mode] : mr.order) {
      if (mode != 1) continue;
      bool any_enabled = false;
      bool fair_all_selfloop = true;
      for (const auto& inst : instances) {
        if (!is_enabled(sk, c, g.states[s], inst)) continue;
        any_enabled = true;
        if (sk.actions[inst.action].fairness != Fairness::None) {
          if (!(successor(sk, c, g.states[s], inst) == g.states[s])) {
            fair_all_selfloop = false;
            break;
          }
        }
      }
      if (!any_enabled || !fair_all_selfloop) continue;
      Counterexample cex;
      cex.kind = CexKind::Stuttering;
      cex.property_index = static_cast<int>(pi);
      auto run = build_run(mode_path(mr, s, 1), s);
      cex.states = std::move(run.first);
      cex.taken = std::move(run.second);
      result.ok = false;
      result.cex = std::move(cex);
      return result;
    }
  }

  return result;
}

}  // namespace protosynth
