#include "protosynth/pruning.hpp"

#include <cassert>

namespace protosynth {

PruningConstraint PruningConstraint::make_atom(PruneAtom a) {
  PruningConstraint pc;
  pc.kind = Kind::Atom;
  pc.atom = std::move(a);
  return pc;
}

PruningConstraint PruningConstraint::disjunction(std::vector<PruningConstraint> kids) {
  PruningConstraint pc;
  pc.kind = Kind::Or;
  pc.children = std::move(kids);
  return pc;
}

PruningConstraint PruningConstraint::conjunction(std::vector<PruningConstraint> kids) {
  PruningConstraint pc;
  pc.kind = Kind::And;
  pc.children = std::move(kids);
  return pc;
}

namespace {

Env interp_env(const Sketch& sk, int hi, const Interpretation& interp) {
  Env env;
  const HoleDecl& h = sk.holes[hi];
  for (size_t i = 0; i < h.arg_names.size(); ++i) env.push(h.arg_names[i], interp.vals[i]);
  return env;
}

Value hole_value(const Sketch& sk, const Completion& c, int hi, const Interpretation& interp) {
  return eval(c.exprs[hi], interp_env(sk, hi, interp), sk.sorts);
}

std::vector<int> post_holes_of(const Sketch& sk, int action) {
  std::vector<int> out;
  const ActionDecl& a = sk.actions[action];
  for (const auto& pc : a.post_clauses)
    if (pc.hole_index >= 0) out.push_back(pc.hole_index);
  return out;
}

}  // namespace

PruningConstraint chi_move(const Sketch& sk, const std::vector<ActionInstance>& insts,
                           const std::vector<State>& states, const Completion& c) {
  std::vector<PruningConstraint> disjuncts;
  for (const auto& inst : insts) {
    for (const auto& s : states) {
      for (int hi : post_holes_of(sk, inst.action)) {
        PruneAtom atom;
        atom.hole = sk.holes[hi].name;
        atom.interp = hole_interp(sk, hi, s, inst);
        atom.constant = hole_value(sk, c, hi, atom.interp);
        disjuncts.push_back(PruningConstraint::make_atom(std::move(atom)));
      }
    }
  }
  return PruningConstraint::disjunction(std::move(disjuncts));
}

PruningConstraint chi_disable(const Sketch& sk, const std::vector<ActionInstance>& insts,
                              const std::vector<State>& states) {
  std::vector<PruningConstraint> disjuncts;
  for (const auto& inst : insts) {
    for (const auto& s : states) {
      for (int hi : sk.actions[inst.action].pre_holes) {
        PruneAtom atom;
        atom.hole = sk.holes[hi].name;
        atom.interp = hole_interp(sk, hi, s, inst);
        atom.constant = Value::boolean(true);
        disjuncts.push_back(PruningConstraint::make_atom(std::move(atom)));
      }
    }
  }
  return PruningConstraint::disjunction(std::move(disjuncts));
}

PruningConstraint chi_enable(const Sketch& sk, const std::vector<ActionInstance>& insts,
                             const std::vector<State>& states) {
  std::vector<PruningConstraint> disjuncts;
  for (const auto& inst : insts) {
    std::vector<PruningConstraint> conjuncts;
    for (const auto& s : states) {
      for (int hi : sk.actions[inst.action].pre_holes) {
        PruneAtom atom;
        atom.hole = sk.holes[hi].name;
        atom.interp = hole_interp(sk, hi, s, inst);
        atom.constant = Value::boolean(false);
        conjuncts.push_back(PruningConstraint::make_atom(std::move(atom)));
      }
    }
    disjuncts.push_back(PruningConstraint::conjunction(std::move(conjuncts)));
  }
  return PruningConstraint::disjunction(std::move(disjuncts));
}

namespace {

// The path part shared by every generalizer: move a taken transition to a
// different state or disable it.
PruningConstraint path_constraint(const Counterexample& r, const Completion& c,
                                  const Sketch& sk) {
  std::vector<PruningConstraint> disjuncts;
  for (size_t i = 0; i < r.taken.size(); ++i) {
    disjuncts.push_back(chi_move(sk, {r.taken[i]}, {r.states[i]}, c));
    disjuncts.push_back(chi_disable(sk, {r.taken[i]}, {r.states[i]}));
  }
  return PruningConstraint::disjunction(std::move(disjuncts));
}

}  // namespace

PruningConstraint gen_safe(const Counterexample& r, const Completion& c, const Sketch& sk) {
  if (r.kind != CexKind::Safety) throw KindMismatchError();
  return path_constraint(r, c, sk);
}

PruningConstraint gen_dead(const Counterexample& r, const Completion& c, const Sketch& sk) {
  if (r.kind != CexKind::Deadlock) throw KindMismatchError();
  const State& last = r.states.back();
  std::vector<ActionInstance> can_enable;
  for (const auto& inst : all_instances(sk))
    if (is_can_enable(sk, last, inst)) can_enable.push_back(inst);
  return PruningConstraint::disjunction(
      {path_constraint(r, c, sk), chi_enable(sk, can_enable, {last})});
}

PruningConstraint gen_live(const Counterexample& r, const Completion& c, const Sketch& sk) {
  if (r.kind != CexKind::Liveness) throw KindMismatchError();
  std::vector<State> cycle = r.cycle_states();
  std::vector<ActionInstance> loop_taken = r.cycle_taken();
  auto taken_in_loop = [&](const ActionInstance& inst) {
    for (const auto& t : loop_taken)
      if (t == inst) return true;
    return false;
  };

  std::vector<ActionInstance> acts_weak;
  for (const auto& inst : all_instances(sk)) {
    if (sk.actions[inst.action].fairness != Fairness::Weak) continue;
    if (taken_in_loop(inst)) continue;
    bool everywhere = true;
    for (const auto& s : cycle)
      if (!is_can_enable(sk, s, inst)) {
        everywhere = false;
        break;
      }
    if (everywhere) acts_weak.push_back(inst);
  }

  std::vector<PruningConstraint> disjuncts;
  disjuncts.push_back(path_constraint(r, c, sk));
  disjuncts.push_back(chi_enable(sk, acts_weak, cycle));
  for (const auto& s : cycle) {
    // Strongly fair, disabled, can-enable instances; instances already taken
    // in the loop are skipped, since enabling one of those cannot turn the
    // loop into a strongly fair cycle.
    std::vector<ActionInstance> acts_strong;
    for (const auto& inst : all_instances(sk)) {
      if (sk.actions[inst.action].fairness != Fairness::Strong) continue;
      if (taken_in_loop(inst)) continue;
      if (!is_can_enable(sk, s, inst)) continue;
      if (is_enabled(sk, c, s, inst)) continue;
      acts_strong.push_back(inst);
    }
    disjuncts.push_back(chi_enable(sk, acts_strong, {s}));
  }
  return PruningConstraint::disjunction(std::move(disjuncts));
}

PruningConstraint gen_stut(const Counterexample& r, const Completion& c, const Sketch& sk) {
  if (r.kind != CexKind::Stuttering) throw KindMismatchError();
  const State& last = r.states.back();
  std::vector<ActionInstance> acts_enabled, acts_disabled;
  for (const auto& inst : all_instances(sk)) {
    if (sk.actions[inst.action].fairness == Fairness::None) continue;
    if (is_enabled(sk, c, last, inst)) {
      acts_enabled.push_back(inst);
    } else if (is_can_enable(sk, last, inst)) {
      acts_disabled.push_back(inst);
    }
  }
  return PruningConstraint::disjunction({path_constraint(r, c, sk),
                                         chi_move(sk, acts_enabled, {last}, c),
                                         chi_enable(sk, acts_disabled, {last})});
}

namespace {

// True when every non-hole post-clause of the instance keeps its variable's
// value at s.
bool state_equivalent(const Sketch& sk, const State& s, const ActionInstance& inst) {
  const ActionDecl& a = sk.actions[inst.action];
  Env env = state_env(sk, s);
  for (size_t i = 0; i < a.params.size(); ++i) env.push(a.params[i].first, inst.params[i]);
  for (size_t vi = 0; vi < a.post_clauses.size(); ++vi) {
    const PostClause& pc = a.post_clauses[vi];
    if (pc.hole_index >= 0) continue;
    if (!(eval(pc.fixed, env, sk.sorts) == s.vals[vi])) return false;
  }
  return true;
}

}  // namespace

PruningConstraint gen_stut_alt(const Counterexample& r, const Completion& c, const Sketch& sk) {
  if (r.kind != CexKind::Stuttering) throw KindMismatchError();
  const State& last = r.states.back();

  std::vector<ActionInstance> acts_eq, acts_neq;
  for (const auto& inst : all_instances(sk)) {
    if (sk.actions[inst.action].fairness == Fairness::None) continue;
    if (!is_can_enable(sk, last, inst)) continue;
    if (state_equivalent(sk, last, inst))
      acts_eq.push_back(inst);
    else
      acts_neq.push_back(inst);
  }

  // chi_unstut: some fair state-equivalent instance is enabled and one of its
  // post-holes moves its variable off the current value.
  std::vector<PruningConstraint> unstut;
  for (const auto& inst : acts_eq) {
    std::vector<PruningConstraint> pre_atoms;
    for (int hi : sk.actions[inst.action].pre_holes) {
      PruneAtom atom;
      atom.hole = sk.holes[hi].name;
      atom.interp = hole_interp(sk, hi, last, inst);
      atom.constant = Value::boolean(false);
      pre_atoms.push_back(PruningConstraint::make_atom(std::move(atom)));
    }
    std::vector<PruningConstraint> post_atoms;
    for (int hi : post_holes_of(sk, inst.action)) {
      PruneAtom atom;
      atom.hole = sk.holes[hi].name;
      atom.interp = hole_interp(sk, hi, last, inst);
      atom.constant = last.vals[sk.var_index(sk.holes[hi].var)];
      post_atoms.push_back(PruningConstraint::make_atom(std::move(atom)));
    }
    unstut.push_back(PruningConstraint::conjunction(
        {PruningConstraint::conjunction(std::move(pre_atoms)),
         PruningConstraint::disjunction(std::move(post_atoms))}));
  }

  // chi_deadlocked: every instance that could be enabled at the state is
  // disabled by one of its pre-holes. Instances whose fixed pre-conditions
  // already fail contribute nothing; a hole-free can-enable instance cannot
  // be disabled, collapsing the conjunction to FALSE.
  std::vector<PruningConstraint> dead;
  for (const auto& inst : all_instances(sk)) {
    if (!is_can_enable(sk, last, inst)) continue;
    std::vector<PruningConstraint> options;
    for (int hi : sk.actions[inst.action].pre_holes) {
      PruneAtom atom;
      atom.hole = sk.holes[hi].name;
      atom.interp = hole_interp(sk, hi, last, inst);
      atom.constant = Value::boolean(true);
      options.push_back(PruningConstraint::make_atom(std::move(atom)));
    }
    dead.push_back(PruningConstraint::disjunction(std::move(options)));
  }

  return PruningConstraint::disjunction({path_constraint(r, c, sk),
                                         chi_enable(sk, acts_neq, {last}),
                                         PruningConstraint::disjunction(std::move(unstut)),
                                         PruningConstraint::conjunction(std::move(dead))});
}

PruningConstraint generalize(const Counterexample& r, const Completion& c, const Sketch& sk,
                             GeneralizeMode mode) {
  switch (r.kind) {
    case CexKind::Safety: return gen_safe(r, c, sk);
    case CexKind::Deadlock: return gen_dead(r, c, sk);
    case CexKind::Liveness: return gen_live(r, c, sk);
    case CexKind::Stuttering:
      return mode == GeneralizeMode::ExactStuttering ? gen_stut_alt(r, c, sk)
                                                     : gen_stut(r, c, sk);
  }
  throw KindMismatchError();
}

bool satisfies(const Sketch& sk, const Completion& c, const PruningConstraint& pc) {
  switch (pc.kind) {
    case PruningConstraint::Kind::Atom: {
      int hi = sk.hole_index(pc.atom.hole);
      assert(hi >= 0);
      return !(hole_value(sk, c, hi, pc.atom.interp) == pc.atom.constant);
    }
    case PruningConstraint::Kind::Or: {
      for (const auto& k : pc.children)
        if (satisfies(sk, c, k)) return true;
      return false;
    }
    case PruningConstraint::Kind::And: {
      for (const auto& k : pc.children)
        if (!satisfies(sk, c, k)) return false;
      return true;
    }
  }
  return false;
}

bool satisfies_all(const Sketch& sk, const Completion& c, const ConstraintSet& cs) {
  for (const auto& pc : cs.constraints)
    if (!satisfies(sk, c, pc)) return false;
  return true;
}

namespace {

void collect_interps(const Sketch& sk, const PruningConstraint& pc,
                     std::vector<std::vector<Interpretation>>& out) {
  if (pc.kind == PruningConstraint::Kind::Atom) {
    int hi = sk.hole_index(pc.atom.hole);
    assert(hi >= 0);
    auto& list = out[hi];
    for (const auto& existing : list)
      if (existing == pc.atom.interp) return;
    list.push_back(pc.atom.interp);
    return;
  }
  for (const auto& k : pc.children) collect_interps(sk, k, out);
}

}  // namespace

std::vector<std::vector<Interpretation>> interps_of(const Sketch& sk,
                                                    const PruningConstraint& pc) {
  std::vector<std::vector<Interpretation>> out(sk.holes.size());
  collect_interps(sk, pc, out);
  return out;
}

std::vector<std::vector<Interpretation>> ConstraintSet::append(const Sketch& sk,
                                                               PruningConstraint pc) {
  if (per_hole_interps.size() != sk.holes.size()) per_hole_interps.assign(sk.holes.size(), {});
  auto incoming = interps_of(sk, pc);
  constraints.push_back(std::move(pc));
  std::vector<std::vector<Interpretation>> fresh(sk.holes.size());
  for (size_t hi = 0; hi < incoming.size(); ++hi) {
    for (const auto& interp : incoming[hi]) {
      bool known = false;
      for (const auto& existing : per_hole_interps[hi])
        if (existing == interp) {
          known = true;
          break;
        }
      if (!known) {
        per_hole_interps[hi].push_back(interp);
        fresh[hi].push_back(interp);
      }
    }
  }
  return fresh;
}

}  // namespace protosynth
