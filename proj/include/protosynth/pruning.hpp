#pragma once

#include "protosynth/checker.hpp"

namespace protosynth {

// One constraint atom: hole(interp) != constant.
struct PruneAtom {
  std::string hole;
  Interpretation interp;
  Value constant;
};

// And/or tree over atoms. An empty Or denotes FALSE, an empty And TRUE.
struct PruningConstraint {
  enum class Kind { Atom, Or, And };
  Kind kind = Kind::Or;
  PruneAtom atom;
  std::vector<PruningConstraint> children;

  static PruningConstraint make_atom(PruneAtom a);
  static PruningConstraint disjunction(std::vector<PruningConstraint> kids);
  static PruningConstraint conjunction(std::vector<PruningConstraint> kids);
  static PruningConstraint false_() { return disjunction({}); }
  static PruningConstraint true_() { return conjunction({}); }

  bool is_false_unit() const { return kind == Kind::Or && children.empty(); }
  bool is_true_unit() const { return kind == Kind::And && children.empty(); }
};

struct KindMismatchError : std::runtime_error {
  KindMismatchError() : std::runtime_error("counterexample kind mismatch") {}
};

// Accumulated conjunction plus the per-hole interpretation lists it induces
// (first-appearance order, duplicate-free).
struct ConstraintSet {
  std::vector<PruningConstraint> constraints;
  std::vector<std::vector<Interpretation>> per_hole_interps;  // by hole index

  void init(const Sketch& sk) { per_hole_interps.assign(sk.holes.size(), {}); }
  // Appends the constraint and folds its interpretations in. Returns, per
  // hole, the interpretations that are new.
  std::vector<std::vector<Interpretation>> append(const Sketch& sk, PruningConstraint pc);
};

PruningConstraint chi_move(const Sketch& sk, const std::vector<ActionInstance>& insts,
                           const std::vector<State>& states, const Completion& c);
PruningConstraint chi_disable(const Sketch& sk, const std::vector<ActionInstance>& insts,
                              const std::vector<State>& states);
PruningConstraint chi_enable(const Sketch& sk, const std::vector<ActionInstance>& insts,
                             const std::vector<State>& states);

PruningConstraint gen_safe(const Counterexample& r, const Completion& c, const Sketch& sk);
PruningConstraint gen_dead(const Counterexample& r, const Completion& c, const Sketch& sk);
PruningConstraint gen_live(const Counterexample& r, const Completion& c, const Sketch& sk);
PruningConstraint gen_stut(const Counterexample& r, const Completion& c, const Sketch& sk);
PruningConstraint gen_stut_alt(const Counterexample& r, const Completion& c, const Sketch& sk);

enum class GeneralizeMode { Standard, ExactStuttering };

PruningConstraint generalize(const Counterexample& r, const Completion& c, const Sketch& sk,
                             GeneralizeMode mode = GeneralizeMode::Standard);

// Reference satisfaction: atoms are evaluated by substituting the
// interpretation into the completion's expression for the hole.
bool satisfies(const Sketch& sk, const Completion& c, const PruningConstraint& pc);
bool satisfies_all(const Sketch& sk, const Completion& c, const ConstraintSet& cs);

// Per-hole interpretations appearing in the constraint, first-appearance
// order, duplicates removed; aligned with sketch hole order.
std::vector<std::vector<Interpretation>> interps_of(const Sketch& sk,
                                                    const PruningConstraint& pc);

}  // namespace protosynth
