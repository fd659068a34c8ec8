#include <functional>

#include "doctest.h"
#include "oracle.hpp"
#include "protosynth/json_io.hpp"
#include "protosynth/parser.hpp"
#include "protosynth/pruning.hpp"

using namespace protosynth;

namespace {

Completion fill(const Sketch& sk, const std::vector<std::string>& exprs) {
  Completion c;
  for (size_t hi = 0; hi < exprs.size(); ++hi) {
    std::string err;
    ExprPtr e = parse_hole_expr(sk, static_cast<int>(hi), exprs[hi], &err);
    REQUIRE_MESSAGE(e, exprs[hi] << ": " << err);
    c.exprs.push_back(e);
  }
  return c;
}

State all_empty(const Sketch& sk) {
  State s;
  for (const auto& v : sk.vars) s.vals.push_back(Value::set_of(v.type.sort, 0));
  return s;
}

// Count atoms in a constraint tree.
int atom_count(const PruningConstraint& pc) {
  if (pc.kind == PruningConstraint::Kind::Atom) return 1;
  int n = 0;
  for (const auto& k : pc.children) n += atom_count(k);
  return n;
}

}  // namespace

TEST_SUITE("pruning") {
  TEST_CASE("chi_move instantiates post-hole atoms") {
    auto pr = oracle::load_fixture("toy2pc.sketch");
    Completion c = fill(pr.sketch, {"vote_yes union {n}"});
    State s0 = all_empty(pr.sketch);
    ActionInstance vote1{1, {Value::atom_of("Node", 1)}};

    PruningConstraint pc = chi_move(pr.sketch, {vote1}, {s0}, c);
    REQUIRE(pc.kind == PruningConstraint::Kind::Or);
    REQUIRE(pc.children.size() == 1);
    const PruneAtom& atom = pc.children[0].atom;
    CHECK(atom.hole == "h1");
    REQUIRE(atom.interp.vals.size() == 2);
    CHECK(atom.interp.vals[0] == Value::set_of("Node", 0));
    CHECK(atom.interp.vals[1] == Value::atom_of("Node", 1));
    CHECK(atom.constant == Value::set_of("Node", 0b01));

    ActionInstance commit{0, {}};
    CHECK(chi_move(pr.sketch, {commit}, {s0}, c).is_false_unit());
    CHECK(chi_move(pr.sketch, {}, {s0}, c).is_false_unit());
  }

  TEST_CASE("chi_disable and chi_enable over pre-holes") {
    auto pr = oracle::load_fixture("gate.sketch");
    State s0 = all_empty(pr.sketch);
    State s1 = s0;
    s1.vals[0] = Value::set_of("Node", 0b01);
    ActionInstance step2{0, {Value::atom_of("Node", 2)}};

    PruningConstraint dis = chi_disable(pr.sketch, {step2}, {s0});
    REQUIRE(atom_count(dis) == 1);
    CHECK(dis.children[0].atom.hole == "g");
    CHECK(dis.children[0].atom.constant == Value::boolean(true));

    PruningConstraint dis2 = chi_disable(pr.sketch, {step2}, {s0, s1});
    CHECK(atom_count(dis2) == 2);

    PruningConstraint en = chi_enable(pr.sketch, {step2}, {s0, s1});
    REQUIRE(en.kind == PruningConstraint::Kind::Or);
    REQUIRE(en.children.size() == 1);
    CHECK(en.children[0].kind == PruningConstraint::Kind::And);
    CHECK(atom_count(en.children[0]) == 2);
    for (const auto& a : en.children[0].children)
      CHECK(a.atom.constant == Value::boolean(false));

    auto pr2 = oracle::load_fixture("toy2pc.sketch");
    ActionInstance commit{0, {}};
    PruningConstraint en2 = chi_enable(pr2.sketch, {commit}, {all_empty(pr2.sketch)});
    REQUIRE(en2.children.size() == 1);
    CHECK(en2.children[0].is_true_unit());
    CHECK(chi_enable(pr2.sketch, {}, {}).is_false_unit());
  }

  TEST_CASE("gen_safe matches the hand derivation on the 2pc run") {
    auto pr = oracle::load_fixture("toy2pc.sketch");
    Completion c = fill(pr.sketch, {"vote_yes union {n}"});
    ParseResult scratch = parse_sketch(R"(
sort Node 2
var vote_yes : set Node
var go_commit : set Node
var go_abort : set Node
init true
property: always(go_commit = {})
)");
    REQUIRE(scratch.ok);
    CheckResult r = check(pr.sketch, c, scratch.props);
    REQUIRE(!r.ok);
    REQUIRE(r.cex->kind == CexKind::Safety);

    PruningConstraint pc = gen_safe(*r.cex, c, pr.sketch);
    // Two effective atoms: move VoteYes(Node1) off s0, move VoteYes(Node2)
    // off s1; GoCommit has no holes and contributes empty units.
    REQUIRE(atom_count(pc) == 2);
    CHECK(!satisfies(pr.sketch, c, pc));
    CHECK(satisfies(pr.sketch, fill(pr.sketch, {"vote_yes"}), pc));
    CHECK(satisfies(pr.sketch, fill(pr.sketch, {"{}"}), pc));

    auto interps = interps_of(pr.sketch, pc);
    REQUIRE(interps.size() == 1);
    CHECK(interps[0].size() == 2);

    CHECK_THROWS_AS(gen_dead(*r.cex, c, pr.sketch), KindMismatchError);
  }

  TEST_CASE("length-zero safety run generalizes to FALSE") {
    ParseResult pr = parse_sketch(R"(
sort Node 2
var s : set Node
init s = {}
action Grow(n : Node)
  post: s' = ?h(s, n)
hole h grammar:
  E ::= s | {n} | (E union E)
property: always(~(s = {}))
)");
    REQUIRE(pr.ok);
    Completion c = fill(pr.sketch, {"s union {n}"});
    CheckResult r = check(pr.sketch, c, pr.props);
    REQUIRE(!r.ok);
    REQUIRE(r.cex->kind == CexKind::Safety);
    CHECK(r.cex->taken.empty());
    PruningConstraint pc = gen_safe(*r.cex, c, pr.sketch);
    CHECK(pc.is_false_unit());
    CHECK(!satisfies(pr.sketch, c, pc));
  }

  TEST_CASE("gen_dead adds the enable disjunct for can-enable instances") {
    auto pr = oracle::load_fixture("gate.sketch");
    Completion c = fill(pr.sketch, {"false", "s union {n}"});
    CheckResult r = check(pr.sketch, c, pr.props);
    REQUIRE(!r.ok);
    REQUIRE(r.cex->kind == CexKind::Deadlock);

    PruningConstraint pc = gen_dead(*r.cex, c, pr.sketch);
    // Empty path part plus chi_enable over both Step instances.
    REQUIRE(pc.kind == PruningConstraint::Kind::Or);
    CHECK(!satisfies(pr.sketch, c, pc));
    CHECK(satisfies(pr.sketch, fill(pr.sketch, {"true", "s union {n}"}), pc));
    CHECK(satisfies(pr.sketch, fill(pr.sketch, {"~(n in s)", "{n}"}), pc));
    CHECK(!satisfies(pr.sketch, fill(pr.sketch, {"n in s", "s"}), pc));
  }

  TEST_CASE("gen_stut enables disabled fair actions at the stutter state") {
    auto pr = oracle::load_fixture("kickstart.sketch");
    Completion c = fill(pr.sketch, {"n in x"});
    CheckResult r = check(pr.sketch, c, pr.props);
    REQUIRE(!r.ok);
    REQUIRE(r.cex->kind == CexKind::Stuttering);
    CHECK(r.cex->states.size() == 1);

    PruningConstraint pc = gen_stut(*r.cex, c, pr.sketch);
    CHECK(!satisfies(pr.sketch, c, pc));
    CHECK(satisfies(pr.sketch, fill(pr.sketch, {"true"}), pc));
    CHECK(satisfies(pr.sketch, fill(pr.sketch, {"~(n in x)"}), pc));
    CHECK(!satisfies(pr.sketch, fill(pr.sketch, {"false"}), pc));

    PruningConstraint alt = gen_stut_alt(*r.cex, c, pr.sketch);
    CHECK(!satisfies(pr.sketch, c, alt));
    CHECK(satisfies(pr.sketch, fill(pr.sketch, {"true"}), alt));
  }

  TEST_CASE("gen_stut moves enabled fair self-loopers off the stutter state") {
    // Hand-built stuttering run at the all-empty state with the identity
    // update: both VoteYes instances are enabled, fair, and self-looping, so
    // the constraint demands one of them produce a different value there.
    auto pr = oracle::load_fixture("toy2pc.sketch");
    Completion c = fill(pr.sketch, {"vote_yes"});
    Counterexample r;
    r.kind = CexKind::Stuttering;
    State s0 = all_empty(pr.sketch);
    r.states = {s0};
    r.property_index = 1;  // eventually(vote_yes = Node)

    PruningConstraint pc = gen_stut(r, c, pr.sketch);
    REQUIRE(atom_count(pc) == 2);
    std::vector<const PruneAtom*> atoms;
    std::function<void(const PruningConstraint&)> collect = [&](const PruningConstraint& n) {
      if (n.kind == PruningConstraint::Kind::Atom) atoms.push_back(&n.atom);
      for (const auto& k : n.children) collect(k);
    };
    collect(pc);
    REQUIRE(atoms.size() == 2);
    for (const auto* a : atoms) {
      CHECK(a->hole == "h1");
      CHECK(a->interp.vals[0] == Value::set_of("Node", 0));
      CHECK(a->constant == Value::set_of("Node", 0));  // e_h1 evaluates to {}
    }
    CHECK(atoms[0]->interp.vals[1] == Value::atom_of("Node", 1));
    CHECK(atoms[1]->interp.vals[1] == Value::atom_of("Node", 2));

    CHECK(!satisfies(pr.sketch, c, pc));
    CHECK(satisfies(pr.sketch, fill(pr.sketch, {"vote_yes union {n}"}), pc));
    CHECK(!satisfies(pr.sketch, fill(pr.sketch, {"{}"}), pc));

    // The exact variant additionally requires the mover to stay enabled;
    // VoteYes has no pre-holes, so the same two atoms arise there.
    PruningConstraint alt = gen_stut_alt(r, c, pr.sketch);
    CHECK(atom_count(alt) == 2);
    CHECK(satisfies(pr.sketch, fill(pr.sketch, {"{n}"}), alt));
  }

  TEST_CASE("gen_live reduces to the path part when no fair action can help") {
    auto pr = oracle::load_fixture("toy2pc_pruned.sketch");
    Completion c = fill(pr.sketch, {"{}"});
    CheckResult r = check(pr.sketch, c, pr.props);
    REQUIRE(!r.ok);
    REQUIRE(r.cex->kind == CexKind::Liveness);
    PruningConstraint pc = gen_live(*r.cex, c, pr.sketch);
    // Every disjunct beyond the transition atoms is an empty unit here:
    // GoCommit is not can-enable at the loop state and the VoteYes instances
    // were taken in the loop.
    int atoms = atom_count(pc);
    CHECK(atoms == static_cast<int>(r.cex->taken.size()));
    CHECK(!satisfies(pr.sketch, c, pc));
    // Toy2pc's full grammar could satisfy it by moving a vote.
    auto full = oracle::load_fixture("toy2pc.sketch");
    CHECK(satisfies(full.sketch, fill(full.sketch, {"vote_yes union {n}"}), pc));
  }

  TEST_CASE("gen_live enables disabled strongly fair instances at loop states") {
    auto pr = oracle::load_fixture("strongboost.sketch");
    Completion c = fill(pr.sketch, {"n in s"});
    CheckResult r = check(pr.sketch, c, pr.props);
    REQUIRE(!r.ok);
    REQUIRE(r.cex->kind == CexKind::Liveness);

    PruningConstraint pc = gen_live(*r.cex, c, pr.sketch);
    // The idle self-loop carries no holes, so the whole constraint comes from
    // the strongly fair Grow instances that stay disabled at the loop state.
    CHECK(atom_count(pc) == 2);
    CHECK(!satisfies(pr.sketch, c, pc));
    CHECK(satisfies(pr.sketch, fill(pr.sketch, {"true"}), pc));
    CHECK(satisfies(pr.sketch, fill(pr.sketch, {"~(n in s)"}), pc));
    CHECK(!satisfies(pr.sketch, fill(pr.sketch, {"false"}), pc));

    // Enabling the guard really does exclude the idle cycle.
    CHECK(!oracle::replay_same_kind(pr.sketch, pr.props, *r.cex,
                                    fill(pr.sketch, {"true"})));
    CHECK(oracle::replay_same_kind(pr.sketch, pr.props, *r.cex,
                                   fill(pr.sketch, {"false"})));
  }

  TEST_CASE("constraint JSON uses nested or/and arrays with atom objects") {
    auto pr = oracle::load_fixture("gate.sketch");
    Completion c = fill(pr.sketch, {"false", "s"});
    CheckResult r = check(pr.sketch, c, pr.props);
    REQUIRE(!r.ok);
    PruningConstraint pc = generalize(*r.cex, c, pr.sketch);
    json doc = constraint_to_json(pr.sketch, pc);
    REQUIRE(doc.contains("or"));
    // Find an atom and check its shape.
    std::function<const json*(const json&)> find_atom = [&](const json& node) -> const json* {
      if (node.contains("atom")) return &node;
      for (const char* key : {"or", "and"})
        if (node.contains(key))
          for (const auto& k : node[key])
            if (const json* hit = find_atom(k)) return hit;
      return nullptr;
    };
    const json* atom = find_atom(doc);
    REQUIRE(atom);
    CHECK((*atom)["atom"].contains("hole"));
    CHECK((*atom)["atom"].contains("interp"));
    CHECK((*atom)["atom"].contains("neq"));
  }

  TEST_CASE("generalize dispatches by kind") {
    auto pr = oracle::load_fixture("toy2pc.sketch");
    Completion c = fill(pr.sketch, {"{}"});
    CheckResult r = check(pr.sketch, c, pr.props);
    REQUIRE(!r.ok);
    PruningConstraint a = generalize(*r.cex, c, pr.sketch);
    PruningConstraint direct = r.cex->kind == CexKind::Liveness ? gen_live(*r.cex, c, pr.sketch)
                               : r.cex->kind == CexKind::Stuttering
                                   ? gen_stut(*r.cex, c, pr.sketch)
                                   : gen_safe(*r.cex, c, pr.sketch);
    CHECK(atom_count(a) == atom_count(direct));
  }

  TEST_CASE("satisfies respects boolean units and conjunction monotonicity") {
    auto pr = oracle::load_fixture("toy2pc.sketch");
    Completion c = fill(pr.sketch, {"vote_yes"});
    CHECK(satisfies(pr.sketch, c, PruningConstraint::true_()));
    CHECK(!satisfies(pr.sketch, c, PruningConstraint::false_()));

    PruneAtom atom;
    atom.hole = "h1";
    atom.interp.vals = {Value::set_of("Node", 0), Value::atom_of("Node", 1)};
    atom.constant = Value::set_of("Node", 0b01);
    PruningConstraint single = PruningConstraint::make_atom(atom);
    CHECK(satisfies(pr.sketch, c, single));  // vote_yes at the empty state is {}
    Completion c2 = fill(pr.sketch, {"vote_yes union {n}"});
    CHECK(!satisfies(pr.sketch, c2, single));

    PruningConstraint both =
        PruningConstraint::conjunction({PruningConstraint::true_(), single});
    CHECK(satisfies(pr.sketch, c, both) == satisfies(pr.sketch, c, single));

    ConstraintSet cs;
    cs.init(pr.sketch);
    cs.append(pr.sketch, single);
    cs.append(pr.sketch, PruningConstraint::true_());
    CHECK(satisfies_all(pr.sketch, c, cs));
    CHECK(!satisfies_all(pr.sketch, c2, cs));
  }

  TEST_CASE("interps_of dedups per hole in first-appearance order") {
    auto pr = oracle::load_fixture("gate.sketch");
    Interpretation a{{Value::set_of("Node", 0), Value::atom_of("Node", 1)}};
    Interpretation b{{Value::set_of("Node", 1), Value::atom_of("Node", 2)}};
    PruneAtom x{"g", a, Value::boolean(true)};
    PruneAtom y{"g", a, Value::boolean(false)};
    PruneAtom z{"h", b, Value::set_of("Node", 0)};
    PruningConstraint pc = PruningConstraint::disjunction(
        {PruningConstraint::make_atom(x),
         PruningConstraint::conjunction(
             {PruningConstraint::make_atom(y), PruningConstraint::make_atom(z)})});
    auto per_hole = interps_of(pr.sketch, pc);
    REQUIRE(per_hole.size() == 2);
    REQUIRE(per_hole[0].size() == 1);  // duplicate interpretation collapsed
    CHECK(per_hole[0][0] == a);
    REQUIRE(per_hole[1].size() == 1);
    CHECK(per_hole[1][0] == b);
    CHECK(interps_of(pr.sketch, PruningConstraint::false_())[0].empty());
  }

  TEST_CASE("self-exclusion holds for every counterexample kind on the fixtures") {
    for (const char* name : {"toy2pc.sketch", "gate.sketch", "gate_strong.sketch",
                             "kickstart.sketch"}) {
      auto pr = oracle::load_fixture(name);
      auto completions = oracle::all_completions(pr.sketch, 2);
      for (const auto& c : completions) {
        CheckResult r = check(pr.sketch, c, pr.props);
        if (r.ok) continue;
        CAPTURE(name);
        CAPTURE(c.key());
        PruningConstraint pc = generalize(*r.cex, c, pr.sketch);
        CHECK(!satisfies(pr.sketch, c, pc));
        if (r.cex->kind == CexKind::Stuttering) {
          PruningConstraint alt = generalize(*r.cex, c, pr.sketch,
                                             GeneralizeMode::ExactStuttering);
          CHECK(!satisfies(pr.sketch, c, alt));
        }
      }
    }
  }

  TEST_CASE("exactness biconditional on small sweeps") {
    // Per counterexample r of c1 and kind in {safety, deadlock, liveness}:
    // c2 satisfies the constraint iff r is not a same-kind counterexample of
    // c2. Stuttering: the standard constraint is sound (never prunes a
    // correct completion); the alternative constraint is exact.
    for (const char* name : {"gate.sketch", "gate_strong.sketch", "kickstart.sketch"}) {
      auto pr = oracle::load_fixture(name);
      auto completions = oracle::all_completions(pr.sketch, 2);
      int swept = 0;
      for (const auto& c1 : completions) {
        CheckResult r = check(pr.sketch, c1, pr.props);
        if (r.ok) continue;
        PruningConstraint pc = generalize(*r.cex, c1, pr.sketch);
        for (const auto& c2 : completions) {
          CAPTURE(name);
          CAPTURE(c1.key());
          CAPTURE(c2.key());
          bool sat = satisfies(pr.sketch, c2, pc);
          if (r.cex->kind == CexKind::Stuttering) {
            if (!sat) {
              CheckResult rc2 = check(pr.sketch, c2, pr.props);
              CHECK(!rc2.ok);
            }
            PruningConstraint alt =
                generalize(*r.cex, c1, pr.sketch, GeneralizeMode::ExactStuttering);
            bool sat_alt = satisfies(pr.sketch, c2, alt);
            bool replay = oracle::replay_same_kind(pr.sketch, pr.props, *r.cex, c2);
            CHECK(sat_alt == !replay);
          } else {
            bool replay = oracle::replay_same_kind(pr.sketch, pr.props, *r.cex, c2);
            CHECK(sat == !replay);
          }
          ++swept;
        }
      }
      CHECK(swept > 0);
    }
  }

  TEST_CASE("constraint sets keep per-hole interpretations in sync") {
    auto pr = oracle::load_fixture("gate.sketch");
    Completion c = fill(pr.sketch, {"false", "s"});
    CheckResult r = check(pr.sketch, c, pr.props);
    REQUIRE(!r.ok);
    PruningConstraint pc = generalize(*r.cex, c, pr.sketch);
    ConstraintSet cs;
    cs.init(pr.sketch);
    auto fresh = cs.append(pr.sketch, pc);
    auto direct = interps_of(pr.sketch, pc);
    REQUIRE(fresh.size() == direct.size());
    for (size_t hi = 0; hi < fresh.size(); ++hi) {
      CHECK(fresh[hi].size() == direct[hi].size());
      CHECK(cs.per_hole_interps[hi].size() == direct[hi].size());
    }
    auto again = cs.append(pr.sketch, pc);
    for (const auto& list : again) CHECK(list.empty());
  }
}
