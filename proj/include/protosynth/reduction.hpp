#pragma once

#include <functional>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "protosynth/pruning.hpp"

namespace protosynth {

// One equivalence class: a nonterminal annotated with the value vector of its
// representative under the hole's interpretation list.
struct ClassEntry {
  std::string nt;
  std::vector<Value> vec;  // one value per interpretation, in list order
  ExprPtr rep;
  int size = 0;  // node count of rep
};

// Reduced search space of a single hole.
struct HoleSpace {
  int hole = -1;
  std::vector<Interpretation> interps;
  std::vector<Env> interp_envs;  // derived, aligned with interps
  std::vector<ClassEntry> classes;  // discovery order, append-only
  std::unordered_map<std::string, int> key_index;
  std::map<std::pair<std::string, int>, std::vector<int>> by_nt_size;
  std::vector<int> start_classes;  // start-symbol classes, discovery order
  int next_size = 1;
  bool closed = false;

  int min_start_size() const;
  int max_start_size() const;
};

struct PickStats {
  long long candidates_enumerated = 0;
  long long candidates_pruned = 0;
};

struct GrowthBudgetExceeded : std::runtime_error {
  GrowthBudgetExceeded() : std::runtime_error("expression size budget exceeded") {}
};

// The global reduced space: per-hole spaces, the accumulated constraints, and
// the deterministic product cursor over class-representative tuples.
class GlobalSpace {
public:
  GlobalSpace() = default;
  GlobalSpace(const Sketch& sk, bool identity_mode = false);

  const Sketch& sketch() const { return *sk_; }
  HoleSpace& hole_space(int hi) { return per_hole_[hi]; }
  const HoleSpace& hole_space(int hi) const { return per_hole_[hi]; }
  size_t hole_count() const { return per_hole_.size(); }
  const ConstraintSet& constraints() const { return constraints_; }
  bool identity_mode() const { return identity_mode_; }

  // Bottom-up enumeration of hole `hi` for sizes up to size_cap; returns the
  // number of classes added. Sets the closed flag once a pass adds nothing
  // and every production over cached classes lands on a cached key.
  int enumerate_pass(int hi, int size_cap);

  // Next candidate in nondecreasing total-size order (ties by hole index,
  // then class discovery order), skipping already verified tuples and, unless
  // no_pruning, tuples failing the accumulated constraints. Returns nullopt
  // when every hole's space is closed and every tuple fails.
  std::optional<Completion> pick(PickStats* stats = nullptr);

  // Records the constraint; filtering happens lazily inside pick.
  void prune(PruningConstraint pc);

  // Folds the constraint's interpretations into the per-hole lists, extends
  // every cached value vector, and resets frontiers so split classes are
  // rediscovered. The product cursor restarts but verified tuples are
  // remembered.
  void abstract_update(const PruningConstraint& pc);

  // Marks the most recently picked candidate as verified (checked by the
  // verifier); it will never be returned again.
  void mark_verified();

  bool no_pruning = false;
  // Invoked inside growth loops; may throw to abort long searches.
  std::function<void()> checkpoint;
  int max_class_size = 255;

  long long total_classes() const;
  long long verified_count() const { return static_cast<long long>(verified_.size()); }

private:
  struct CompiledAtom {
    int hole = -1;
    int interp = -1;  // index into the hole's interpretation list; -1 = slow path
    Value constant;
    Interpretation interp_value;
  };
  struct CompiledNode {
    PruningConstraint::Kind kind = PruningConstraint::Kind::Or;
    CompiledAtom atom;
    std::vector<CompiledNode> children;
  };

  std::string class_key(const HoleSpace& hs, const std::string& nt,
                        const std::vector<Value>& vec, const ExprPtr& rep) const;
  bool try_insert(HoleSpace& hs, const GrammarRule& rule, const std::vector<int>& child_ids,
                  int size);
  bool closure_check(HoleSpace& hs);
  void compile_pending();
  CompiledNode compile(const PruningConstraint& pc) const;
  bool tuple_satisfies(const CompiledNode& node, const std::vector<int>& tuple) const;
  bool cursor_advance();
  void reset_cursor();
  void ensure_growth_for_total();
  Completion completion_for(const std::vector<int>& tuple) const;

  const Sketch* sk_ = nullptr;
  bool identity_mode_ = false;
  std::vector<HoleSpace> per_hole_;
  ConstraintSet constraints_;
  std::vector<CompiledNode> compiled_;

  long long cursor_total_ = -1;
  std::vector<int> cursor_pos_;  // per hole: index into start_classes, -1 fresh
  bool cursor_live_ = false;     // a tuple is currently selected
  bool trivial_emitted_ = false;

  struct VecHash {
    size_t operator()(const std::vector<int>& v) const {
      size_t h = 0x9e3779b97f4a7c15ull;
      for (int x : v) h = h * 1099511628211ull + static_cast<size_t>(x) + 0x100;
      return h;
    }
  };
  std::unordered_set<std::vector<int>, VecHash> verified_;
  std::vector<int> last_picked_;
};

GlobalSpace init_search_space(const Sketch& sk, bool identity_mode = false);

}  // namespace protosynth
