#include "protosynth/reduction.hpp"

#include <algorithm>
#include <cassert>

namespace protosynth {

int HoleSpace::min_start_size() const {
  int m = -1;
  for (int cid : start_classes)
    if (m < 0 || classes[cid].size < m) m = classes[cid].size;
  return m;
}

int HoleSpace::max_start_size() const {
  int m = 0;
  for (int cid : start_classes)
    if (classes[cid].size > m) m = classes[cid].size;
  return m;
}

GlobalSpace::GlobalSpace(const Sketch& sk, bool identity_mode)
    : sk_(&sk), identity_mode_(identity_mode) {
  per_hole_.resize(sk.holes.size());
  for (size_t hi = 0; hi < sk.holes.size(); ++hi) per_hole_[hi].hole = static_cast<int>(hi);
  constraints_.init(sk);
  cursor_pos_.assign(sk.holes.size(), -1);
}

GlobalSpace init_search_space(const Sketch& sk, bool identity_mode) {
  return GlobalSpace(sk, identity_mode);
}

std::string GlobalSpace::class_key(const HoleSpace&, const std::string& nt,
                                   const std::vector<Value>& vec, const ExprPtr& rep) const {
  std::string key = nt;
  key += '|';
  if (identity_mode_) {
    key += pretty(rep);
  } else {
    for (const auto& v : vec) {
      key += v.to_string();
      key += ';';
    }
  }
  return key;
}

bool GlobalSpace::try_insert(HoleSpace& hs, const GrammarRule& rule,
                             const std::vector<int>& child_ids, int size) {
  const HoleDecl& hole = sk_->holes[hs.hole];
  std::vector<Value> vec;
  vec.reserve(hs.interps.size());
  std::vector<Value> fills(child_ids.size(), Value::boolean(false));
  for (size_t i = 0; i < hs.interps.size(); ++i) {
    for (size_t j = 0; j < child_ids.size(); ++j) fills[j] = hs.classes[child_ids[j]].vec[i];
    vec.push_back(eval_template(rule.tmpl, hs.interp_envs[i], fills, sk_->sorts));
  }
  ExprPtr rep;
  if (identity_mode_) {
    std::vector<ExprPtr> kid_reps;
    for (int cid : child_ids) kid_reps.push_back(hs.classes[cid].rep);
    rep = instantiate(rule.tmpl, kid_reps);
  }
  std::string key = class_key(hs, rule.nt, vec, rep);
  if (hs.key_index.count(key)) return false;
  if (!identity_mode_) {
    std::vector<ExprPtr> kid_reps;
    for (int cid : child_ids) kid_reps.push_back(hs.classes[cid].rep);
    rep = instantiate(rule.tmpl, kid_reps);
  }
  assert(node_count(rep) == size);
  int id = static_cast<int>(hs.classes.size());
  hs.classes.push_back({rule.nt, std::move(vec), rep, size});
  hs.key_index.emplace(std::move(key), id);
  hs.by_nt_size[{rule.nt, size}].push_back(id);
  if (rule.nt == hole.grammar.start) hs.start_classes.push_back(id);
  return true;
}

int GlobalSpace::enumerate_pass(int hi, int size_cap) {
  HoleSpace& hs = per_hole_[hi];
  const GrammarDecl& g = sk_->holes[hi].grammar;
  int added = 0;
  for (int s = hs.next_size; s <= size_cap; ++s) {
    if (checkpoint) checkpoint();
    // Alias rules (a bare nonterminal) keep the size unchanged, so each size
    // is swept repeatedly until no rule contributes another class at it.
    int added_this_size = -1;
    while (added_this_size != 0) {
      added_this_size = 0;
      for (const auto& rule : g.rules) {
        int k = static_cast<int>(rule.placeholders.size());
        int ground = rule.ground_nodes;
        if (k == 0) {
          if (ground == s && try_insert(hs, rule, {}, s)) ++added_this_size;
          continue;
        }
        int budget = s - ground;
        if (budget < k) continue;
        // Compositions of `budget` into k positive parts, lexicographic, then
        // an odometer over the cached classes of each placeholder per part.
        std::vector<const std::vector<int>*> lists(k, nullptr);
        std::vector<int> choice(k, 0);
        std::function<void(int, int)> compose = [&](int slot, int remaining) {
          if (slot == k - 1) {
            auto it = hs.by_nt_size.find({rule.placeholders[slot], remaining});
            if (it == hs.by_nt_size.end()) return;
            lists[slot] = &it->second;
            std::vector<int> ids(k);
            std::fill(choice.begin(), choice.end(), 0);
            while (true) {
              for (int j = 0; j < k; ++j) ids[j] = (*lists[j])[choice[j]];
              if (try_insert(hs, rule, ids, s)) ++added_this_size;
              int pos = k - 1;
              while (pos >= 0) {
                if (++choice[pos] < static_cast<int>(lists[pos]->size())) break;
                choice[pos] = 0;
                --pos;
              }
              if (pos < 0) break;
            }
            return;
          }
          for (int take = 1; take <= remaining - (k - slot - 1); ++take) {
            auto it = hs.by_nt_size.find({rule.placeholders[slot], take});
            if (it == hs.by_nt_size.end()) continue;
            lists[slot] = &it->second;
            compose(slot + 1, remaining - take);
          }
        };
        compose(0, budget);
      }
      added += added_this_size;
    }
  }
  if (size_cap >= hs.next_size) hs.next_size = size_cap + 1;
  if (added == 0 && !hs.closed && closure_check(hs)) hs.closed = true;
  return added;
}

bool GlobalSpace::closure_check(HoleSpace& hs) {
  const GrammarDecl& g = sk_->holes[hs.hole].grammar;
  // Classes per nonterminal, any size, discovery order.
  std::map<std::string, std::vector<int>> by_nt;
  for (size_t cid = 0; cid < hs.classes.size(); ++cid)
    by_nt[hs.classes[cid].nt].push_back(static_cast<int>(cid));

  std::vector<Value> fills;
  for (const auto& rule : g.rules) {
    int k = static_cast<int>(rule.placeholders.size());
    if (k == 0) {
      std::vector<Value> vec;
      ExprPtr rep;
      if (identity_mode_) rep = instantiate(rule.tmpl, {});
      for (size_t i = 0; i < hs.interps.size(); ++i)
        vec.push_back(eval_template(rule.tmpl, hs.interp_envs[i], {}, sk_->sorts));
      if (!hs.key_index.count(class_key(hs, rule.nt, vec, rep))) return false;
      continue;
    }
    std::vector<const std::vector<int>*> lists(k);
    bool feasible = true;
    for (int j = 0; j < k; ++j) {
      auto it = by_nt.find(rule.placeholders[j]);
      if (it == by_nt.end() || it->second.empty()) {
        feasible = false;
        break;
      }
      lists[j] = &it->second;
    }
    if (!feasible) continue;
    std::vector<int> choice(k, 0);
    std::vector<int> ids(k);
    fills.assign(k, Value::boolean(false));
    while (true) {
      if (checkpoint) checkpoint();
      for (int j = 0; j < k; ++j) ids[j] = (*lists[j])[choice[j]];
      std::vector<Value> vec;
      vec.reserve(hs.interps.size());
      for (size_t i = 0; i < hs.interps.size(); ++i) {
        for (int j = 0; j < k; ++j) fills[j] = hs.classes[ids[j]].vec[i];
        vec.push_back(eval_template(rule.tmpl, hs.interp_envs[i], fills, sk_->sorts));
      }
      ExprPtr rep;
      if (identity_mode_) {
        std::vector<ExprPtr> kid_reps;
        for (int cid : ids) kid_reps.push_back(hs.classes[cid].rep);
        rep = instantiate(rule.tmpl, kid_reps);
      }
      if (!hs.key_index.count(class_key(hs, rule.nt, vec, rep))) return false;
      int pos = k - 1;
      while (pos >= 0) {
        if (++choice[pos] < static_cast<int>(lists[pos]->size())) break;
        choice[pos] = 0;
        --pos;
      }
      if (pos < 0) break;
    }
  }
  return true;
}

void GlobalSpace::prune(PruningConstraint pc) {
  constraints_.append(*sk_, std::move(pc));
}

void GlobalSpace::abstract_update(const PruningConstraint& pc) {
  auto incoming = interps_of(*sk_, pc);
  bool any_fresh = false;
  for (size_t hi = 0; hi < per_hole_.size(); ++hi) {
    HoleSpace& hs = per_hole_[hi];
    bool fresh = false;
    for (const auto& interp : incoming[hi]) {
      bool known = false;
      for (const auto& existing : hs.interps)
        if (existing == interp) {
          known = true;
          break;
        }
      if (known) continue;
      Env env;
      for (size_t j = 0; j < sk_->holes[hi].arg_names.size(); ++j)
        env.push(sk_->holes[hi].arg_names[j], interp.vals[j]);
      for (auto& entry : hs.classes) entry.vec.push_back(eval(entry.rep, env, sk_->sorts));
      hs.interps.push_back(interp);
      hs.interp_envs.push_back(std::move(env));
      fresh = true;
    }
    if (fresh) {
      any_fresh = true;
      if (!identity_mode_) {
        hs.key_index.clear();
        for (size_t cid = 0; cid < hs.classes.size(); ++cid) {
          const auto& entry = hs.classes[cid];
          hs.key_index.emplace(class_key(hs, entry.nt, entry.vec, entry.rep),
                               static_cast<int>(cid));
        }
      }
      hs.closed = false;
      hs.next_size = 1;
    }
  }
  if (any_fresh) reset_cursor();
  compile_pending();
}

void GlobalSpace::mark_verified() {
  verified_.insert(last_picked_);
}

GlobalSpace::CompiledNode GlobalSpace::compile(const PruningConstraint& pc) const {
  CompiledNode node;
  node.kind = pc.kind;
  if (pc.kind == PruningConstraint::Kind::Atom) {
    node.atom.hole = sk_->hole_index(pc.atom.hole);
    node.atom.constant = pc.atom.constant;
    node.atom.interp_value = pc.atom.interp;
    const HoleSpace& hs = per_hole_[node.atom.hole];
    for (size_t i = 0; i < hs.interps.size(); ++i)
      if (hs.interps[i] == pc.atom.interp) {
        node.atom.interp = static_cast<int>(i);
        break;
      }
    return node;
  }
  for (const auto& k : pc.children) node.children.push_back(compile(k));
  return node;
}

void GlobalSpace::compile_pending() {
  while (compiled_.size() < constraints_.constraints.size())
    compiled_.push_back(compile(constraints_.constraints[compiled_.size()]));
}

bool GlobalSpace::tuple_satisfies(const CompiledNode& node, const std::vector<int>& tuple) const {
  switch (node.kind) {
    case PruningConstraint::Kind::Atom: {
      const HoleSpace& hs = per_hole_[node.atom.hole];
      const ClassEntry& entry = hs.classes[hs.start_classes[tuple[node.atom.hole]]];
      if (node.atom.interp >= 0)
        return !(entry.vec[node.atom.interp] == node.atom.constant);
      Env env;
      const HoleDecl& h = sk_->holes[node.atom.hole];
      for (size_t j = 0; j < h.arg_names.size(); ++j)
        env.push(h.arg_names[j], node.atom.interp_value.vals[j]);
      return !(eval(entry.rep, env, sk_->sorts) == node.atom.constant);
    }
    case PruningConstraint::Kind::Or: {
      for (const auto& k : node.children)
        if (tuple_satisfies(k, tuple)) return true;
      return false;
    }
    case PruningConstraint::Kind::And: {
      for (const auto& k : node.children)
        if (!tuple_satisfies(k, tuple)) return false;
      return true;
    }
  }
  return false;
}

void GlobalSpace::reset_cursor() {
  cursor_total_ = -1;
  cursor_pos_.assign(per_hole_.size(), -1);
  cursor_live_ = false;
}

void GlobalSpace::ensure_growth_for_total() {
  // Every hole must be enumerated far enough that tuples at the current total
  // cannot involve a class that has not been materialized yet.
  long long min_sum = 0;
  for (const auto& hs : per_hole_) min_sum += hs.min_start_size();
  for (auto& hs : per_hole_) {
    if (hs.closed) continue;
    long long cap = cursor_total_ - (min_sum - hs.min_start_size());
    if (cap > max_class_size) throw GrowthBudgetExceeded();
    if (cap >= hs.next_size) enumerate_pass(hs.hole, static_cast<int>(cap));
  }
}

bool GlobalSpace::cursor_advance() {
  const int n = static_cast<int>(per_hole_.size());
  std::vector<long long> smin(n + 1, 0), smax(n + 1, 0);
  for (int i = n - 1; i >= 0; --i) {
    smin[i] = smin[i + 1] + per_hole_[i].min_start_size();
    smax[i] = smax[i + 1] + per_hole_[i].max_start_size();
  }
  std::vector<long long> prefix(n + 1, 0);
  auto size_of = [&](int hole, int idx) {
    const HoleSpace& hs = per_hole_[hole];
    return static_cast<long long>(hs.classes[hs.start_classes[idx]].size);
  };

  int i;
  if (!cursor_live_) {
    i = 0;
    cursor_pos_[0] = -1;
    prefix[0] = 0;
  } else {
    i = n - 1;
    prefix[0] = 0;
    for (int j = 0; j < n - 1; ++j) prefix[j + 1] = prefix[j] + size_of(j, cursor_pos_[j]);
  }
  while (true) {
    long long rem = cursor_total_ - prefix[i];
    const auto& list = per_hole_[i].start_classes;
    int idx = cursor_pos_[i] + 1;
    int found = -1;
    for (; idx < static_cast<int>(list.size()); ++idx) {
      long long after = rem - per_hole_[i].classes[list[idx]].size;
      if (i == n - 1) {
        if (after == 0) {
          found = idx;
          break;
        }
      } else if (after >= smin[i + 1] && after <= smax[i + 1]) {
        found = idx;
        break;
      }
    }
    if (found >= 0) {
      cursor_pos_[i] = found;
      if (i == n - 1) {
        cursor_live_ = true;
        return true;
      }
      prefix[i + 1] = prefix[i] + size_of(i, found);
      ++i;
      cursor_pos_[i] = -1;
    } else {
      cursor_pos_[i] = -1;
      if (i == 0) {
        cursor_live_ = false;
        return false;
      }
      --i;
    }
  }
}

Completion GlobalSpace::completion_for(const std::vector<int>& tuple) const {
  Completion c;
  c.exprs.resize(per_hole_.size());
  c.provenance.resize(per_hole_.size());
  for (size_t hi = 0; hi < per_hole_.size(); ++hi) {
    const HoleSpace& hs = per_hole_[hi];
    const ClassEntry& entry = hs.classes[hs.start_classes[tuple[hi]]];
    c.exprs[hi] = entry.rep;
    std::string label = entry.nt + "|";
    for (const auto& v : entry.vec) {
      label += v.to_string();
      label += ';';
    }
    c.provenance[hi] = std::move(label);
  }
  return c;
}

long long GlobalSpace::total_classes() const {
  long long n = 0;
  for (const auto& hs : per_hole_) n += static_cast<long long>(hs.classes.size());
  return n;
}

std::optional<Completion> GlobalSpace::pick(PickStats* stats) {
  compile_pending();
  const int n = static_cast<int>(per_hole_.size());
  if (n == 0) {
    if (trivial_emitted_) return std::nullopt;
    trivial_emitted_ = true;
    last_picked_.clear();
    if (stats) ++stats->candidates_enumerated;
    return Completion{};
  }

  while (true) {
    if (checkpoint) checkpoint();
    if (cursor_total_ < 0) {
      // Materialize at least one class per hole.
      for (auto& hs : per_hole_) {
        while (hs.start_classes.empty() && !hs.closed) {
          if (hs.next_size > max_class_size) throw GrowthBudgetExceeded();
          enumerate_pass(hs.hole, hs.next_size);
        }
        if (hs.start_classes.empty()) return std::nullopt;  // no derivable expression
      }
      cursor_total_ = 0;
      for (const auto& hs : per_hole_) cursor_total_ += hs.min_start_size();
      cursor_pos_.assign(per_hole_.size(), -1);
      cursor_live_ = false;
      ensure_growth_for_total();
    }
    while (cursor_advance()) {
      if (verified_.count(cursor_pos_)) continue;
      if (stats) ++stats->candidates_enumerated;
      if (!no_pruning) {
        bool ok = true;
        for (const auto& node : compiled_)
          if (!tuple_satisfies(node, cursor_pos_)) {
            ok = false;
            break;
          }
        if (!ok) {
          if (stats) ++stats->candidates_pruned;
          continue;
        }
      }
      last_picked_ = cursor_pos_;
      return completion_for(cursor_pos_);
    }
    // Exhausted the current total.
    ++cursor_total_;
    cursor_pos_.assign(per_hole_.size(), -1);
    cursor_live_ = false;
    long long tmax = 0;
    for (const auto& hs : per_hole_) tmax += hs.max_start_size();
    if (cursor_total_ <= tmax) {
      ensure_growth_for_total();
      continue;
    }
    // Beyond every materialized tuple: grow open spaces one size step. A
    // class can surface at a size far above the frontier of the other holes,
    // so the total cursor rewinds to the smallest total the new class can
    // participate in; already-emitted tuples fail the constraint recheck or
    // sit in the verified set.
    bool all_closed = true;
    long long rewind = -1;
    long long min_sum = 0;
    for (const auto& hs : per_hole_) min_sum += hs.min_start_size();
    for (auto& hs : per_hole_) {
      if (hs.closed) continue;
      all_closed = false;
      if (hs.next_size > max_class_size) throw GrowthBudgetExceeded();
      size_t before = hs.classes.size();
      if (enumerate_pass(hs.hole, hs.next_size) > 0) {
        int added_min = -1;
        for (size_t cid = before; cid < hs.classes.size(); ++cid) {
          const ClassEntry& e = hs.classes[cid];
          if (e.nt != sk_->holes[hs.hole].grammar.start) continue;
          if (added_min < 0 || e.size < added_min) added_min = e.size;
        }
        if (added_min >= 0) {
          long long t = added_min + (min_sum - hs.min_start_size());
          if (rewind < 0 || t < rewind) rewind = t;
        }
      }
    }
    if (all_closed) return std::nullopt;
    if (rewind >= 0 && rewind < cursor_total_) {
      cursor_total_ = rewind;
      ensure_growth_for_total();
    }
  }
}

}  // namespace protosynth
