#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace protosynth {

// A finite sort: cardinality k induces atoms 1..k, printed as e.g. Node1.
struct SortDecl {
  std::string name;
  int cardinality = 0;
  int line = 0, col = 0;
};

class SortTable {
public:
  void add(const SortDecl& s) { sorts_.push_back(s); }
  bool has(const std::string& name) const;
  int cardinality_of(const std::string& name) const;  // throws if unknown
  const std::vector<SortDecl>& all() const { return sorts_; }

private:
  std::vector<SortDecl> sorts_;
};

enum class TypeKind { Bool, Atom, Set };

struct ValType {
  TypeKind kind = TypeKind::Bool;
  std::string sort;  // Atom/Set only

  static ValType boolean() { return {TypeKind::Bool, ""}; }
  static ValType atom(std::string s) { return {TypeKind::Atom, std::move(s)}; }
  static ValType set(std::string s) { return {TypeKind::Set, std::move(s)}; }

  bool operator==(const ValType& o) const { return kind == o.kind && sort == o.sort; }
  bool operator!=(const ValType& o) const { return !(*this == o); }
  std::string to_string() const;
};

enum class ValueKind { Bool, Atom, Set };

// Finite-domain runtime value. Set members are a bitmask: bit i-1 = atom i.
struct Value {
  ValueKind kind = ValueKind::Bool;
  bool b = false;
  int atom = 0;
  uint32_t members = 0;
  std::string sort;

  static Value boolean(bool v);
  static Value atom_of(std::string sort, int index);
  static Value set_of(std::string sort, uint32_t mask);

  bool operator==(const Value& o) const;
  bool operator!=(const Value& o) const { return !(*this == o); }
  bool operator<(const Value& o) const;  // total order, for canonical listings

  std::string to_string() const;  // true / Node1 / {Node1, Node2}
};

size_t hash_of(const Value& v);

using Binding = std::pair<std::string, Value>;

// Name-to-value environment; later entries shadow earlier ones.
struct Env {
  std::vector<Binding> items;

  void push(const std::string& name, const Value& v) { items.emplace_back(name, v); }
  void pop() { items.pop_back(); }
  const Value* lookup(const std::string& name) const;
};

// Values of one state, aligned with the owning specification's variable order.
struct State {
  std::vector<Value> vals;

  bool operator==(const State& o) const { return vals == o.vals; }
};

struct StateHash {
  size_t operator()(const State& s) const;
};

// Argument values of one hole, aligned with the hole's declared argument order.
struct Interpretation {
  std::vector<Value> vals;

  bool operator==(const Interpretation& o) const { return vals == o.vals; }
  bool operator!=(const Interpretation& o) const { return !(*this == o); }
};

struct MissingArgError : std::runtime_error {
  explicit MissingArgError(const std::string& what) : std::runtime_error(what) {}
};

// Projects the combined binding (state vars then action params) onto the given
// argument names, preserving argument order.
Interpretation restrict_to_args(const Env& state, const Env& params,
                                const std::vector<std::string>& args);

uint32_t full_mask(int cardinality);

}  // namespace protosynth
