#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "protosynth/value.hpp"

namespace protosynth {

enum class Op {
  EmptySet,
  FullSort,
  BoolLit,
  VarRef,
  Singleton,
  Union,
  Inter,
  Diff,
  In,
  Eq,
  SubsetEq,
  Not,
  And,
  Or,
  Implies,
  Forall,
  Exists,
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Immutable expression node. `name` holds the variable name for VarRef, the
// sort name for EmptySet/FullSort, and the bound variable for quantifiers;
// `sort` holds the quantifier's sort.
struct Expr {
  Op op;
  std::string name;
  std::string sort;
  bool b = false;
  std::vector<ExprPtr> kids;
  int line = 0, col = 0;
};

ExprPtr mk_empty_set(std::string sort);
ExprPtr mk_full_sort(std::string sort);
ExprPtr mk_bool(bool b);
ExprPtr mk_var(std::string name);
ExprPtr mk_singleton(ExprPtr e);
ExprPtr mk_binop(Op op, ExprPtr a, ExprPtr b);
ExprPtr mk_not(ExprPtr a);
ExprPtr mk_quant(Op op, std::string var, std::string sort, ExprPtr body);

int node_count(const ExprPtr& e);
bool struct_eq(const ExprPtr& a, const ExprPtr& b);

// Concrete-syntax rendering; compounds are fully parenthesized so that
// parse(pretty(e)) reproduces the structure.
std::string pretty(const ExprPtr& e);

struct TypeEnvEntry {
  std::string name;
  ValType type;
};

struct TypeEnv {
  std::vector<TypeEnvEntry> items;

  void push(const std::string& name, const ValType& t) { items.push_back({name, t}); }
  void pop() { items.pop_back(); }
  const ValType* lookup(const std::string& name) const;
};

struct TypeError {
  std::string message;
  int line = 0, col = 0;
};

// Type inference plus elaboration: resolves the sort of bare `{}` literals
// from context and returns the rewritten expression with its type. On failure
// fills `err` and returns nullopt.
std::optional<std::pair<ExprPtr, ValType>> elaborate(const ExprPtr& e, const TypeEnv& env,
                                                     const SortTable& sorts, TypeError* err);

// Elaboration against a required type.
std::optional<ExprPtr> elaborate_expect(const ExprPtr& e, const ValType& expected,
                                        const TypeEnv& env, const SortTable& sorts,
                                        TypeError* err);

// Type of an already elaborated expression. UnboundName / TypeMismatch via err.
std::optional<ValType> type_check(const ExprPtr& e, const TypeEnv& env, const SortTable& sorts,
                                  TypeError* err);

// Total on well-typed elaborated input.
Value eval(const ExprPtr& e, const Env& env, const SortTable& sorts);

}  // namespace protosynth
