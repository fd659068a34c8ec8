#include "protosynth/expr.hpp"

#include <cassert>

namespace protosynth {

ExprPtr mk_empty_set(std::string sort) {
  auto e = std::make_shared<Expr>();
  e->op = Op::EmptySet;
  e->name = std::move(sort);
  return e;
}

ExprPtr mk_full_sort(std::string sort) {
  auto e = std::make_shared<Expr>();
  e->op = Op::FullSort;
  e->name = std::move(sort);
  return e;
}

ExprPtr mk_bool(bool b) {
  auto e = std::make_shared<Expr>();
  e->op = Op::BoolLit;
  e->b = b;
  return e;
}

ExprPtr mk_var(std::string name) {
  auto e = std::make_shared<Expr>();
  e->op = Op::VarRef;
  e->name = std::move(name);
  return e;
}

ExprPtr mk_singleton(ExprPtr k) {
  auto e = std::make_shared<Expr>();
  e->op = Op::Singleton;
  e->kids = {std::move(k)};
  return e;
}

ExprPtr mk_binop(Op op, ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->op = op;
  e->kids = {std::move(a), std::move(b)};
  return e;
}

ExprPtr mk_not(ExprPtr a) {
  auto e = std::make_shared<Expr>();
  e->op = Op::Not;
  e->kids = {std::move(a)};
  return e;
}

ExprPtr mk_quant(Op op, std::string var, std::string sort, ExprPtr body) {
  auto e = std::make_shared<Expr>();
  e->op = op;
  e->name = std::move(var);
  e->sort = std::move(sort);
  e->kids = {std::move(body)};
  return e;
}

int node_count(const ExprPtr& e) {
  int n = 1;
  for (const auto& k : e->kids) n += node_count(k);
  return n;
}

bool struct_eq(const ExprPtr& a, const ExprPtr& b) {
  if (a->op != b->op || a->name != b->name || a->sort != b->sort || a->b != b->b ||
      a->kids.size() != b->kids.size())
    return false;
  for (size_t i = 0; i < a->kids.size(); ++i)
    if (!struct_eq(a->kids[i], b->kids[i])) return false;
  return true;
}

static const char* binop_text(Op op) {
  switch (op) {
    case Op::Union: return "union";
    case Op::Inter: return "inter";
    case Op::Diff: return "minus";
    case Op::In: return "in";
    case Op::Eq: return "=";
    case Op::SubsetEq: return "subseteq";
    case Op::And: return "/\\";
    case Op::Or: return "\\/";
    case Op::Implies: return "=>";
    default: return "?";
  }
}

std::string pretty(const ExprPtr& e) {
  switch (e->op) {
    case Op::EmptySet: return "{}";
    case Op::FullSort: return e->name;
    case Op::BoolLit: return e->b ? "true" : "false";
    case Op::VarRef: return e->name;
    case Op::Singleton: return "{" + pretty(e->kids[0]) + "}";
    case Op::Not: return "~" + pretty(e->kids[0]);
    case Op::Forall:
      return "(forall " + e->name + " : " + e->sort + " . " + pretty(e->kids[0]) + ")";
    case Op::Exists:
      return "(exists " + e->name + " : " + e->sort + " . " + pretty(e->kids[0]) + ")";
    default:
      return "(" + pretty(e->kids[0]) + " " + binop_text(e->op) + " " + pretty(e->kids[1]) + ")";
  }
}

const ValType* TypeEnv::lookup(const std::string& name) const {
  for (auto it = items.rbegin(); it != items.rend(); ++it)
    if (it->name == name) return &it->type;
  return nullptr;
}

namespace {

struct Elaborator {
  const SortTable& sorts;
  TypeEnv env;
  TypeError* err;

  bool fail(const ExprPtr& e, const std::string& msg) {
    if (err) {
      err->message = msg;
      err->line = e->line;
      err->col = e->col;
    }
    return false;
  }

  // expected == nullptr means synthesize. On success fills out/type.
  bool elab(const ExprPtr& e, const ValType* expected, ExprPtr& out, ValType& type) {
    switch (e->op) {
      case Op::EmptySet: {
        if (!e->name.empty()) {
          type = ValType::set(e->name);
        } else if (expected && expected->kind == TypeKind::Set) {
          type = *expected;
        } else {
          return fail(e, "cannot infer the sort of {} here");
        }
        out = mk_empty_set(type.sort);
        break;
      }
      case Op::FullSort: {
        if (!sorts.has(e->name)) return fail(e, "unknown sort: " + e->name);
        type = ValType::set(e->name);
        out = e;
        break;
      }
      case Op::BoolLit: {
        type = ValType::boolean();
        out = e;
        break;
      }
      case Op::VarRef: {
        const ValType* t = env.lookup(e->name);
        if (!t) return fail(e, "unbound name: " + e->name);
        type = *t;
        out = e;
        break;
      }
      case Op::Singleton: {
        ExprPtr k;
        ValType kt;
        if (expected && expected->kind == TypeKind::Set) {
          ValType want = ValType::atom(expected->sort);
          if (!elab(e->kids[0], &want, k, kt)) return false;
        } else {
          if (!elab(e->kids[0], nullptr, k, kt)) return false;
          if (kt.kind != TypeKind::Atom)
            return fail(e, "singleton element must have an atom type, got " + kt.to_string());
        }
        type = ValType::set(kt.sort);
        out = mk_singleton(k);
        break;
      }
      case Op::Union:
      case Op::Inter:
      case Op::Diff: {
        ExprPtr a, bchild;
        ValType at, bt;
        if (expected && expected->kind == TypeKind::Set) {
          if (!elab(e->kids[0], expected, a, at)) return false;
          if (!elab(e->kids[1], expected, bchild, bt)) return false;
        } else {
          TypeError saved;
          TypeError* outer = err;
          err = &saved;
          bool first_ok = elab(e->kids[0], nullptr, a, at);
          err = outer;
          if (first_ok) {
            if (at.kind != TypeKind::Set)
              return fail(e, "set operator applied to " + at.to_string());
            if (!elab(e->kids[1], &at, bchild, bt)) return false;
          } else {
            if (!elab(e->kids[1], nullptr, bchild, bt)) return false;
            if (bt.kind != TypeKind::Set)
              return fail(e, "set operator applied to " + bt.to_string());
            if (!elab(e->kids[0], &bt, a, at)) return false;
          }
        }
        if (at != bt) return fail(e, "set operands have different sorts");
        type = at;
        out = mk_binop(e->op, a, bchild);
        break;
      }
      case Op::In: {
        if (expected && expected->kind != TypeKind::Bool)
          return fail(e, "expected " + expected->to_string() + ", got bool");
        ExprPtr a, bchild;
        ValType at, bt;
        TypeError saved;
        TypeError* outer = err;
        err = &saved;
        bool left_ok = elab(e->kids[0], nullptr, a, at);
        err = outer;
        if (left_ok) {
          if (at.kind != TypeKind::Atom)
            return fail(e, "left side of `in` must be an atom, got " + at.to_string());
          ValType want = ValType::set(at.sort);
          if (!elab(e->kids[1], &want, bchild, bt)) return false;
        } else {
          if (!elab(e->kids[1], nullptr, bchild, bt)) return false;
          if (bt.kind != TypeKind::Set)
            return fail(e, "right side of `in` must be a set, got " + bt.to_string());
          ValType want = ValType::atom(bt.sort);
          if (!elab(e->kids[0], &want, a, at)) return false;
        }
        type = ValType::boolean();
        out = mk_binop(Op::In, a, bchild);
        break;
      }
      case Op::Eq:
      case Op::SubsetEq: {
        if (expected && expected->kind != TypeKind::Bool)
          return fail(e, "expected " + expected->to_string() + ", got bool");
        ExprPtr a, bchild;
        ValType at, bt;
        TypeError saved;
        TypeError* outer = err;
        err = &saved;
        bool left_ok = elab(e->kids[0], nullptr, a, at);
        err = outer;
        if (left_ok) {
          if (!elab(e->kids[1], &at, bchild, bt)) return false;
        } else {
          if (!elab(e->kids[1], nullptr, bchild, bt)) return false;
          if (!elab(e->kids[0], &bt, a, at)) return false;
        }
        if (at != bt) return fail(e, "comparison operands have different types");
        if (e->op == Op::SubsetEq && at.kind != TypeKind::Set)
          return fail(e, "subseteq needs set operands, got " + at.to_string());
        type = ValType::boolean();
        out = mk_binop(e->op, a, bchild);
        break;
      }
      case Op::Not: {
        if (expected && expected->kind != TypeKind::Bool)
          return fail(e, "expected " + expected->to_string() + ", got bool");
        ExprPtr a;
        ValType at;
        ValType want = ValType::boolean();
        if (!elab(e->kids[0], &want, a, at)) return false;
        if (at.kind != TypeKind::Bool) return fail(e, "~ applied to " + at.to_string());
        type = ValType::boolean();
        out = mk_not(a);
        break;
      }
      case Op::And:
      case Op::Or:
      case Op::Implies: {
        if (expected && expected->kind != TypeKind::Bool)
          return fail(e, "expected " + expected->to_string() + ", got bool");
        ExprPtr a, bchild;
        ValType at, bt;
        ValType want = ValType::boolean();
        if (!elab(e->kids[0], &want, a, at)) return false;
        if (!elab(e->kids[1], &want, bchild, bt)) return false;
        if (at.kind != TypeKind::Bool || bt.kind != TypeKind::Bool)
          return fail(e, "boolean operator applied to non-boolean operand");
        type = ValType::boolean();
        out = mk_binop(e->op, a, bchild);
        break;
      }
      case Op::Forall:
      case Op::Exists: {
        if (expected && expected->kind != TypeKind::Bool)
          return fail(e, "expected " + expected->to_string() + ", got bool");
        if (!sorts.has(e->sort)) return fail(e, "unknown sort: " + e->sort);
        env.push(e->name, ValType::atom(e->sort));
        ExprPtr body;
        ValType bt;
        ValType want = ValType::boolean();
        bool ok = elab(e->kids[0], &want, body, bt);
        env.pop();
        if (!ok) return false;
        if (bt.kind != TypeKind::Bool) return fail(e, "quantifier body must be boolean");
        type = ValType::boolean();
        out = mk_quant(e->op, e->name, e->sort, body);
        break;
      }
    }
    if (expected && type != *expected)
      return fail(e, "expected " + expected->to_string() + ", got " + type.to_string());
    return true;
  }
};

}  // namespace

std::optional<std::pair<ExprPtr, ValType>> elaborate(const ExprPtr& e, const TypeEnv& env,
                                                     const SortTable& sorts, TypeError* err) {
  Elaborator el{sorts, env, err};
  ExprPtr out;
  ValType type;
  if (!el.elab(e, nullptr, out, type)) return std::nullopt;
  return std::make_pair(out, type);
}

std::optional<ExprPtr> elaborate_expect(const ExprPtr& e, const ValType& expected,
                                        const TypeEnv& env, const SortTable& sorts,
                                        TypeError* err) {
  Elaborator el{sorts, env, err};
  ExprPtr out;
  ValType type;
  if (!el.elab(e, &expected, out, type)) return std::nullopt;
  return out;
}

std::optional<ValType> type_check(const ExprPtr& e, const TypeEnv& env, const SortTable& sorts,
                                  TypeError* err) {
  auto r = elaborate(e, env, sorts, err);
  if (!r) return std::nullopt;
  return r->second;
}

Value eval(const ExprPtr& e, const Env& env, const SortTable& sorts) {
  switch (e->op) {
    case Op::EmptySet: return Value::set_of(e->name, 0);
    case Op::FullSort: return Value::set_of(e->name, full_mask(sorts.cardinality_of(e->name)));
    case Op::BoolLit: return Value::boolean(e->b);
    case Op::VarRef: {
      const Value* v = env.lookup(e->name);
      assert(v && "eval precondition: all free names bound");
      return *v;
    }
    case Op::Singleton: {
      Value k = eval(e->kids[0], env, sorts);
      return Value::set_of(k.sort, 1u << (k.atom - 1));
    }
    case Op::Union: {
      Value a = eval(e->kids[0], env, sorts), b = eval(e->kids[1], env, sorts);
      return Value::set_of(a.sort, a.members | b.members);
    }
    case Op::Inter: {
      Value a = eval(e->kids[0], env, sorts), b = eval(e->kids[1], env, sorts);
      return Value::set_of(a.sort, a.members & b.members);
    }
    case Op::Diff: {
      Value a = eval(e->kids[0], env, sorts), b = eval(e->kids[1], env, sorts);
      return Value::set_of(a.sort, a.members & ~b.members);
    }
    case Op::In: {
      Value a = eval(e->kids[0], env, sorts), b = eval(e->kids[1], env, sorts);
      return Value::boolean((b.members >> (a.atom - 1)) & 1u);
    }
    case Op::Eq: {
      Value a = eval(e->kids[0], env, sorts), b = eval(e->kids[1], env, sorts);
      return Value::boolean(a == b);
    }
    case Op::SubsetEq: {
      Value a = eval(e->kids[0], env, sorts), b = eval(e->kids[1], env, sorts);
      return Value::boolean((a.members & ~b.members) == 0);
    }
    case Op::Not: return Value::boolean(!eval(e->kids[0], env, sorts).b);
    case Op::And:
      return Value::boolean(eval(e->kids[0], env, sorts).b && eval(e->kids[1], env, sorts).b);
    case Op::Or:
      return Value::boolean(eval(e->kids[0], env, sorts).b || eval(e->kids[1], env, sorts).b);
    case Op::Implies:
      return Value::boolean(!eval(e->kids[0], env, sorts).b || eval(e->kids[1], env, sorts).b);
    case Op::Forall:
    case Op::Exists: {
      int k = sorts.cardinality_of(e->sort);
      Env local = env;
      for (int i = 1; i <= k; ++i) {
        local.push(e->name, Value::atom_of(e->sort, i));
        bool v = eval(e->kids[0], local, sorts).b;
        local.pop();
        if (e->op == Op::Forall && !v) return Value::boolean(false);
        if (e->op == Op::Exists && v) return Value::boolean(true);
      }
      return Value::boolean(e->op == Op::Forall);
    }
  }
  return Value::boolean(false);  // unreachable
}

}  // namespace protosynth
