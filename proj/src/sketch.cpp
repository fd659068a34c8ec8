#include "protosynth/sketch.hpp"

#include <set>
#include <sstream>

namespace protosynth {

void collect_placeholders(const GTemplatePtr& t, std::vector<std::string>& out) {
  if (t->placeholder) {
    out.push_back(t->nt);
    return;
  }
  for (const auto& k : t->kids) collect_placeholders(k, out);
}

int ground_node_count(const GTemplatePtr& t) {
  if (t->placeholder) return 0;
  int n = 1;
  for (const auto& k : t->kids) n += ground_node_count(k);
  return n;
}

static ExprPtr instantiate_rec(const GTemplatePtr& t, const std::vector<ExprPtr>& fills,
                               size_t& cursor) {
  if (t->placeholder) return fills[cursor++];
  auto e = std::make_shared<Expr>();
  e->op = t->op;
  e->name = t->name;
  e->b = t->b;
  for (const auto& k : t->kids) e->kids.push_back(instantiate_rec(k, fills, cursor));
  return e;
}

ExprPtr instantiate(const GTemplatePtr& t, const std::vector<ExprPtr>& fills) {
  size_t cursor = 0;
  return instantiate_rec(t, fills, cursor);
}

static Value eval_template_rec(const GTemplatePtr& t, const Env& args,
                               const std::vector<Value>& fills, size_t& cursor,
                               const SortTable& sorts) {
  if (t->placeholder) return fills[cursor++];
  switch (t->op) {
    case Op::EmptySet: return Value::set_of(t->name, 0);
    case Op::FullSort: return Value::set_of(t->name, full_mask(sorts.cardinality_of(t->name)));
    case Op::BoolLit: return Value::boolean(t->b);
    case Op::VarRef: {
      const Value* v = args.lookup(t->name);
      return *v;
    }
    case Op::Singleton: {
      Value k = eval_template_rec(t->kids[0], args, fills, cursor, sorts);
      return Value::set_of(k.sort, 1u << (k.atom - 1));
    }
    case Op::Union: {
      Value a = eval_template_rec(t->kids[0], args, fills, cursor, sorts);
      Value b = eval_template_rec(t->kids[1], args, fills, cursor, sorts);
      return Value::set_of(a.sort.empty() ? b.sort : a.sort, a.members | b.members);
    }
    case Op::Inter: {
      Value a = eval_template_rec(t->kids[0], args, fills, cursor, sorts);
      Value b = eval_template_rec(t->kids[1], args, fills, cursor, sorts);
      return Value::set_of(a.sort.empty() ? b.sort : a.sort, a.members & b.members);
    }
    case Op::Diff: {
      Value a = eval_template_rec(t->kids[0], args, fills, cursor, sorts);
      Value b = eval_template_rec(t->kids[1], args, fills, cursor, sorts);
      return Value::set_of(a.sort.empty() ? b.sort : a.sort, a.members & ~b.members);
    }
    case Op::In: {
      Value a = eval_template_rec(t->kids[0], args, fills, cursor, sorts);
      Value b = eval_template_rec(t->kids[1], args, fills, cursor, sorts);
      return Value::boolean((b.members >> (a.atom - 1)) & 1u);
    }
    case Op::Eq: {
      Value a = eval_template_rec(t->kids[0], args, fills, cursor, sorts);
      Value b = eval_template_rec(t->kids[1], args, fills, cursor, sorts);
      return Value::boolean(a == b);
    }
    case Op::SubsetEq: {
      Value a = eval_template_rec(t->kids[0], args, fills, cursor, sorts);
      Value b = eval_template_rec(t->kids[1], args, fills, cursor, sorts);
      return Value::boolean((a.members & ~b.members) == 0);
    }
    case Op::Not:
      return Value::boolean(!eval_template_rec(t->kids[0], args, fills, cursor, sorts).b);
    case Op::And: {
      Value a = eval_template_rec(t->kids[0], args, fills, cursor, sorts);
      Value b = eval_template_rec(t->kids[1], args, fills, cursor, sorts);
      return Value::boolean(a.b && b.b);
    }
    case Op::Or: {
      Value a = eval_template_rec(t->kids[0], args, fills, cursor, sorts);
      Value b = eval_template_rec(t->kids[1], args, fills, cursor, sorts);
      return Value::boolean(a.b || b.b);
    }
    case Op::Implies: {
      Value a = eval_template_rec(t->kids[0], args, fills, cursor, sorts);
      Value b = eval_template_rec(t->kids[1], args, fills, cursor, sorts);
      return Value::boolean(!a.b || b.b);
    }
    default: return Value::boolean(false);  // quantifiers are rejected in grammar rules
  }
}

Value eval_template(const GTemplatePtr& t, const Env& args, const std::vector<Value>& fills,
                    const SortTable& sorts) {
  size_t cursor = 0;
  return eval_template_rec(t, args, fills, cursor, sorts);
}

std::string Property::to_string() const {
  switch (kind) {
    case Kind::Always: return "always(" + pretty(a) + ")";
    case Kind::Eventually: return "eventually(" + pretty(a) + ")";
    case Kind::LeadsTo: return "leadsto(" + pretty(a) + ", " + pretty(b) + ")";
  }
  return "?";
}

int Sketch::var_index(const std::string& name) const {
  for (size_t i = 0; i < vars.size(); ++i)
    if (vars[i].name == name) return static_cast<int>(i);
  return -1;
}

int Sketch::hole_index(const std::string& name) const {
  for (size_t i = 0; i < holes.size(); ++i)
    if (holes[i].name == name) return static_cast<int>(i);
  return -1;
}

TypeEnv Sketch::var_type_env() const {
  TypeEnv env;
  for (const auto& v : vars) env.push(v.name, v.type);
  return env;
}

std::string Diagnostic::render(const std::string& file) const {
  std::ostringstream os;
  os << file << ":" << line << ":" << col << ": " << message;
  return os.str();
}

namespace {

// Bidirectional typing over grammar templates; placeholders take the type of
// their nonterminal, assigning it when still unknown (inference passes) and
// requiring it in the final strict pass.
struct TemplateTyper {
  const SortTable& sorts;
  const TypeEnv& args;
  std::map<std::string, ValType>& nt_types;
  bool strict = false;
  bool changed = false;
  std::string error;
  int err_line = 0, err_col = 0;

  bool fail(const GTemplatePtr& t, const std::string& msg) {
    if (error.empty()) {
      error = msg;
      err_line = t->line;
      err_col = t->col;
    }
    return false;
  }

  bool check(const GTemplatePtr& t, const ValType* expected, GTemplatePtr& out, ValType& type) {
    if (t->placeholder) {
      auto it = nt_types.find(t->nt);
      if (it != nt_types.end()) {
        type = it->second;
      } else if (expected) {
        nt_types.emplace(t->nt, *expected);
        type = *expected;
        changed = true;
      } else {
        return fail(t, "cannot infer a type for nonterminal " + t->nt);
      }
      out = t;
      if (expected && type != *expected)
        return fail(t, "nonterminal " + t->nt + " has type " + type.to_string() + ", expected " +
                           expected->to_string());
      return true;
    }
    switch (t->op) {
      case Op::Forall:
      case Op::Exists:
        return fail(t, "quantifiers are not allowed in grammar rules");
      case Op::EmptySet: {
        if (!t->name.empty()) {
          type = ValType::set(t->name);
        } else if (expected && expected->kind == TypeKind::Set) {
          type = *expected;
        } else {
          return fail(t, "cannot infer the sort of {} here");
        }
        auto copy = std::make_shared<GTemplate>(*t);
        copy->name = type.sort;
        out = copy;
        break;
      }
      case Op::FullSort: {
        if (!sorts.has(t->name)) return fail(t, "unknown sort: " + t->name);
        type = ValType::set(t->name);
        out = t;
        break;
      }
      case Op::BoolLit: {
        type = ValType::boolean();
        out = t;
        break;
      }
      case Op::VarRef: {
        const ValType* vt = args.lookup(t->name);
        if (!vt) return fail(t, "unbound name in grammar rule: " + t->name);
        type = *vt;
        out = t;
        break;
      }
      case Op::Singleton: {
        GTemplatePtr k;
        ValType kt;
        if (expected && expected->kind == TypeKind::Set) {
          ValType want = ValType::atom(expected->sort);
          if (!check(t->kids[0], &want, k, kt)) return false;
        } else {
          if (!check(t->kids[0], nullptr, k, kt)) return false;
          if (kt.kind != TypeKind::Atom)
            return fail(t, "singleton element must have an atom type");
        }
        type = ValType::set(kt.sort);
        auto copy = std::make_shared<GTemplate>(*t);
        copy->kids = {k};
        out = copy;
        break;
      }
      case Op::Union:
      case Op::Inter:
      case Op::Diff: {
        GTemplatePtr a, b;
        ValType at, bt;
        const ValType* want = expected && expected->kind == TypeKind::Set ? expected : nullptr;
        if (want) {
          if (!check(t->kids[0], want, a, at)) return false;
          if (!check(t->kids[1], want, b, bt)) return false;
        } else {
          if (!check(t->kids[0], nullptr, a, at)) return false;
          if (at.kind != TypeKind::Set) return fail(t, "set operator applied to " + at.to_string());
          if (!check(t->kids[1], &at, b, bt)) return false;
        }
        if (at != bt) return fail(t, "set operands have different sorts");
        type = at;
        auto copy = std::make_shared<GTemplate>(*t);
        copy->kids = {a, b};
        out = copy;
        break;
      }
      case Op::In: {
        GTemplatePtr a, b;
        ValType at, bt;
        if (!check(t->kids[0], nullptr, a, at)) return false;
        if (at.kind != TypeKind::Atom) return fail(t, "left side of `in` must be an atom");
        ValType want = ValType::set(at.sort);
        if (!check(t->kids[1], &want, b, bt)) return false;
        type = ValType::boolean();
        auto copy = std::make_shared<GTemplate>(*t);
        copy->kids = {a, b};
        out = copy;
        break;
      }
      case Op::Eq:
      case Op::SubsetEq: {
        GTemplatePtr a, b;
        ValType at, bt;
        if (!check(t->kids[0], nullptr, a, at)) return false;
        if (!check(t->kids[1], &at, b, bt)) return false;
        if (t->op == Op::SubsetEq && at.kind != TypeKind::Set)
          return fail(t, "subseteq needs set operands");
        type = ValType::boolean();
        auto copy = std::make_shared<GTemplate>(*t);
        copy->kids = {a, b};
        out = copy;
        break;
      }
      case Op::Not: {
        GTemplatePtr a;
        ValType at;
        ValType want = ValType::boolean();
        if (!check(t->kids[0], &want, a, at)) return false;
        type = ValType::boolean();
        auto copy = std::make_shared<GTemplate>(*t);
        copy->kids = {a};
        out = copy;
        break;
      }
      case Op::And:
      case Op::Or:
      case Op::Implies: {
        GTemplatePtr a, b;
        ValType at, bt;
        ValType want = ValType::boolean();
        if (!check(t->kids[0], &want, a, at)) return false;
        if (!check(t->kids[1], &want, b, bt)) return false;
        type = ValType::boolean();
        auto copy = std::make_shared<GTemplate>(*t);
        copy->kids = {a, b};
        out = copy;
        break;
      }
    }
    if (expected && type != *expected)
      return fail(t, "expected " + expected->to_string() + ", got " + type.to_string());
    return true;
  }
};

struct Validator {
  const Sketch& sk;
  std::vector<Diagnostic> diags;

  void report(const std::string& msg, int line = 0, int col = 0) {
    diags.push_back({msg, line, col});
  }

  void check_sorts() {
    std::set<std::string> seen;
    for (const auto& s : sk.sorts.all()) {
      if (s.cardinality < 1)
        report("sort " + s.name + " must have cardinality >= 1", s.line, s.col);
      if (s.cardinality > 30)
        report("sort " + s.name + " exceeds the supported cardinality (30)", s.line, s.col);
      if (!seen.insert(s.name).second) report("duplicate sort: " + s.name, s.line, s.col);
    }
  }

  void check_vars() {
    std::set<std::string> seen;
    for (const auto& v : sk.vars) {
      if (!seen.insert(v.name).second) report("duplicate variable: " + v.name, v.line, v.col);
      if (v.type.kind != TypeKind::Bool && !sk.sorts.has(v.type.sort))
        report("variable " + v.name + " uses unknown sort " + v.type.sort, v.line, v.col);
      if (sk.sorts.has(v.name))
        report("variable " + v.name + " collides with a sort name", v.line, v.col);
    }
  }

  void check_bool_expr(const ExprPtr& e, const TypeEnv& env, const std::string& where) {
    TypeError err;
    auto t = type_check(e, env, sk.sorts, &err);
    if (!t) {
      report(where + ": " + err.message, err.line, err.col);
    } else if (t->kind != TypeKind::Bool) {
      report(where + ": expected a boolean expression, got " + t->to_string(), e->line, e->col);
    }
  }

  void check_init() {
    if (!sk.init) {
      report("missing init");
      return;
    }
    check_bool_expr(sk.init, sk.var_type_env(), "init");
  }

  TypeEnv action_env(const ActionDecl& a) const {
    TypeEnv env = sk.var_type_env();
    for (const auto& p : a.params) env.push(p.first, ValType::atom(p.second));
    return env;
  }

  void check_actions() {
    std::set<std::string> names;
    for (const auto& a : sk.actions) {
      if (!names.insert(a.name).second) report("duplicate action: " + a.name, a.line, a.col);
      std::set<std::string> pnames;
      for (const auto& p : a.params) {
        if (!pnames.insert(p.first).second)
          report("action " + a.name + ": duplicate parameter " + p.first);
        if (!sk.sorts.has(p.second))
          report("action " + a.name + ": unknown sort " + p.second);
        if (sk.var_index(p.first) >= 0)
          report("action " + a.name + ": parameter " + p.first + " shadows a state variable");
      }
      TypeEnv env = action_env(a);
      for (const auto& pre : a.fixed_pres)
        check_bool_expr(pre, env, "action " + a.name + " pre");
      if (a.post_clauses.size() != sk.vars.size()) {
        report("action " + a.name + ": post-clauses not aligned with variables");
        continue;
      }
      for (size_t vi = 0; vi < sk.vars.size(); ++vi) {
        const PostClause& pc = a.post_clauses[vi];
        if (pc.hole_index < 0 && !pc.fixed) {
          report("action " + a.name + ": missing post-clause for variable " + sk.vars[vi].name);
          continue;
        }
        if (pc.fixed) {
          TypeError err;
          auto t = type_check(pc.fixed, env, sk.sorts, &err);
          if (!t)
            report("action " + a.name + " post " + sk.vars[vi].name + ": " + err.message,
                   err.line, err.col);
          else if (*t != sk.vars[vi].type)
            report("action " + a.name + " post " + sk.vars[vi].name + ": expected " +
                   sk.vars[vi].type.to_string() + ", got " + t->to_string());
        }
      }
    }
  }

  void check_grammar(const HoleDecl& h) {
    GrammarDecl copy = h.grammar;
    TypeEnv args;
    for (size_t i = 0; i < h.arg_names.size(); ++i) args.push(h.arg_names[i], h.arg_types[i]);
    type_grammar(copy, args, h.result, sk.sorts, h.name, diags);
  }

  void check_holes() {
    std::set<std::string> names;
    for (size_t i = 0; i < sk.holes.size(); ++i) {
      const HoleDecl& h = sk.holes[i];
      if (!names.insert(h.name).second) report("duplicate hole: " + h.name);
      if (h.index != static_cast<int>(i)) report("hole " + h.name + ": bad index");
      if (h.action_index < 0 || h.action_index >= static_cast<int>(sk.actions.size())) {
        report("hole " + h.name + " is not used by any action");
        continue;
      }
      const ActionDecl& a = sk.actions[h.action_index];
      TypeEnv env = action_env(a);
      if (h.arg_names.size() != h.arg_types.size()) {
        report("hole " + h.name + ": malformed argument list");
        continue;
      }
      std::set<std::string> argseen;
      for (size_t j = 0; j < h.arg_names.size(); ++j) {
        if (!argseen.insert(h.arg_names[j]).second)
          report("hole " + h.name + ": duplicate argument " + h.arg_names[j]);
        const ValType* t = env.lookup(h.arg_names[j]);
        if (!t)
          report("hole " + h.name + ": unbound name " + h.arg_names[j]);
        else if (*t != h.arg_types[j])
          report("hole " + h.name + ": argument " + h.arg_names[j] + " type mismatch");
      }
      if (h.kind == HoleKind::Pre && h.result.kind != TypeKind::Bool)
        report("hole " + h.name + ": pre-holes must produce bool");
      if (h.kind == HoleKind::Post) {
        int vi = sk.var_index(h.var);
        if (vi < 0)
          report("hole " + h.name + ": unknown variable " + h.var);
        else if (sk.vars[vi].type != h.result)
          report("hole " + h.name + ": result type must match variable " + h.var);
      }
      check_grammar(h);
    }
  }

  void check_props(const std::vector<Property>& props) {
    TypeEnv env = sk.var_type_env();
    for (const auto& p : props) {
      check_bool_expr(p.a, env, "property");
      if (p.kind == Property::Kind::LeadsTo) check_bool_expr(p.b, env, "property");
    }
  }
};

std::string pretty_template(const GTemplatePtr& t) {
  if (t->placeholder) return t->nt;
  switch (t->op) {
    case Op::EmptySet: return "{}";
    case Op::FullSort: return t->name;
    case Op::BoolLit: return t->b ? "true" : "false";
    case Op::VarRef: return t->name;
    case Op::Singleton: return "{" + pretty_template(t->kids[0]) + "}";
    case Op::Not: return "~" + pretty_template(t->kids[0]);
    default: break;
  }
  const char* text = "?";
  switch (t->op) {
    case Op::Union: text = "union"; break;
    case Op::Inter: text = "inter"; break;
    case Op::Diff: text = "minus"; break;
    case Op::In: text = "in"; break;
    case Op::Eq: text = "="; break;
    case Op::SubsetEq: text = "subseteq"; break;
    case Op::And: text = "/\\"; break;
    case Op::Or: text = "\\/"; break;
    case Op::Implies: text = "=>"; break;
    default: break;
  }
  return "(" + pretty_template(t->kids[0]) + " " + text + " " + pretty_template(t->kids[1]) + ")";
}

}  // namespace

bool type_grammar(GrammarDecl& g, const TypeEnv& args, const ValType& result,
                  const SortTable& sorts, const std::string& hole_name,
                  std::vector<Diagnostic>& diags) {
  size_t before = diags.size();
  if (g.rules.empty()) {
    diags.push_back({"hole " + hole_name + ": empty grammar", 0, 0});
    return false;
  }
  for (const auto& nt : g.nonterminals) {
    bool has_rule = false;
    for (const auto& r : g.rules)
      if (r.nt == nt) has_rule = true;
    if (!has_rule)
      diags.push_back({"hole " + hole_name + ": nonterminal " + nt + " has no rule", 0, 0});
  }

  g.nt_types.clear();
  g.nt_types.emplace(g.start, result);
  // Inference passes to a fixpoint, then one strict pass that rewrites rules.
  for (size_t round = 0; round <= g.nonterminals.size() + 1; ++round) {
    bool changed = false;
    for (const auto& r : g.rules) {
      TemplateTyper ty{sorts, args, g.nt_types};
      GTemplatePtr out;
      ValType type;
      auto it = g.nt_types.find(r.nt);
      const ValType* expected = it == g.nt_types.end() ? nullptr : &it->second;
      if (ty.check(r.tmpl, expected, out, type)) {
        if (it == g.nt_types.end()) {
          g.nt_types.emplace(r.nt, type);
          changed = true;
        }
      }
      changed = changed || ty.changed;
    }
    if (!changed) break;
  }
  for (const auto& nt : g.nonterminals)
    if (!g.nt_types.count(nt)) {
      diags.push_back({"hole " + hole_name + ": cannot infer a type for nonterminal " + nt, 0, 0});
      return false;
    }
  for (auto& r : g.rules) {
    TemplateTyper ty{sorts, args, g.nt_types, /*strict=*/true};
    GTemplatePtr out;
    ValType type;
    if (!ty.check(r.tmpl, &g.nt_types.at(r.nt), out, type)) {
      diags.push_back(
          {"hole " + hole_name + ", rule " + r.nt + ": " + ty.error, ty.err_line, ty.err_col});
    } else {
      r.tmpl = out;
      r.placeholders.clear();
      collect_placeholders(r.tmpl, r.placeholders);
      r.ground_nodes = ground_node_count(r.tmpl);
    }
  }

  // Every nonterminal must derive at least one finite expression.
  std::set<std::string> productive;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : g.rules) {
      if (productive.count(r.nt)) continue;
      bool ok = true;
      for (const auto& ph : r.placeholders)
        if (!productive.count(ph)) ok = false;
      if (ok) {
        productive.insert(r.nt);
        changed = true;
      }
    }
  }
  for (const auto& nt : g.nonterminals)
    if (!productive.count(nt))
      diags.push_back(
          {"hole " + hole_name + ": nonterminal " + nt + " cannot derive any expression", 0, 0});

  return diags.size() == before;
}

std::vector<Diagnostic> validate(const Sketch& sk, const std::vector<Property>& props) {
  Validator v{sk};
  v.check_sorts();
  v.check_vars();
  v.check_init();
  v.check_actions();
  v.check_holes();
  v.check_props(props);
  return v.diags;
}

std::string pretty_print(const Sketch& sk, const std::vector<Property>& props) {
  std::ostringstream os;
  for (const auto& s : sk.sorts.all()) os << "sort " << s.name << " " << s.cardinality << "\n";
  os << "\n";
  for (const auto& v : sk.vars) os << "var " << v.name << " : " << v.type.to_string() << "\n";
  os << "\n";
  os << "init " << pretty(sk.init) << "\n";
  for (const auto& a : sk.actions) {
    os << "\naction " << a.name << "(";
    for (size_t i = 0; i < a.params.size(); ++i) {
      if (i) os << ", ";
      os << a.params[i].first << " : " << a.params[i].second;
    }
    os << ")";
    if (a.fairness == Fairness::Weak) os << " fairness weak";
    if (a.fairness == Fairness::Strong) os << " fairness strong";
    os << "\n";
    size_t pre_hole_cursor = 0;
    for (const auto& pre : a.fixed_pres) os << "  pre: " << pretty(pre) << "\n";
    for (; pre_hole_cursor < a.pre_holes.size(); ++pre_hole_cursor) {
      const HoleDecl& h = sk.holes[a.pre_holes[pre_hole_cursor]];
      os << "  pre: ?" << h.name << "(";
      for (size_t i = 0; i < h.arg_names.size(); ++i) {
        if (i) os << ", ";
        os << h.arg_names[i];
      }
      os << ")\n";
    }
    for (size_t vi = 0; vi < a.post_clauses.size(); ++vi) {
      const PostClause& pc = a.post_clauses[vi];
      os << "  post: " << sk.vars[vi].name << "' = ";
      if (pc.hole_index >= 0) {
        const HoleDecl& h = sk.holes[pc.hole_index];
        os << "?" << h.name << "(";
        for (size_t i = 0; i < h.arg_names.size(); ++i) {
          if (i) os << ", ";
          os << h.arg_names[i];
        }
        os << ")";
      } else {
        os << pretty(pc.fixed);
      }
      os << "\n";
    }
  }
  for (const auto& h : sk.holes) {
    os << "\nhole " << h.name << " grammar:\n";
    // Group rules by nonterminal, keeping declaration order.
    for (const auto& nt : h.grammar.nonterminals) {
      bool any = false;
      for (const auto& r : h.grammar.rules) {
        if (r.nt != nt) continue;
        if (!any)
          os << "  " << nt << " ::= ";
        else
          os << " | ";
        os << pretty_template(r.tmpl);
        any = true;
      }
      if (any) os << "\n";
    }
  }
  if (!props.empty()) os << "\n";
  for (const auto& p : props) os << "property: " << p.to_string() << "\n";
  return os.str();
}

}  // namespace protosynth
