#include "protosynth/parser.hpp"

#include <cctype>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

namespace protosynth {

namespace {

struct Token {
  enum Kind { Ident, Int, Punct, End } kind = End;
  std::string text;
  int line = 1, col = 1;
};

const std::set<std::string> kKeywords = {
    "sort",    "var",     "init",       "action", "fairness", "none",   "weak",
    "strong",  "pre",     "post",       "hole",   "grammar",  "property", "always",
    "eventually", "leadsto", "union",   "inter",  "minus",    "in",     "subseteq",
    "true",    "false",   "forall",     "exists", "bool",     "set"};

struct ParseError {
  std::string message;
  int line, col;
};

struct Lexer {
  const std::string& src;
  size_t pos = 0;
  int line = 1, col = 1;

  void advance(size_t n) {
    for (size_t i = 0; i < n && pos < src.size(); ++i, ++pos) {
      if (src[pos] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  }

  bool starts_with(const char* s) const {
    return src.compare(pos, strlen(s), s) == 0;
  }

  std::vector<Token> run() {
    std::vector<Token> out;
    while (pos < src.size()) {
      char c = src[pos];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance(1);
        continue;
      }
      if (c == '#') {
        while (pos < src.size() && src[pos] != '\n') advance(1);
        continue;
      }
      Token t;
      t.line = line;
      t.col = col;
      if (isalpha(static_cast<unsigned char>(c)) || c == '_') {
        size_t start = pos;
        while (pos < src.size() &&
               (isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
          advance(1);
        t.kind = Token::Ident;
        t.text = src.substr(start, pos - start);
        out.push_back(t);
        continue;
      }
      if (isdigit(static_cast<unsigned char>(c))) {
        size_t start = pos;
        while (pos < src.size() && isdigit(static_cast<unsigned char>(src[pos]))) advance(1);
        t.kind = Token::Int;
        t.text = src.substr(start, pos - start);
        out.push_back(t);
        continue;
      }
      t.kind = Token::Punct;
      if (starts_with("::=")) {
        t.text = "::=";
      } else if (starts_with("/\\")) {
        t.text = "/\\";
      } else if (starts_with("\\/")) {
        t.text = "\\/";
      } else if (starts_with("=>")) {
        t.text = "=>";
      } else if (std::string("(){},:'?|.=~").find(c) != std::string::npos) {
        t.text = std::string(1, c);
      } else {
        throw ParseError{"unexpected character '" + std::string(1, c) + "'", line, col};
      }
      advance(t.text.size());
      out.push_back(t);
    }
    Token end;
    end.kind = Token::End;
    end.line = line;
    end.col = col;
    out.push_back(end);
    return out;
  }
};

// Surface forms collected before linking.
struct HoleUse {
  std::string name;
  std::vector<std::string> args;
  int line = 0, col = 0;
};

struct SurfacePost {
  std::string var;
  ExprPtr fixed;             // null when hole used
  HoleUse hole;
  bool is_hole = false;
  int line = 0, col = 0;
};

struct SurfacePre {
  ExprPtr fixed;
  HoleUse hole;
  bool is_hole = false;
};

struct SurfaceAction {
  std::string name;
  std::vector<std::pair<std::string, std::string>> params;
  Fairness fairness = Fairness::None;
  std::vector<SurfacePre> pres;
  std::vector<SurfacePost> posts;
  int line = 0, col = 0;
};

struct SurfaceRule {
  std::string nt;
  ExprPtr tmpl;
  int line = 0, col = 0;
};

struct SurfaceHole {
  std::string name;
  std::vector<SurfaceRule> rules;
  int line = 0, col = 0;
};

struct Parser {
  std::vector<Token> toks;
  size_t cur = 0;
  std::vector<Diagnostic> diags;

  Sketch sk;
  ExprPtr init_surface;
  std::vector<SurfaceAction> actions;
  std::vector<SurfaceHole> hole_blocks;
  std::vector<Property> props_surface;
  std::vector<Property> props_surface_linked;

  const Token& peek(size_t ahead = 0) const {
    size_t i = cur + ahead;
    return i < toks.size() ? toks[i] : toks.back();
  }
  const Token& next() {
    const Token& t = peek();
    if (t.kind != Token::End) ++cur;
    return t;
  }
  bool at_punct(const char* p) const {
    return peek().kind == Token::Punct && peek().text == p;
  }
  bool at_word(const char* w) const {
    return peek().kind == Token::Ident && peek().text == w;
  }
  void expect_punct(const char* p) {
    if (!at_punct(p))
      throw ParseError{"expected '" + std::string(p) + "', got '" + peek().text + "'", peek().line,
                       peek().col};
    next();
  }
  void expect_word(const char* w) {
    if (!at_word(w))
      throw ParseError{"expected '" + std::string(w) + "', got '" + peek().text + "'", peek().line,
                       peek().col};
    next();
  }
  std::string expect_name(const char* what) {
    if (peek().kind != Token::Ident)
      throw ParseError{std::string("expected ") + what + ", got '" + peek().text + "'",
                       peek().line, peek().col};
    if (kKeywords.count(peek().text))
      throw ParseError{std::string("expected ") + what + ", got keyword '" + peek().text + "'",
                       peek().line, peek().col};
    return next().text;
  }
  int expect_int() {
    if (peek().kind != Token::Int)
      throw ParseError{"expected an integer, got '" + peek().text + "'", peek().line, peek().col};
    return std::stoi(next().text);
  }

  // --- expressions (surface: every identifier becomes a VarRef) ---

  ExprPtr with_loc(ExprPtr e, const Token& t) {
    auto m = std::make_shared<Expr>(*e);
    m->line = t.line;
    m->col = t.col;
    return m;
  }

  ExprPtr parse_expr() { return parse_implies(); }

  ExprPtr parse_implies() {
    ExprPtr a = parse_or();
    if (at_punct("=>")) {
      Token t = peek();
      next();
      return with_loc(mk_binop(Op::Implies, a, parse_implies()), t);
    }
    return a;
  }

  ExprPtr parse_or() {
    ExprPtr a = parse_and();
    while (at_punct("\\/")) {
      Token t = peek();
      next();
      a = with_loc(mk_binop(Op::Or, a, parse_and()), t);
    }
    return a;
  }

  ExprPtr parse_and() {
    ExprPtr a = parse_not();
    while (at_punct("/\\")) {
      Token t = peek();
      next();
      a = with_loc(mk_binop(Op::And, a, parse_not()), t);
    }
    return a;
  }

  ExprPtr parse_not() {
    if (at_punct("~")) {
      Token t = peek();
      next();
      return with_loc(mk_not(parse_not()), t);
    }
    return parse_cmp();
  }

  ExprPtr parse_cmp() {
    ExprPtr a = parse_setexpr();
    if (at_punct("=")) {
      Token t = peek();
      next();
      return with_loc(mk_binop(Op::Eq, a, parse_setexpr()), t);
    }
    if (at_word("in")) {
      Token t = peek();
      next();
      return with_loc(mk_binop(Op::In, a, parse_setexpr()), t);
    }
    if (at_word("subseteq")) {
      Token t = peek();
      next();
      return with_loc(mk_binop(Op::SubsetEq, a, parse_setexpr()), t);
    }
    return a;
  }

  ExprPtr parse_setexpr() {
    ExprPtr a = parse_primary();
    while (at_word("union") || at_word("inter") || at_word("minus")) {
      Token t = peek();
      Op op = t.text == "union" ? Op::Union : t.text == "inter" ? Op::Inter : Op::Diff;
      next();
      a = with_loc(mk_binop(op, a, parse_primary()), t);
    }
    return a;
  }

  ExprPtr parse_primary() {
    Token t = peek();
    if (at_punct("(")) {
      next();
      ExprPtr e = parse_expr();
      expect_punct(")");
      return e;
    }
    if (at_punct("{")) {
      next();
      if (at_punct("}")) {
        next();
        return with_loc(mk_empty_set(""), t);
      }
      ExprPtr k = parse_expr();
      expect_punct("}");
      return with_loc(mk_singleton(k), t);
    }
    if (at_word("true") || at_word("false")) {
      bool b = peek().text == "true";
      next();
      return with_loc(mk_bool(b), t);
    }
    if (at_word("forall") || at_word("exists")) {
      Op op = peek().text == "forall" ? Op::Forall : Op::Exists;
      next();
      std::string v = expect_name("a bound variable");
      expect_punct(":");
      std::string s = expect_name("a sort name");
      expect_punct(".");
      ExprPtr body = parse_implies();
      return with_loc(mk_quant(op, v, s, body), t);
    }
    if (peek().kind == Token::Ident && !kKeywords.count(peek().text)) {
      next();
      return with_loc(mk_var(t.text), t);
    }
    throw ParseError{"expected an expression, got '" + t.text + "'", t.line, t.col};
  }

  // --- declarations ---

  HoleUse parse_hole_use() {
    Token t = peek();
    expect_punct("?");
    HoleUse u;
    u.line = t.line;
    u.col = t.col;
    u.name = expect_name("a hole name");
    expect_punct("(");
    if (!at_punct(")")) {
      u.args.push_back(expect_name("an argument name"));
      while (at_punct(",")) {
        next();
        u.args.push_back(expect_name("an argument name"));
      }
    }
    expect_punct(")");
    return u;
  }

  ValType parse_type() {
    if (at_word("bool")) {
      next();
      return ValType::boolean();
    }
    if (at_word("set")) {
      next();
      return ValType::set(expect_name("a sort name"));
    }
    return ValType::atom(expect_name("a type"));
  }

  void parse_sort() {
    Token t = peek();
    expect_word("sort");
    SortDecl s;
    s.line = t.line;
    s.col = t.col;
    s.name = expect_name("a sort name");
    s.cardinality = expect_int();
    sk.sorts.add(s);
  }

  void parse_var() {
    Token t = peek();
    expect_word("var");
    VarDecl v;
    v.line = t.line;
    v.col = t.col;
    v.name = expect_name("a variable name");
    expect_punct(":");
    v.type = parse_type();
    sk.vars.push_back(v);
  }

  void parse_init() {
    expect_word("init");
    init_surface = parse_expr();
  }

  void parse_action() {
    Token t = peek();
    expect_word("action");
    SurfaceAction a;
    a.line = t.line;
    a.col = t.col;
    a.name = expect_name("an action name");
    expect_punct("(");
    if (!at_punct(")")) {
      while (true) {
        std::string pn = expect_name("a parameter name");
        expect_punct(":");
        std::string ps = expect_name("a sort name");
        a.params.emplace_back(pn, ps);
        if (!at_punct(",")) break;
        next();
      }
    }
    expect_punct(")");
    if (at_word("fairness")) {
      next();
      if (at_word("none"))
        a.fairness = Fairness::None;
      else if (at_word("weak"))
        a.fairness = Fairness::Weak;
      else if (at_word("strong"))
        a.fairness = Fairness::Strong;
      else
        throw ParseError{"expected none, weak or strong", peek().line, peek().col};
      next();
    }
    while (at_word("pre") || at_word("post")) {
      bool is_pre = peek().text == "pre";
      Token ct = peek();
      next();
      expect_punct(":");
      if (is_pre) {
        SurfacePre p;
        if (at_punct("?")) {
          p.is_hole = true;
          p.hole = parse_hole_use();
        } else {
          p.fixed = parse_expr();
        }
        a.pres.push_back(std::move(p));
      } else {
        SurfacePost p;
        p.line = ct.line;
        p.col = ct.col;
        p.var = expect_name("a variable name");
        expect_punct("'");
        expect_punct("=");
        if (at_punct("?")) {
          p.is_hole = true;
          p.hole = parse_hole_use();
        } else {
          p.fixed = parse_expr();
        }
        a.posts.push_back(std::move(p));
      }
    }
    actions.push_back(std::move(a));
  }

  void parse_hole_block() {
    Token t = peek();
    expect_word("hole");
    SurfaceHole h;
    h.line = t.line;
    h.col = t.col;
    h.name = expect_name("a hole name");
    expect_word("grammar");
    expect_punct(":");
    while (peek().kind == Token::Ident && !kKeywords.count(peek().text) &&
           peek(1).kind == Token::Punct && peek(1).text == "::=") {
      SurfaceRule first;
      first.line = peek().line;
      first.col = peek().col;
      first.nt = next().text;
      next();  // ::=
      first.tmpl = parse_expr();
      h.rules.push_back(first);
      while (at_punct("|")) {
        next();
        SurfaceRule r;
        r.nt = h.rules.back().nt;
        r.line = peek().line;
        r.col = peek().col;
        r.tmpl = parse_expr();
        h.rules.push_back(std::move(r));
      }
    }
    if (h.rules.empty())
      throw ParseError{"hole " + h.name + ": expected at least one grammar rule", t.line, t.col};
    hole_blocks.push_back(std::move(h));
  }

  void parse_property() {
    expect_word("property");
    expect_punct(":");
    Property p;
    if (at_word("always")) {
      p.kind = Property::Kind::Always;
    } else if (at_word("eventually")) {
      p.kind = Property::Kind::Eventually;
    } else if (at_word("leadsto")) {
      p.kind = Property::Kind::LeadsTo;
    } else {
      throw ParseError{"expected always, eventually or leadsto", peek().line, peek().col};
    }
    next();
    expect_punct("(");
    p.a = parse_expr();
    if (p.kind == Property::Kind::LeadsTo) {
      expect_punct(",");
      p.b = parse_expr();
    }
    expect_punct(")");
    props_surface.push_back(std::move(p));
  }

  void parse_file() {
    while (peek().kind != Token::End) {
      if (at_word("sort"))
        parse_sort();
      else if (at_word("var"))
        parse_var();
      else if (at_word("init"))
        parse_init();
      else if (at_word("action"))
        parse_action();
      else if (at_word("hole"))
        parse_hole_block();
      else if (at_word("property"))
        parse_property();
      else
        throw ParseError{"expected a declaration, got '" + peek().text + "'", peek().line,
                         peek().col};
    }
  }
};

// Rewrites identifiers that name a declared sort (and are not shadowed by a
// state variable, action parameter or quantifier binding) into FullSort.
ExprPtr resolve_sorts(const ExprPtr& e, const SortTable& sorts, std::set<std::string>& bound) {
  if (e->op == Op::VarRef) {
    if (!bound.count(e->name) && sorts.has(e->name)) {
      auto r = std::make_shared<Expr>(*e);
      r->op = Op::FullSort;
      return r;
    }
    return e;
  }
  if (e->op == Op::Forall || e->op == Op::Exists) {
    bool added = bound.insert(e->name).second;
    auto r = std::make_shared<Expr>(*e);
    r->kids = {resolve_sorts(e->kids[0], sorts, bound)};
    if (added) bound.erase(e->name);
    return r;
  }
  if (e->kids.empty()) return e;
  auto r = std::make_shared<Expr>(*e);
  for (auto& k : r->kids) k = resolve_sorts(k, sorts, bound);
  return r;
}

GTemplatePtr to_template(const ExprPtr& e, const std::set<std::string>& nts,
                         const std::set<std::string>& args, const SortTable& sorts,
                         std::vector<Diagnostic>& diags) {
  auto t = std::make_shared<GTemplate>();
  t->line = e->line;
  t->col = e->col;
  if (e->op == Op::VarRef) {
    if (nts.count(e->name)) {
      t->placeholder = true;
      t->nt = e->name;
      return t;
    }
    if (args.count(e->name)) {
      t->op = Op::VarRef;
      t->name = e->name;
      return t;
    }
    if (sorts.has(e->name)) {
      t->op = Op::FullSort;
      t->name = e->name;
      return t;
    }
    diags.push_back({"unbound name in grammar rule: " + e->name, e->line, e->col});
    t->op = Op::VarRef;
    t->name = e->name;
    return t;
  }
  t->op = e->op;
  t->name = e->name;
  t->b = e->b;
  for (const auto& k : e->kids) t->kids.push_back(to_template(k, nts, args, sorts, diags));
  return t;
}

struct Linker {
  Parser& p;
  std::vector<Diagnostic>& diags;
  Sketch& sk;

  void link() {
    link_init();
    link_holes_stub();
    link_actions();
    finish_holes();
    link_props();
  }

  TypeEnv action_type_env(const SurfaceAction& a) {
    TypeEnv env = sk.var_type_env();
    for (const auto& pr : a.params) env.push(pr.first, ValType::atom(pr.second));
    return env;
  }

  std::set<std::string> action_bound_names(const SurfaceAction& a) {
    std::set<std::string> bound;
    for (const auto& v : sk.vars) bound.insert(v.name);
    for (const auto& pr : a.params) bound.insert(pr.first);
    return bound;
  }

  ExprPtr elab_or_report(const ExprPtr& surface, const ValType& want, const TypeEnv& env,
                         std::set<std::string> bound, const std::string& where) {
    ExprPtr resolved = resolve_sorts(surface, sk.sorts, bound);
    TypeError err;
    auto r = elaborate_expect(resolved, want, env, sk.sorts, &err);
    if (!r) {
      diags.push_back({where + ": " + err.message, err.line, err.col});
      return nullptr;
    }
    return *r;
  }

  void link_init() {
    if (!p.init_surface) {
      diags.push_back({"missing init declaration", 0, 0});
      return;
    }
    std::set<std::string> bound;
    for (const auto& v : sk.vars) bound.insert(v.name);
    sk.init = elab_or_report(p.init_surface, ValType::boolean(), sk.var_type_env(), bound, "init");
  }

  void link_holes_stub() {
    for (const auto& hb : p.hole_blocks) {
      if (sk.hole_index(hb.name) >= 0) {
        diags.push_back({"duplicate hole: " + hb.name, hb.line, hb.col});
        continue;
      }
      HoleDecl h;
      h.name = hb.name;
      h.line = hb.line;
      h.col = hb.col;
      h.index = static_cast<int>(sk.holes.size());
      sk.holes.push_back(std::move(h));
    }
  }

  void bind_hole_use(const HoleUse& use, HoleKind kind, int action_index,
                     const std::string& var, const ValType& result) {
    int hi = sk.hole_index(use.name);
    if (hi < 0) {
      diags.push_back({"hole " + use.name + " has no grammar declaration", use.line, use.col});
      return;
    }
    HoleDecl& h = sk.holes[hi];
    if (h.action_index >= 0) {
      diags.push_back({"hole " + use.name + " is used more than once", use.line, use.col});
      return;
    }
    const SurfaceAction& a = p.actions[action_index];
    TypeEnv env = action_type_env(a);
    h.kind = kind;
    h.action_index = action_index;
    h.var = var;
    h.result = result;
    h.arg_names = use.args;
    for (const auto& an : use.args) {
      const ValType* t = env.lookup(an);
      if (!t) {
        diags.push_back({"hole " + use.name + ": unbound argument " + an, use.line, use.col});
        h.arg_types.push_back(ValType::boolean());
      } else {
        h.arg_types.push_back(*t);
      }
    }
  }

  void link_actions() {
    for (size_t ai = 0; ai < p.actions.size(); ++ai) {
      const SurfaceAction& sa = p.actions[ai];
      ActionDecl a;
      a.name = sa.name;
      a.line = sa.line;
      a.col = sa.col;
      a.params = sa.params;
      a.fairness = sa.fairness;
      TypeEnv env = action_type_env(sa);
      std::set<std::string> bound = action_bound_names(sa);
      for (const auto& pre : sa.pres) {
        if (pre.is_hole) {
          bind_hole_use(pre.hole, HoleKind::Pre, static_cast<int>(ai), "", ValType::boolean());
          int hi = sk.hole_index(pre.hole.name);
          if (hi >= 0 && sk.holes[hi].action_index == static_cast<int>(ai))
            a.pre_holes.push_back(hi);
        } else {
          ExprPtr e = elab_or_report(pre.fixed, ValType::boolean(), env, bound,
                                     "action " + sa.name + " pre");
          if (e) a.fixed_pres.push_back(e);
        }
      }
      a.post_clauses.assign(sk.vars.size(), PostClause{});
      std::vector<bool> seen(sk.vars.size(), false);
      for (const auto& post : sa.posts) {
        int vi = sk.var_index(post.var);
        if (vi < 0) {
          diags.push_back({"action " + sa.name + ": unknown variable " + post.var + " in post",
                           post.line, post.col});
          continue;
        }
        if (seen[vi]) {
          diags.push_back({"action " + sa.name + ": duplicate post-clause for " + post.var,
                           post.line, post.col});
          continue;
        }
        seen[vi] = true;
        if (post.is_hole) {
          bind_hole_use(post.hole, HoleKind::Post, static_cast<int>(ai), post.var,
                        sk.vars[vi].type);
          int hi = sk.hole_index(post.hole.name);
          if (hi >= 0 && sk.holes[hi].action_index == static_cast<int>(ai) &&
              sk.holes[hi].var == post.var)
            a.post_clauses[vi].hole_index = hi;
        } else {
          a.post_clauses[vi].fixed = elab_or_report(
              post.fixed, sk.vars[vi].type, env, bound,
              "action " + sa.name + " post " + post.var);
        }
      }
      for (size_t vi = 0; vi < sk.vars.size(); ++vi)
        if (!seen[vi])
          diags.push_back({"action " + sa.name + ": missing post-clause for variable " +
                               sk.vars[vi].name,
                           sa.line, sa.col});
      sk.actions.push_back(std::move(a));
    }
  }

  void finish_holes() {
    for (size_t i = 0; i < p.hole_blocks.size(); ++i) {
      const SurfaceHole& hb = p.hole_blocks[i];
      int hi = sk.hole_index(hb.name);
      if (hi < 0) continue;
      HoleDecl& h = sk.holes[hi];
      if (h.action_index < 0) {
        diags.push_back({"hole " + hb.name + " is not used by any action", hb.line, hb.col});
        continue;
      }
      std::set<std::string> nts;
      for (const auto& r : hb.rules) {
        if (!nts.count(r.nt)) {
          nts.insert(r.nt);
          h.grammar.nonterminals.push_back(r.nt);
        }
      }
      h.grammar.start = hb.rules.front().nt;
      std::set<std::string> args(h.arg_names.begin(), h.arg_names.end());
      for (const auto& r : hb.rules) {
        GrammarRule gr;
        gr.nt = r.nt;
        gr.tmpl = to_template(r.tmpl, nts, args, sk.sorts, diags);
        h.grammar.rules.push_back(std::move(gr));
      }
      TypeEnv argenv;
      for (size_t j = 0; j < h.arg_names.size(); ++j) argenv.push(h.arg_names[j], h.arg_types[j]);
      type_grammar(h.grammar, argenv, h.result, sk.sorts, h.name, diags);
    }
  }

  void link_props() {
    TypeEnv env = sk.var_type_env();
    std::set<std::string> bound;
    for (const auto& v : sk.vars) bound.insert(v.name);
    for (auto& sp : p.props_surface) {
      Property prop;
      prop.kind = sp.kind;
      prop.a = elab_or_report(sp.a, ValType::boolean(), env, bound, "property");
      if (sp.kind == Property::Kind::LeadsTo)
        prop.b = elab_or_report(sp.b, ValType::boolean(), env, bound, "property");
      if (prop.a && (prop.kind != Property::Kind::LeadsTo || prop.b))
        p.props_surface_linked.push_back(prop);
    }
  }
};

}  // namespace

ParseResult parse_sketch(const std::string& text) {
  ParseResult result;
  Parser parser;
  try {
    Lexer lex{text};
    parser.toks = lex.run();
    parser.parse_file();
  } catch (const ParseError& e) {
    result.diags.push_back({e.message, e.line, e.col});
    return result;
  }
  Linker linker{parser, result.diags, parser.sk};
  linker.link();
  if (!result.diags.empty()) {
    result.sketch = std::move(parser.sk);
    result.props = std::move(parser.props_surface_linked);
    return result;
  }
  auto vdiags = validate(parser.sk, parser.props_surface_linked);
  result.diags.insert(result.diags.end(), vdiags.begin(), vdiags.end());
  result.sketch = std::move(parser.sk);
  result.props = std::move(parser.props_surface_linked);
  result.ok = result.diags.empty();
  return result;
}

ParseResult parse_sketch_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    ParseResult r;
    r.diags.push_back({"cannot open file: " + path, 0, 0});
    return r;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_sketch(buf.str());
}

ExprPtr parse_hole_expr(const Sketch& sk, int hole, const std::string& text,
                        std::string* error) {
  const HoleDecl& h = sk.holes[hole];
  Parser parser;
  ExprPtr surface;
  try {
    Lexer lex{text};
    parser.toks = lex.run();
    surface = parser.parse_expr();
  } catch (const ParseError& e) {
    if (error) *error = e.message;
    return nullptr;
  }
  std::set<std::string> bound(h.arg_names.begin(), h.arg_names.end());
  ExprPtr resolved = resolve_sorts(surface, sk.sorts, bound);
  TypeEnv env;
  for (size_t i = 0; i < h.arg_names.size(); ++i) env.push(h.arg_names[i], h.arg_types[i]);
  TypeError err;
  auto r = elaborate_expect(resolved, h.result, env, sk.sorts, &err);
  if (!r) {
    if (error) *error = err.message;
    return nullptr;
  }
  return *r;
}

}  // namespace protosynth
