#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "protosynth/expr.hpp"
#include "protosynth/value.hpp"

namespace protosynth {

// One alternative of a grammar rule: an expression shape whose leaves are
// terminals (hole arguments, {}, a sort name, true/false, a singleton) or
// placeholders naming other nonterminals.
struct GTemplate;
using GTemplatePtr = std::shared_ptr<const GTemplate>;

struct GTemplate {
  bool placeholder = false;
  std::string nt;  // placeholder only

  Op op = Op::EmptySet;
  std::string name;  // as in Expr
  bool b = false;
  std::vector<GTemplatePtr> kids;

  int line = 0, col = 0;
};

// Placeholder nonterminals in depth-first (left-to-right) order.
void collect_placeholders(const GTemplatePtr& t, std::vector<std::string>& out);
int ground_node_count(const GTemplatePtr& t);

// Builds the concrete expression, consuming `fills` in placeholder order.
ExprPtr instantiate(const GTemplatePtr& t, const std::vector<ExprPtr>& fills);

// Evaluates the template under `args`, taking placeholder values from
// `fills` in placeholder order. Equivalent to eval(instantiate(...)).
Value eval_template(const GTemplatePtr& t, const Env& args, const std::vector<Value>& fills,
                    const SortTable& sorts);

struct GrammarRule {
  std::string nt;
  GTemplatePtr tmpl;
  std::vector<std::string> placeholders;  // derived
  int ground_nodes = 0;                   // derived
};

struct GrammarDecl {
  std::string start;                      // first rule's nonterminal
  std::vector<std::string> nonterminals;  // declaration order
  std::vector<GrammarRule> rules;         // declaration order
  std::map<std::string, ValType> nt_types;  // filled by validation
};

enum class HoleKind { Pre, Post };

struct HoleDecl {
  std::string name;
  int line = 0, col = 0;
  HoleKind kind = HoleKind::Post;
  std::vector<std::string> arg_names;
  std::vector<ValType> arg_types;
  GrammarDecl grammar;
  ValType result;
  int action_index = -1;
  std::string var;  // post holes: the updated state variable
  int index = -1;   // position in sketch hole order
};

enum class Fairness { None, Weak, Strong };

// A post-clause is either a fixed expression or a reference to a post-hole.
struct PostClause {
  ExprPtr fixed;   // null when hole_index >= 0
  int hole_index = -1;
};

struct ActionDecl {
  std::string name;
  int line = 0, col = 0;
  std::vector<std::pair<std::string, std::string>> params;  // name, sort
  Fairness fairness = Fairness::None;
  std::vector<ExprPtr> fixed_pres;
  std::vector<int> pre_holes;             // hole indices, declaration order
  std::vector<PostClause> post_clauses;   // aligned with sketch var order
};

struct VarDecl {
  std::string name;
  ValType type;
  int line = 0, col = 0;
};

struct Property {
  enum class Kind { Always, Eventually, LeadsTo };
  Kind kind;
  ExprPtr a;
  ExprPtr b;  // LeadsTo only

  std::string to_string() const;
};

struct Sketch {
  SortTable sorts;
  std::vector<VarDecl> vars;
  ExprPtr init;
  std::vector<ActionDecl> actions;
  std::vector<HoleDecl> holes;

  int var_index(const std::string& name) const;   // -1 if absent
  int hole_index(const std::string& name) const;  // -1 if absent
  TypeEnv var_type_env() const;
};

struct Diagnostic {
  std::string message;
  int line = 0, col = 0;

  std::string render(const std::string& file) const;
};

// Infers nonterminal types from the start symbol and the hole argument types,
// rewrites rule templates with resolved {} sorts, and fills g.nt_types and the
// per-rule placeholder metadata. Appends diagnostics and returns false on error.
bool type_grammar(GrammarDecl& g, const TypeEnv& args, const ValType& result,
                  const SortTable& sorts, const std::string& hole_name,
                  std::vector<Diagnostic>& diags);

// Re-checks every structural invariant of an already linked sketch plus its
// properties. Returns an empty list when valid; never throws.
std::vector<Diagnostic> validate(const Sketch& sk, const std::vector<Property>& props);

// Canonical concrete syntax for the whole specification.
std::string pretty_print(const Sketch& sk, const std::vector<Property>& props);

}  // namespace protosynth
