#include "protosynth/value.hpp"

#include <algorithm>

namespace protosynth {

bool SortTable::has(const std::string& name) const {
  for (const auto& s : sorts_)
    if (s.name == name) return true;
  return false;
}

int SortTable::cardinality_of(const std::string& name) const {
  for (const auto& s : sorts_)
    if (s.name == name) return s.cardinality;
  throw std::runtime_error("unknown sort: " + name);
}

std::string ValType::to_string() const {
  switch (kind) {
    case TypeKind::Bool: return "bool";
    case TypeKind::Atom: return sort;
    case TypeKind::Set: return "set " + sort;
  }
  return "?";
}

Value Value::boolean(bool v) {
  Value r;
  r.kind = ValueKind::Bool;
  r.b = v;
  return r;
}

Value Value::atom_of(std::string sort, int index) {
  Value r;
  r.kind = ValueKind::Atom;
  r.sort = std::move(sort);
  r.atom = index;
  return r;
}

Value Value::set_of(std::string sort, uint32_t mask) {
  Value r;
  r.kind = ValueKind::Set;
  r.sort = std::move(sort);
  r.members = mask;
  return r;
}

bool Value::operator==(const Value& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case ValueKind::Bool: return b == o.b;
    case ValueKind::Atom: return atom == o.atom && sort == o.sort;
    case ValueKind::Set: return members == o.members && sort == o.sort;
  }
  return false;
}

bool Value::operator<(const Value& o) const {
  if (kind != o.kind) return static_cast<int>(kind) < static_cast<int>(o.kind);
  switch (kind) {
    case ValueKind::Bool: return b < o.b;
    case ValueKind::Atom: return sort != o.sort ? sort < o.sort : atom < o.atom;
    case ValueKind::Set: return sort != o.sort ? sort < o.sort : members < o.members;
  }
  return false;
}

std::string Value::to_string() const {
  switch (kind) {
    case ValueKind::Bool: return b ? "true" : "false";
    case ValueKind::Atom: return sort + std::to_string(atom);
    case ValueKind::Set: {
      std::string out = "{";
      bool first = true;
      for (int i = 1; i <= 32; ++i) {
        if (members & (1u << (i - 1))) {
          if (!first) out += ", ";
          out += sort + std::to_string(i);
          first = false;
        }
      }
      out += "}";
      return out;
    }
  }
  return "?";
}

size_t hash_of(const Value& v) {
  size_t h = static_cast<size_t>(v.kind) * 0x9e3779b97f4a7c15ull;
  switch (v.kind) {
    case ValueKind::Bool: h ^= v.b ? 0x1234567u : 0x89abcdefu; break;
    case ValueKind::Atom: h ^= static_cast<size_t>(v.atom) * 0xff51afd7ed558ccdull; break;
    case ValueKind::Set: h ^= static_cast<size_t>(v.members) * 0xc4ceb9fe1a85ec53ull; break;
  }
  h ^= std::hash<std::string>{}(v.sort) + (h << 6);
  return h;
}

const Value* Env::lookup(const std::string& name) const {
  for (auto it = items.rbegin(); it != items.rend(); ++it)
    if (it->first == name) return &it->second;
  return nullptr;
}

size_t StateHash::operator()(const State& s) const {
  size_t h = 0x2545f4914f6cdd1dull;
  for (const auto& v : s.vals) h = h * 31 + hash_of(v);
  return h;
}

Interpretation restrict_to_args(const Env& state, const Env& params,
                                const std::vector<std::string>& args) {
  Interpretation out;
  out.vals.reserve(args.size());
  for (const auto& a : args) {
    const Value* v = state.lookup(a);
    if (!v) v = params.lookup(a);
    if (!v) throw MissingArgError("unbound hole argument: " + a);
    out.vals.push_back(*v);
  }
  return out;
}

uint32_t full_mask(int cardinality) {
  return cardinality >= 32 ? ~0u : ((1u << cardinality) - 1u);
}

}  // namespace protosynth
