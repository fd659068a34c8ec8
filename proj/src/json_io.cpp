#include "protosynth/json_io.hpp"

namespace protosynth {

json value_to_json(const Value& v) {
  switch (v.kind) {
    case ValueKind::Bool: return v.b;
    case ValueKind::Atom: return v.to_string();
    case ValueKind::Set: {
      json arr = json::array();
      for (int i = 1; i <= 32; ++i)
        if (v.members & (1u << (i - 1))) arr.push_back(v.sort + std::to_string(i));
      return arr;
    }
  }
  return nullptr;
}

json interp_to_json(const Sketch& sk, int hole, const Interpretation& interp) {
  json out = json::object();
  const HoleDecl& h = sk.holes[hole];
  for (size_t i = 0; i < h.arg_names.size(); ++i)
    out[h.arg_names[i]] = value_to_json(interp.vals[i]);
  return out;
}

json state_to_json(const Sketch& sk, const State& s) {
  json out = json::object();
  for (size_t i = 0; i < sk.vars.size(); ++i) out[sk.vars[i].name] = value_to_json(s.vals[i]);
  return out;
}

json instance_to_json(const Sketch& sk, const ActionInstance& ai) {
  json out = json::object();
  out["action"] = sk.actions[ai.action].name;
  json params = json::object();
  for (size_t i = 0; i < ai.params.size(); ++i)
    params[sk.actions[ai.action].params[i].first] = value_to_json(ai.params[i]);
  out["params"] = params;
  return out;
}

json counterexample_to_json(const Sketch& sk, const std::vector<Property>& props,
                            const Counterexample& cex) {
  json out = json::object();
  out["kind"] = cex_kind_name(cex.kind);
  json states = json::array();
  for (const auto& s : cex.states) states.push_back(state_to_json(sk, s));
  out["states"] = states;
  json taken = json::array();
  for (const auto& a : cex.taken) taken.push_back(instance_to_json(sk, a));
  out["taken"] = taken;
  if (cex.loop_start >= 0)
    out["loop_start"] = cex.loop_start;
  else
    out["loop_start"] = nullptr;
  if (cex.property_index >= 0)
    out["property"] = props[cex.property_index].to_string();
  else
    out["property"] = nullptr;
  return out;
}

json constraint_to_json(const Sketch& sk, const PruningConstraint& pc) {
  switch (pc.kind) {
    case PruningConstraint::Kind::Atom: {
      json atom = json::object();
      atom["hole"] = pc.atom.hole;
      atom["interp"] = interp_to_json(sk, sk.hole_index(pc.atom.hole), pc.atom.interp);
      atom["neq"] = value_to_json(pc.atom.constant);
      return json{{"atom", atom}};
    }
    case PruningConstraint::Kind::Or: {
      json arr = json::array();
      for (const auto& k : pc.children) arr.push_back(constraint_to_json(sk, k));
      return json{{"or", arr}};
    }
    case PruningConstraint::Kind::And: {
      json arr = json::array();
      for (const auto& k : pc.children) arr.push_back(constraint_to_json(sk, k));
      return json{{"and", arr}};
    }
  }
  return nullptr;
}

json cache_dump(const GlobalSpace& gs) {
  const Sketch& sk = gs.sketch();
  json holes = json::array();
  for (size_t hi = 0; hi < gs.hole_count(); ++hi) {
    const HoleSpace& hs = gs.hole_space(static_cast<int>(hi));
    json h = json::object();
    h["hole"] = sk.holes[hi].name;
    json interps = json::array();
    for (const auto& interp : hs.interps)
      interps.push_back(interp_to_json(sk, static_cast<int>(hi), interp));
    h["interps"] = interps;
    h["closed"] = hs.closed;
    json classes = json::array();
    for (const auto& entry : hs.classes) {
      json c = json::object();
      c["nonterminal"] = entry.nt;
      json vec = json::array();
      for (const auto& v : entry.vec) vec.push_back(value_to_json(v));
      c["vector"] = vec;
      c["representative"] = pretty(entry.rep);
      c["size"] = entry.size;
      classes.push_back(c);
    }
    h["classes"] = classes;
    holes.push_back(h);
  }
  return json{{"holes", holes}};
}

json stats_to_json(const SynthStats& stats, const Sketch& sk, bool with_timing) {
  json out = json::object();
  out["candidates_enumerated"] = stats.candidates_enumerated;
  out["candidates_pruned"] = stats.candidates_pruned;
  out["verifier_calls"] = stats.verifier_calls;
  out["constraints_added"] = stats.constraints_added;
  out["interps_total"] = stats.interps_total;
  json classes = json::object();
  for (size_t hi = 0; hi < stats.classes_per_hole.size() && hi < sk.holes.size(); ++hi)
    classes[sk.holes[hi].name] = stats.classes_per_hole[hi];
  out["classes_per_hole"] = classes;
  if (with_timing) out["wall_time_seconds"] = stats.wall_time_seconds;
  return out;
}

}  // namespace protosynth
