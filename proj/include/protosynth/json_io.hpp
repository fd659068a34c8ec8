#pragma once

#include "json.hpp"
#include "protosynth/cegis.hpp"

namespace protosynth {

using json = nlohmann::ordered_json;

json value_to_json(const Value& v);
json interp_to_json(const Sketch& sk, int hole, const Interpretation& interp);
json state_to_json(const Sketch& sk, const State& s);
json instance_to_json(const Sketch& sk, const ActionInstance& ai);
json counterexample_to_json(const Sketch& sk, const std::vector<Property>& props,
                            const Counterexample& cex);
json constraint_to_json(const Sketch& sk, const PruningConstraint& pc);
json cache_dump(const GlobalSpace& gs);
json stats_to_json(const SynthStats& stats, const Sketch& sk, bool with_timing);

}  // namespace protosynth
