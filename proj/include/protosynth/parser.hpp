#pragma once

#include <string>
#include <vector>

#include "protosynth/sketch.hpp"

namespace protosynth {

struct ParseResult {
  bool ok = false;
  Sketch sketch;
  std::vector<Property> props;
  std::vector<Diagnostic> diags;
};

// Parses, links and validates a .sketch specification. Deterministic; on
// failure `diags` carries source locations and `ok` is false.
ParseResult parse_sketch(const std::string& text);

ParseResult parse_sketch_file(const std::string& path);

// Parses one expression in the scope of the hole's arguments and checks it
// against the hole's result type. Used to assemble completions from text.
ExprPtr parse_hole_expr(const Sketch& sk, int hole, const std::string& text,
                        std::string* error = nullptr);

}  // namespace protosynth
