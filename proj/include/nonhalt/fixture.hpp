#pragma once

// Plain-text simulator model files (UTF-8, '#' starts a comment):
//
//   @kind table            table | hash_echo
//   @w 4                   context size
//   @vocab 3               N; symbol ids are 0..N-1
//   @eos 0                 eos id (default 0)
//   @seed 7                hash_echo only
//   @echo_beta 2.5         hash_echo only
//   @eos_bias 0.0          hash_echo only
//   @text 1 Adam           optional unit text; escapes \n \t \s (space) \\ .
//   1 1 -> 0,10,0          table entry: window ids -> N comma-separated logits

#include <iosfwd>
#include <string>
#include <string_view>

#include "nonhalt/sim_model.hpp"

namespace nonhalt {

SimModel parse_model(std::istream& in);
SimModel parse_model(std::string_view text);
SimModel load_model(const std::string& path);

/// Serializes in the format parse_model reads.
std::string format_model(const SimModel& model);

std::string unescape_text(std::string_view s);
std::string escape_text(std::string_view s);

/// Parses whitespace- or comma-separated symbol ids ("0 3 3" or "0,3,3").
SymbolStream parse_ids(std::string_view text);

}  // namespace nonhalt
