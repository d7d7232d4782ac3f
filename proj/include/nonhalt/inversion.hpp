#pragma once

// Black-box search for short prompts whose deterministic generation is
// certified non-halting with a chosen symbol inside the cycle.

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "nonhalt/core.hpp"
#include "nonhalt/sampler.hpp"
#include "nonhalt/sim_model.hpp"

namespace nonhalt {

enum class SearchStrategy { kExhaustive, kRandom, kHillClimb };
enum class SearchRefusal { kSearchSpaceTooLarge };

std::string_view to_string(SearchStrategy strategy);
std::string_view to_string(SearchRefusal refusal);
std::optional<SearchStrategy> parse_strategy(std::string_view name);

struct InversionOptions {
  std::size_t horizon = 256;
  std::size_t c_max = 64;
};

struct InversionStats {
  std::size_t evaluations = 0;  // prompts simulated
  std::size_t certified = 0;    // evaluations certified non-halting (any cycle)
  std::size_t halted = 0;
  std::size_t hits = 0;         // distinct prompts certified with target in the cycle
  double hit_rate = 0.0;        // hits / evaluations
};

struct InversionResult {
  std::vector<SymbolStream> prompts;  // in discovery order
  InversionStats stats;
  std::optional<SearchRefusal> refusal;
};

/// Spends at most `budget` model evaluations. EXHAUSTIVE enumerates all
/// N^prompt_len prompts in lexicographic order and is refused when that
/// exceeds the budget; RANDOM and HILL_CLIMB draw from config.seed.
/// Throws PreconditionError for non-deterministic sampling.
InversionResult invert_search(const SimModel& model, SymbolId target, std::size_t prompt_len,
                              SearchStrategy strategy, std::size_t budget,
                              const SamplerConfig& config, const InversionOptions& options = {});

}  // namespace nonhalt
