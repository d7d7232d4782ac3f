#include "nonhalt/inversion.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "nonhalt/oracle.hpp"

namespace nonhalt {

std::string_view to_string(SearchStrategy strategy) {
  switch (strategy) {
    case SearchStrategy::kExhaustive: return "exhaustive";
    case SearchStrategy::kRandom: return "random";
    case SearchStrategy::kHillClimb: return "hill-climb";
  }
  return "unknown";
}

std::string_view to_string(SearchRefusal refusal) {
  switch (refusal) {
    case SearchRefusal::kSearchSpaceTooLarge: return "SEARCH_SPACE_TOO_LARGE";
  }
  return "UNKNOWN";
}

std::optional<SearchStrategy> parse_strategy(std::string_view name) {
  if (name == "exhaustive") return SearchStrategy::kExhaustive;
  if (name == "random") return SearchStrategy::kRandom;
  if (name == "hill-climb" || name == "hill_climb") return SearchStrategy::kHillClimb;
  return std::nullopt;
}

namespace {

class Evaluator {
 public:
  Evaluator(const SimModel& model, SymbolId target, const SamplerConfig& config,
            const InversionOptions& options, InversionResult& result)
      : model_(model), target_(target), config_(config), options_(options), result_(result) {}

  // Returns a score: +inf-like for a hit, else how often the target shows up.
  std::size_t evaluate(const SymbolStream& prompt) {
    ++result_.stats.evaluations;
    const CertifiedRun run =
        run_until_certified(model_, prompt, config_, options_.horizon, options_.c_max);
    if (run.status == RunStatus::kHalted) ++result_.stats.halted;
    if (run.status == RunStatus::kCertified) {
      ++result_.stats.certified;
      const auto& cycle = run.certificate->anomaly.cycle;
      if (std::find(cycle.begin(), cycle.end(), target_) != cycle.end()) {
        if (found_.insert(prompt).second) result_.prompts.push_back(prompt);
        return kHit;
      }
    }
    return static_cast<std::size_t>(std::count(run.output.begin(), run.output.end(), target_));
  }

  static constexpr std::size_t kHit = static_cast<std::size_t>(-1);

 private:
  const SimModel& model_;
  SymbolId target_;
  SamplerConfig config_;
  InversionOptions options_;
  InversionResult& result_;
  std::set<SymbolStream> found_;
};

SymbolStream random_prompt(RngState& rng, std::size_t len, std::size_t n) {
  SymbolStream p(len);
  for (auto& id : p) id = static_cast<SymbolId>(rng.next_u64() % n);
  return p;
}

}  // namespace

InversionResult invert_search(const SimModel& model, SymbolId target, std::size_t prompt_len,
                              SearchStrategy strategy, std::size_t budget,
                              const SamplerConfig& config, const InversionOptions& options) {
  if (!is_deterministic(config)) throw PreconditionError("inversion requires deterministic sampling");
  if (prompt_len == 0) throw PreconditionError("prompt_len must be >= 1");
  if (target >= model.vocab_size()) throw InputError("target symbol out of vocabulary");
  config.validate(model.vocab_size());

  InversionResult result;
  Evaluator eval(model, target, config, options, result);
  const std::size_t n = model.vocab_size();

  switch (strategy) {
    case SearchStrategy::kExhaustive: {
      std::size_t space = 1;
      for (std::size_t i = 0; i < prompt_len; ++i) {
        if (space > budget / n) {
          space = budget + 1;
          break;
        }
        space *= n;
      }
      if (space > budget) {
        result.refusal = SearchRefusal::kSearchSpaceTooLarge;
        return result;
      }
      SymbolStream prompt(prompt_len, 0);
      for (std::size_t k = 0; k < space; ++k) {
        eval.evaluate(prompt);
        // Odometer increment, last position fastest.
        for (std::size_t pos = prompt_len; pos-- > 0;) {
          if (++prompt[pos] < n) break;
          prompt[pos] = 0;
        }
      }
      break;
    }
    case SearchStrategy::kRandom: {
      RngState rng{config.seed};
      for (std::size_t k = 0; k < budget; ++k) eval.evaluate(random_prompt(rng, prompt_len, n));
      break;
    }
    case SearchStrategy::kHillClimb: {
      RngState rng{config.seed};
      std::map<SymbolStream, std::size_t> seen;
      auto score_of = [&](const SymbolStream& p) {
        if (auto it = seen.find(p); it != seen.end()) return it->second;
        return seen[p] = eval.evaluate(p);
      };
      SymbolStream current = random_prompt(rng, prompt_len, n);
      std::size_t current_score = score_of(current);
      // Revisits cost nothing, so cap proposals to stay finite once the
      // neighbourhood is exhausted.
      for (std::size_t proposals = 0; result.stats.evaluations < budget && proposals < 64 * budget;
           ++proposals) {
        if (current_score == Evaluator::kHit) {
          current = random_prompt(rng, prompt_len, n);
          current_score = score_of(current);
          continue;
        }
        SymbolStream candidate = current;
        const std::size_t pos = rng.next_u64() % prompt_len;
        candidate[pos] = static_cast<SymbolId>((candidate[pos] + 1 + rng.next_u64() % (n - 1)) % n);
        const std::size_t s = score_of(candidate);
        if (s >= current_score) {
          current = std::move(candidate);
          current_score = s;
        }
      }
      break;
    }
  }

  result.stats.hits = result.prompts.size();
  result.stats.hit_rate = result.stats.evaluations == 0
                              ? 0.0
                              : static_cast<double>(result.stats.hits) /
                                    static_cast<double>(result.stats.evaluations);
  return result;
}

}  // namespace nonhalt
