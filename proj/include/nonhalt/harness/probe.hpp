#pragma once

// One attack attempt against a model endpoint, classified by the cycle engine.

#include <chrono>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nonhalt/core.hpp"
#include "nonhalt/cycle.hpp"
#include "nonhalt/harness/client.hpp"
#include "nonhalt/recipe_query.hpp"
#include "nonhalt/sampler.hpp"

namespace nonhalt {

enum class Classification { kCertified, kSuspected, kHalted, kInconclusive };

std::string_view to_string(Classification c);
std::optional<Classification> parse_classification(std::string_view name);

inline bool is_non_halting(Classification c) {
  return c == Classification::kCertified || c == Classification::kSuspected;
}

inline constexpr std::size_t kDefaultOutputBudget = 4096;

struct ProbeRecord {
  std::string model_id;
  std::optional<RecipeQuery> query;
  std::string prompt;
  SamplerConfig config;
  SymbolStream output;
  std::vector<std::string> output_text;  // aligned with output
  std::optional<std::vector<double>> logprobs;
  FinishReason finish = FinishReason::kError;
  std::string diagnostic;
  std::optional<CycleAnomaly> anomaly;
  std::optional<std::size_t> ell_star;
  Classification classification = Classification::kInconclusive;
  std::chrono::system_clock::time_point started_at;
  std::chrono::milliseconds duration{0};
  std::size_t output_budget = 0;

  /// Texts of the anomaly's cycle units.
  std::vector<std::string> cycle_text() const;
};

/// ERROR finishes are INCONCLUSIVE. Otherwise CERTIFIED: anomaly present,
/// w_known set, deterministic sampling and ell >= b + c + w_known.
/// SUSPECTED: anomaly reaching the final output unit with a length-truncated
/// finish. HALTED: finish = STOP. Otherwise INCONCLUSIVE.
Classification classify_probe(std::span<const SymbolId> output,
                              const std::optional<CycleAnomaly>& anomaly, FinishReason finish,
                              std::optional<std::size_t> w_known, bool deterministic);

struct ProbeOptions {
  std::size_t c_max = kDefaultGuardCMax;
  std::size_t r_min = kDefaultMinRepeats;
  std::chrono::milliseconds timeout{300'000};
  bool request_logprobs = true;
};

/// Streams the completion through the streaming detector, stopping at
/// output_budget units.
ProbeRecord probe(ModelClient& client, const std::string& prompt, const SamplerConfig& config,
                  std::size_t output_budget, const ProbeOptions& options = {});
ProbeRecord probe(ModelClient& client, const RecipeQuery& query, const SamplerConfig& config,
                  std::size_t output_budget, const ProbeOptions& options = {});

struct LogprobSummary {
  double first_quartile_mean = 0.0;
  double last_quartile_mean = 0.0;
  bool converged = false;
};

/// Means of the first and last floor(n/4) entries; converged when the last
/// quartile sits above -delta and either rose by more than delta or the
/// first quartile was already above -delta.
LogprobSummary logprob_summary(std::span<const double> trace, double quartile_delta);

}  // namespace nonhalt
