#pragma once

// Experiment protocols: temperature sweep and word-list escalation.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "nonhalt/recipe.hpp"

namespace nonhalt {

struct ExperimentOptions {
  EscalationOptions escalation;
  std::size_t parallelism = 4;
};

struct SweepRow {
  double tau = 0.0;
  std::optional<std::size_t> min_reps;  // nullopt = FAIL
  std::size_t transport_failures = 0;
};

/// One escalation per temperature; `base` supplies top_k, top_p and seed.
/// Throws InputError on an empty temperature list.
std::vector<SweepRow> run_temperature_sweep(ModelClient& client, const std::string& cycle_text,
                                            TemplateId template_id, const std::vector<double>& temps,
                                            const SamplerConfig& base,
                                            const std::vector<std::size_t>& schedule,
                                            std::size_t output_budget,
                                            const ExperimentOptions& options = {});

/// 0.0, 0.1, ..., 1.0
std::vector<double> default_temperatures();

struct WordRow {
  std::string word;
  std::size_t min_reps = 0;  // 0 = no non-halting response
  std::size_t transport_failures = 0;
};

struct WordlistSummary {
  std::vector<WordRow> rows;  // in input order
  double success_percent = 0.0;
  std::optional<double> mean_reps;  // over successful words only
};

/// Throws InputError on an empty word list.
WordlistSummary run_wordlist_experiment(ModelClient& client, const std::vector<std::string>& words,
                                        TemplateId template_id, const SamplerConfig& config,
                                        const std::vector<std::size_t>& schedule,
                                        std::size_t output_budget,
                                        const ExperimentOptions& options = {});

/// Tab-separated tables for plotting: "tau\tmin_reps" with FAIL, and
/// "word\tmin_reps" with 0 for failure.
std::string format_sweep_table(const std::vector<SweepRow>& rows);
std::string format_wordlist_table(const WordlistSummary& summary);

/// One word per line; blank lines and surrounding whitespace dropped.
std::vector<std::string> load_wordlist(const std::string& path);

}  // namespace nonhalt
