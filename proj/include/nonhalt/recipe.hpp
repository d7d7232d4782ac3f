#pragma once

// Repetition escalation: probe a recipe query at increasing repetition
// counts until the endpoint stops halting.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "nonhalt/harness/client.hpp"
#include "nonhalt/harness/probe.hpp"
#include "nonhalt/harness/record.hpp"
#include "nonhalt/recipe_query.hpp"

namespace nonhalt {

/// 1..20, then steps of 5 to 100, then steps of 50 to 1000.
std::vector<std::size_t> default_schedule();

struct EscalationOptions {
  ProbeOptions probe;
  std::size_t max_retries = 2;        // extra attempts after a transport error
  RecordSink* sink = nullptr;         // every fresh probe is appended here
  const RecordCache* cache = nullptr;  // completed cells are not re-probed
};

struct EscalationAttempt {
  std::size_t reps = 0;
  Classification classification = Classification::kInconclusive;
  bool failed_transport = false;
  bool from_cache = false;
};

struct EscalationResult {
  std::optional<std::size_t> min_reps;
  std::optional<ProbeRecord> record;      // the successful probe, when fresh
  std::optional<RecordLine> cached_line;  // the successful cell, when resumed
  std::vector<EscalationAttempt> attempts;
};

/// Probes each repetition count of `schedule` in order and stops at the first
/// SUSPECTED or CERTIFIED classification. Throws InputError unless the
/// schedule is non-empty and strictly increasing.
EscalationResult find_min_repetitions(ModelClient& client, const std::string& cycle_text,
                                      TemplateId template_id, const SamplerConfig& config,
                                      const std::vector<std::size_t>& schedule,
                                      std::size_t output_budget,
                                      const EscalationOptions& options = {});

}  // namespace nonhalt
