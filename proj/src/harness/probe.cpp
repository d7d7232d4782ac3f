#include "nonhalt/harness/probe.hpp"

#include <algorithm>
#include <numeric>

namespace nonhalt {

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::kCertified: return "CERTIFIED";
    case Classification::kSuspected: return "SUSPECTED";
    case Classification::kHalted: return "HALTED";
    case Classification::kInconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

std::optional<Classification> parse_classification(std::string_view name) {
  if (name == "CERTIFIED") return Classification::kCertified;
  if (name == "SUSPECTED") return Classification::kSuspected;
  if (name == "HALTED") return Classification::kHalted;
  if (name == "INCONCLUSIVE") return Classification::kInconclusive;
  return std::nullopt;
}

std::vector<std::string> ProbeRecord::cycle_text() const {
  std::vector<std::string> out;
  if (!anomaly) return out;
  for (std::size_t k = 0; k < anomaly->c; ++k) {
    const std::size_t pos = anomaly->b + k;
    out.push_back(pos < output_text.size() ? output_text[pos] : std::to_string(anomaly->cycle[k]));
  }
  return out;
}

Classification classify_probe(std::span<const SymbolId> output,
                              const std::optional<CycleAnomaly>& anomaly, FinishReason finish,
                              std::optional<std::size_t> w_known, bool deterministic) {
  if (finish == FinishReason::kError) return Classification::kInconclusive;
  if (anomaly && w_known && deterministic && anomaly->ell >= anomaly->b + anomaly->c + *w_known)
    return Classification::kCertified;
  if (anomaly && anomaly->ell == output.size() && finish == FinishReason::kLength)
    return Classification::kSuspected;
  if (finish == FinishReason::kStop) return Classification::kHalted;
  return Classification::kInconclusive;
}

ProbeRecord probe(ModelClient& client, const std::string& prompt, const SamplerConfig& config,
                  std::size_t output_budget, const ProbeOptions& options) {
  if (output_budget == 0) throw InputError("output budget must be >= 1");

  ProbeRecord rec;
  rec.model_id = client.id();
  rec.prompt = prompt;
  rec.config = config;
  rec.output_budget = output_budget;
  rec.started_at = std::chrono::system_clock::now();
  const auto t0 = std::chrono::steady_clock::now();

  StreamingDetector detector(options.c_max, options.r_min);
  Interner interner;
  auto on_unit = [&](const OutputUnit& unit) {
    if (rec.output.size() >= output_budget) return false;
    const SymbolId id = unit.id ? *unit.id : interner.intern(unit.text);
    rec.output.push_back(id);
    rec.output_text.push_back(unit.text);
    detector.feed(id);
    return rec.output.size() < output_budget;
  };

  CompletionRequest request;
  request.prompt = prompt;
  request.config = config;
  request.max_units = output_budget;
  request.timeout = options.timeout;
  request.want_logprobs = options.request_logprobs;

  Completion done;
  try {
    done = client.complete(request, on_unit);
  } catch (const std::exception& e) {
    done.finish = FinishReason::kError;
    done.diagnostic = e.what();
  }
  rec.duration = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - t0);
  rec.finish = done.finish;
  rec.diagnostic = std::move(done.diagnostic);
  if (options.request_logprobs) rec.logprobs = std::move(done.logprobs);

  const bool deterministic = is_deterministic(config);
  const auto w = client.w_known();
  if (deterministic && w) rec.anomaly = detector.certifiable(*w);
  if (!rec.anomaly) rec.anomaly = detector.current();
  if (rec.anomaly && w) rec.ell_star = rec.anomaly->b + rec.anomaly->c + *w;
  rec.classification = classify_probe(rec.output, rec.anomaly, rec.finish, w, deterministic);
  return rec;
}

ProbeRecord probe(ModelClient& client, const RecipeQuery& query, const SamplerConfig& config,
                  std::size_t output_budget, const ProbeOptions& options) {
  ProbeRecord rec = probe(client, query.rendered, config, output_budget, options);
  rec.query = query;
  return rec;
}

LogprobSummary logprob_summary(std::span<const double> trace, double quartile_delta) {
  if (trace.size() < 4) throw InputError("logprob trace needs at least 4 entries");
  const std::size_t q = trace.size() / 4;
  const double first = std::accumulate(trace.begin(), trace.begin() + q, 0.0) / static_cast<double>(q);
  const double last = std::accumulate(trace.end() - q, trace.end(), 0.0) / static_cast<double>(q);
  LogprobSummary s;
  s.first_quartile_mean = first;
  s.last_quartile_mean = last;
  const bool rose = last > first + quartile_delta || first > -quartile_delta;
  s.converged = rose && last > -quartile_delta;
  return s;
}

}  // namespace nonhalt
