#include "nonhalt/oracle.hpp"

#include <algorithm>

#include "nonhalt/cycle.hpp"

namespace nonhalt {

namespace {

std::string describe(const CycleAnomaly& a) {
  return "(b=" + std::to_string(a.b) + ",c=" + std::to_string(a.c) + ",ell=" + std::to_string(a.ell) + ")";
}

// Smallest b for which the whole stream is a (b, c, |stream|) anomaly: the
// trailing run of positions matching the symbol c earlier ends at b + c.
std::optional<std::size_t> minimal_beginning(std::span<const SymbolId> stream, std::size_t c) {
  const std::size_t ell = stream.size();
  if (ell <= c) return std::nullopt;
  std::size_t run = 0;
  while (run < ell - c && stream[ell - 1 - run] == stream[ell - 1 - run - c]) ++run;
  if (run == 0) return std::nullopt;
  return ell - run - c;
}

}  // namespace

std::string_view to_string(RunStatus status) {
  switch (status) {
    case RunStatus::kHalted: return "HALTED";
    case RunStatus::kNoAnomaly: return "NO_ANOMALY";
    case RunStatus::kCertified: return "CERTIFIED";
  }
  return "UNKNOWN";
}

CertifiedRun run_until_certified(const SimModel& model, std::span<const SymbolId> prompt,
                                 const SamplerConfig& config, std::size_t horizon,
                                 std::size_t c_max) {
  if (!is_deterministic(config))
    throw PreconditionError("certification requires deterministic sampling");
  Simulation sim(model, prompt, config);
  StreamingDetector detector(c_max, 1);
  CertifiedRun run;
  while (sim.output().size() < horizon) {
    const auto id = sim.step();
    if (sim.halted()) {
      run.status = RunStatus::kHalted;
      break;
    }
    detector.feed(*id);
    if (auto anomaly = detector.certifiable(model.w())) {
      auto result = certify_non_halting(*anomaly, model.w(), true);
      run.status = RunStatus::kCertified;
      run.certificate = std::move(result.certificate);
      break;
    }
  }
  run.output = sim.output();
  return run;
}

TheoremVerdict verify_theorem_oracle(const SimModel& model, std::span<const SymbolId> prompt,
                                     const SamplerConfig& config, std::size_t extension_cycles,
                                     const OracleOptions& options) {
  if (!is_deterministic(config))
    throw PreconditionError("verify_theorem_oracle requires deterministic sampling");
  if (extension_cycles == 0) throw InputError("extension_cycles must be >= 1");

  TheoremVerdict verdict;
  const std::size_t w = model.w();

  // Search for the first certifiable prefix, keeping the simulation alive so
  // that the extension continues the very same run.
  Simulation sim(model, prompt, config);
  StreamingDetector detector(options.c_max, 1);
  std::optional<CycleAnomaly> anomaly;
  while (sim.output().size() < options.horizon) {
    const auto id = sim.step();
    if (sim.halted()) break;
    detector.feed(*id);
    if ((anomaly = detector.certifiable(w))) break;
  }
  if (sim.halted()) {
    verdict.status = RunStatus::kHalted;
    verdict.output = sim.output();
    return verdict;
  }
  if (!anomaly) {
    verdict.status = RunStatus::kNoAnomaly;
    verdict.output = sim.output();
    return verdict;
  }

  auto cert = certify_non_halting(*anomaly, w, true).certificate;
  const std::size_t b = anomaly->b;
  const std::size_t c = anomaly->c;
  const std::size_t ell_star = b + c + w;
  verdict.status = RunStatus::kCertified;
  if (!cert || cert->ell_star != ell_star || anomaly->ell != ell_star) {
    verdict.violations.push_back("certificate not issued exactly at ell* for " + describe(*anomaly));
  }

  // The cycle must continue for every further symbol.
  const std::size_t extension = extension_cycles * c;
  verdict.extension_persisted = true;
  for (std::size_t k = 0; k < extension; ++k) {
    const auto id = sim.step();
    const auto& out = sim.output();
    if (sim.halted() || !id || out.back() != out[out.size() - 1 - c]) {
      verdict.extension_persisted = false;
      verdict.violations.push_back("cycle broken " + std::to_string(k + 1) + " symbols past ell* for " +
                                   describe(*anomaly));
      break;
    }
  }
  verdict.output = sim.output();
  if (cert) {
    cert->oracle_depth = extension;
    verdict.certificate = cert;
  }

  // Every prefix between b + c + 1 and ell* is cyclic with the same (b, c).
  const std::span<const SymbolId> full(verdict.output);
  verdict.prefix_persistent = check_prefix_persistence(full.first(ell_star), *anomaly);
  if (!verdict.prefix_persistent) {
    verdict.violations.push_back("prefix persistence fails for " + describe(*anomaly));
  }

  // Converse: any (b', c') cyclic through its own ell*' and beyond on the
  // extended run must already be cyclic at ell*'.
  if (verdict.extension_persisted) {
    const std::size_t ell = full.size();
    for (std::size_t c2 = 1; c2 <= std::min(options.c_max, ell - 1); ++c2) {
      const auto b2 = minimal_beginning(full, c2);
      if (!b2) continue;
      const std::size_t ell_star2 = *b2 + c2 + w;
      if (ell < ell_star2) continue;
      if (!holds_cyclic_condition(full, *b2, c2, ell_star2)) {
        verdict.converse_holds = false;
        verdict.violations.push_back("converse fails for (b=" + std::to_string(*b2) +
                                     ",c=" + std::to_string(c2) + ")");
      }
    }
    if (const auto b_full = minimal_beginning(full, c); !b_full || *b_full > b) {
      verdict.converse_holds = false;
      verdict.violations.push_back("extended run no longer witnesses " + describe(*anomaly));
    }
  }

  // Rotation windows of the cycle are (0, c) non-halting prompts.
  if (c <= options.rotation_c_max) {
    const std::size_t len = options.rotation_extension_cycles * c;
    for (std::size_t i = 0; i < c; ++i) {
      const SymbolStream window = rotation_window(anomaly->cycle, w, i);
      const SimRun rot = simulate(model, window, config, len);
      bool good = !rot.halted && rot.output.size() == len;
      for (std::size_t k = 0; good && k < len; ++k) {
        good = rot.output[k] == anomaly->cycle[(i + w + k) % c];
      }
      if (good && len > c) good = holds_cyclic_condition(rot.output, 0, c, len);
      ++verdict.rotations_checked;
      if (!good) {
        verdict.rotations_hold = false;
        verdict.violations.push_back("rotation i=" + std::to_string(i) + " is not a (0," +
                                     std::to_string(c) + ") non-halting prompt");
      }
    }
  }
  return verdict;
}

SimModel random_hash_echo_model(RngState& rng, const CorpusOptions& options) {
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(rng.next_u64() % (hi - lo + 1));
  };
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * rng.next_unit(); };
  const std::size_t w = pick(options.w_min, options.w_max);
  const std::size_t n = pick(options.n_min, options.n_max);
  const std::uint64_t seed = rng.next_u64();
  const double beta = uniform(options.echo_beta_min, options.echo_beta_max);
  const double bias = uniform(options.eos_bias_min, options.eos_bias_max);
  return SimModel::hash_echo(w, Vocab(n, 0), seed, beta, bias);
}

CorpusReport run_theorem_corpus(const CorpusOptions& options) {
  if (options.trials == 0) throw InputError("trials must be >= 1");
  if (options.w_min < 1 || options.w_min > options.w_max) throw InputError("bad context size range");
  if (options.n_min < 2 || options.n_min > options.n_max) throw InputError("bad vocabulary size range");
  if (options.prompt_max < 1) throw InputError("prompt_max must be >= 1");

  RngState rng{options.seed};
  CorpusReport report;
  report.trials.reserve(options.trials);
  for (std::size_t t = 0; t < options.trials; ++t) {
    SimModel model = random_hash_echo_model(rng, options);
    const std::size_t len = 1 + static_cast<std::size_t>(rng.next_u64() % options.prompt_max);
    SymbolStream prompt(len);
    for (auto& id : prompt) id = static_cast<SymbolId>(rng.next_u64() % model.vocab_size());
    SamplerConfig config;
    config.tau = 0.0;
    config.top_k = model.vocab_size();
    config.top_p = 1.0;
    config.seed = rng.next_u64();
    TheoremVerdict verdict = verify_theorem_oracle(model, prompt, config, options.extension_cycles, options.oracle);
    switch (verdict.status) {
      case RunStatus::kCertified: ++report.certified; break;
      case RunStatus::kHalted: ++report.halted; break;
      case RunStatus::kNoAnomaly: ++report.no_anomaly; break;
    }
    report.violations += verdict.violations.size();
    report.rotations_checked += verdict.rotations_checked;
    report.trials.push_back(CorpusTrial{std::move(model), std::move(prompt), config, std::move(verdict)});
  }
  return report;
}

}  // namespace nonhalt
