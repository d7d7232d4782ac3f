#pragma once

// Ground-truth checks of the non-halting theorem on simulator models.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nonhalt/core.hpp"
#include "nonhalt/sampler.hpp"
#include "nonhalt/sim_model.hpp"

namespace nonhalt {

enum class RunStatus { kHalted, kNoAnomaly, kCertified };

std::string_view to_string(RunStatus status);

/// Outcome of generating until the first certifiable anomaly.
struct CertifiedRun {
  RunStatus status = RunStatus::kNoAnomaly;
  SymbolStream output;  // stops at ell_star when certified
  std::optional<NonHaltingCertificate> certificate;
};

/// Generates from `prompt` and stops at the first length ell at which some
/// (b, c) with c <= c_max has ell = b + c + w. Requires deterministic sampling.
CertifiedRun run_until_certified(const SimModel& model, std::span<const SymbolId> prompt,
                                 const SamplerConfig& config, std::size_t horizon,
                                 std::size_t c_max);

struct OracleOptions {
  std::size_t c_max = 64;
  std::size_t horizon = 512;          // symbols searched for a certificate
  std::size_t rotation_c_max = 8;     // rotation windows checked for c up to this
  std::size_t rotation_extension_cycles = 10;
};

struct TheoremVerdict {
  RunStatus status = RunStatus::kNoAnomaly;
  SymbolStream output;  // through ell_star + extension when certified
  std::optional<NonHaltingCertificate> certificate;
  bool extension_persisted = false;
  bool prefix_persistent = false;
  bool converse_holds = true;
  std::size_t rotations_checked = 0;
  bool rotations_hold = true;
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

/// Certifies a run at ell* = b + c + w, then generates extension_cycles * c
/// more symbols and checks they continue the cycle. Also checks prefix
/// persistence of the certified anomaly, the converse direction on the
/// extended run, and that every rotation window of the cycle is itself a
/// (0, c) non-halting prompt. Any failed check is recorded as a violation.
/// Throws PreconditionError unless is_deterministic(config).
TheoremVerdict verify_theorem_oracle(const SimModel& model, std::span<const SymbolId> prompt,
                                     const SamplerConfig& config, std::size_t extension_cycles,
                                     const OracleOptions& options = {});

/// Parameters of a randomized HASH_ECHO corpus. Ranges are inclusive.
struct CorpusOptions {
  std::size_t trials = 1000;
  std::size_t w_min = 2;
  std::size_t w_max = 16;
  std::size_t n_min = 4;
  std::size_t n_max = 32;
  std::size_t prompt_max = 8;
  std::size_t extension_cycles = 50;
  std::uint64_t seed = 1;
  double echo_beta_min = 0.0;
  double echo_beta_max = 0.8;
  double eos_bias_min = -1.5;
  double eos_bias_max = 0.5;
  OracleOptions oracle;
};

struct CorpusTrial {
  SimModel model;
  SymbolStream prompt;
  SamplerConfig config;
  TheoremVerdict verdict;
};

struct CorpusReport {
  std::vector<CorpusTrial> trials;
  std::size_t certified = 0;
  std::size_t halted = 0;
  std::size_t no_anomaly = 0;
  std::size_t rotations_checked = 0;
  std::size_t violations = 0;
};

SimModel random_hash_echo_model(RngState& rng, const CorpusOptions& options);

/// Runs verify_theorem_oracle at tau = 0 on `trials` random models and
/// prompts drawn from options.seed.
CorpusReport run_theorem_corpus(const CorpusOptions& options);

}  // namespace nonhalt
