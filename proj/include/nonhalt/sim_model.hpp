#pragma once

// Toy w-context language models. A model maps the trailing window of at most
// w symbols to next-symbol logits; nothing older is ever read.
//
// Two kinds:
//   TABLE      explicit window -> logits entries, matched on the longest
//              stored suffix of the window; unmatched windows get uniform
//              logits (which at tau = 0 selects index 0).
//   HASH_ECHO  logit_i = u(seed, window, i) + echo_beta * count(i in window)
//              + eos_bias * [i == eos], where u is the PRF below.
//
// The PRF is fixed so that models are portable across platforms. With
// mix() the SplitMix64 finalizer:
//   h = mix(seed ^ 0x6A09E667F3BCC909)
//   for each id in the window, oldest first: h = mix(h ^ ((id + 1) * 0x9E3779B97F4A7C15))
//   u(i) = (mix(h + (i + 1) * 0xD1B54A32D192ED03) >> 11) * 2^-53      in [0, 1)
//
// Because |u(i) - u'(i)| < 1 for any two windows, echo_beta >= 2 guarantees
// that swapping a window symbol for t strictly raises the probability of t.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "nonhalt/core.hpp"
#include "nonhalt/sampler.hpp"

namespace nonhalt {

enum class ModelKind { kTable, kHashEcho };

std::uint64_t mix64(std::uint64_t z);

class SimModel {
 public:
  using Table = std::map<SymbolStream, std::vector<double>>;

  /// Symbol ids of `vocab` must be 0..N-1 in order.
  static SimModel table(std::size_t w, Vocab vocab, Table entries);
  static SimModel hash_echo(std::size_t w, Vocab vocab, std::uint64_t seed, double echo_beta,
                            double eos_bias);

  /// Logits for the next symbol given the symbols so far; only the trailing
  /// min(w, |window|) symbols are read. Throws InputError on an empty window.
  Logits next_logits(std::span<const SymbolId> window) const;

  /// PRF term of HASH_ECHO logits, exposed for tests.
  double prf(std::span<const SymbolId> window, std::size_t index) const;

  std::size_t w() const { return w_; }
  const Vocab& vocab() const { return vocab_; }
  std::size_t vocab_size() const { return vocab_.size(); }
  SymbolId eos() const { return vocab_.eos(); }
  ModelKind kind() const { return kind_; }
  const Table& entries() const { return table_; }
  std::uint64_t seed() const { return seed_; }
  double echo_beta() const { return echo_beta_; }
  double eos_bias() const { return eos_bias_; }

 private:
  SimModel(ModelKind kind, std::size_t w, Vocab vocab);

  ModelKind kind_;
  std::size_t w_;
  Vocab vocab_;
  Table table_;
  std::size_t max_key_ = 0;
  std::uint64_t seed_ = 0;
  double echo_beta_ = 0.0;
  double eos_bias_ = 0.0;
};

/// Step-wise sampled generation: each step samples from the finalized
/// distribution over the trailing window of (prompt || output) and stops
/// once eos is produced.
class Simulation {
 public:
  Simulation(const SimModel& model, std::span<const SymbolId> prompt, const SamplerConfig& config);
  Simulation(SimModel&&, std::span<const SymbolId>, const SamplerConfig&) = delete;

  /// Samples one symbol; nullopt once halted.
  std::optional<SymbolId> step();

  bool halted() const { return halted_; }
  const SymbolStream& output() const { return output_; }
  /// Probability the last sampled symbol had under its final distribution.
  double last_probability() const { return last_probability_; }

 private:
  const SimModel* model_;
  SamplerConfig config_;
  RngState rng_;
  SymbolStream context_;
  SymbolStream output_;
  bool halted_ = false;
  double last_probability_ = 0.0;
};

struct SimRun {
  SymbolStream output;  // includes the final eos when halted
  bool halted = false;
};

/// Generates up to max_len symbols, stopping early on eos.
SimRun simulate(const SimModel& model, std::span<const SymbolId> prompt,
                const SamplerConfig& config, std::size_t max_len);

}  // namespace nonhalt
