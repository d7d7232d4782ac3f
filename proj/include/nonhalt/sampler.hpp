#pragma once

// Sampling pipeline: temperature softmax, then top-k, then top-p, then a
// seeded inverse-CDF draw.

#include <cstddef>
#include <cstdint>
#include <utility>

#include "nonhalt/core.hpp"

namespace nonhalt {

struct SamplerConfig {
  double tau = 0.0;
  std::size_t top_k = 1;
  double top_p = 1.0;
  std::uint64_t seed = 0;

  /// Throws InputError unless tau >= 0, 1 <= top_k <= n, 0 <= top_p <= 1.
  void validate(std::size_t n) const;

  friend bool operator==(const SamplerConfig&, const SamplerConfig&) = default;
};

/// SplitMix64 generator state. Passed and returned by value so that draws
/// are reproducible from (distribution, state) alone.
struct RngState {
  std::uint64_t s = 0;

  std::uint64_t next_u64();
  /// Uniform double in [0, 1) from the top 53 bits of the next output.
  double next_unit();

  friend bool operator==(const RngState&, const RngState&) = default;
};

/// tau > 0: softmax of z / tau with max subtraction. tau = 0: one-hot on the
/// argmax, ties toward the lowest index.
Distribution softmax_temperature(const Logits& logits, double tau);

/// Keeps the k most probable entries (boundary ties toward lower index) and
/// renormalizes.
Distribution truncate_top_k(const Distribution& dist, std::size_t k);

/// Keeps the shortest probability-descending prefix whose mass strictly
/// exceeds p. p = 1 keeps the full support; p = 0 keeps the single maximum.
Distribution truncate_top_p(const Distribution& dist, double p);

/// top_p(top_k(softmax(z, tau), k), p), with k above the vocabulary size
/// clipped to it.
Distribution finalize(const Logits& logits, const SamplerConfig& config);

/// Inverse-CDF draw over vocabulary order. Returns the drawn index and the
/// advanced state.
std::pair<std::size_t, RngState> sample_token(const Distribution& dist, RngState state);

/// Sampling is a pure function of the distribution when tau = 0, top_k = 1 or
/// top_p = 0.
bool is_deterministic(const SamplerConfig& config);

}  // namespace nonhalt
