#include "nonhalt/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace nonhalt {

namespace {

// Indices ordered by probability, descending; equal probabilities keep
// ascending index order.
std::vector<std::size_t> descending_order(const std::vector<double>& probs) {
  std::vector<std::size_t> order(probs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return probs[a] > probs[b]; });
  return order;
}

Distribution keep_and_renormalize(const std::vector<double>& probs,
                                  std::span<const std::size_t> keep) {
  double mass = 0.0;
  for (std::size_t i : keep) mass += probs[i];
  std::vector<double> out(probs.size(), 0.0);
  for (std::size_t i : keep) out[i] = probs[i] / mass;
  return Distribution(std::move(out));
}

}  // namespace

void SamplerConfig::validate(std::size_t n) const {
  if (!(tau >= 0.0) || std::isnan(tau)) throw InputError("temperature must be >= 0");
  if (top_k < 1 || top_k > n)
    throw InputError("top_k must lie in [1, " + std::to_string(n) + "]");
  if (!(top_p >= 0.0 && top_p <= 1.0)) throw InputError("top_p must lie in [0, 1]");
}

std::uint64_t RngState::next_u64() {
  std::uint64_t z = (s += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double RngState::next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

Distribution softmax_temperature(const Logits& logits, double tau) {
  if (!(tau >= 0.0)) throw InputError("temperature must be >= 0");
  const auto& z = logits.scores();
  const std::size_t top =
      static_cast<std::size_t>(std::max_element(z.begin(), z.end()) - z.begin());
  if (tau == 0.0 || std::isinf(1.0 / tau)) return Distribution::one_hot(z.size(), top);

  std::vector<double> p(z.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    p[i] = std::exp((z[i] - z[top]) / tau);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return Distribution(std::move(p));
}

Distribution truncate_top_k(const Distribution& dist, std::size_t k) {
  if (k < 1 || k > dist.size())
    throw InputError("top_k must lie in [1, " + std::to_string(dist.size()) + "]");
  if (k == dist.size()) return dist;
  auto order = descending_order(dist.probs());
  order.resize(k);
  return keep_and_renormalize(dist.probs(), order);
}

Distribution truncate_top_p(const Distribution& dist, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InputError("top_p must lie in [0, 1]");
  if (p == 1.0) return dist;

  const auto& probs = dist.probs();
  const auto order = descending_order(probs);
  std::vector<std::size_t> keep;
  double cumulative = 0.0;
  for (std::size_t i : order) {
    if (probs[i] <= 0.0) break;
    keep.push_back(i);
    cumulative += probs[i];
    if (cumulative > p) break;
  }
  return keep_and_renormalize(probs, keep);
}

Distribution finalize(const Logits& logits, const SamplerConfig& config) {
  SamplerConfig c = config;
  c.top_k = std::min(c.top_k, logits.size());
  c.validate(logits.size());
  return truncate_top_p(truncate_top_k(softmax_temperature(logits, c.tau), c.top_k), c.top_p);
}

std::pair<std::size_t, RngState> sample_token(const Distribution& dist, RngState state) {
  const double u = state.next_unit();
  const auto& probs = dist.probs();
  double cumulative = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    cumulative += probs[i];
    last = i;
    if (u < cumulative) return {i, state};
  }
  // Rounding left the cumulative mass just under u.
  return {last, state};
}

bool is_deterministic(const SamplerConfig& config) {
  return config.tau == 0.0 || config.top_k == 1 || config.top_p == 0.0;
}

}  // namespace nonhalt
