#include "nonhalt/sim_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nonhalt {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

void require_dense_ids(const Vocab& vocab) {
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    if (vocab.at(i).id != i) throw InputError("simulator vocabulary ids must be 0..N-1 in order");
  }
}

constexpr std::uint64_t kSeedSalt = 0x6A09E667F3BCC909ULL;

std::uint64_t fold_symbol(std::uint64_t h, SymbolId id) {
  return mix64(h ^ ((static_cast<std::uint64_t>(id) + 1) * 0x9E3779B97F4A7C15ULL));
}

double unit_from_hash(std::uint64_t h, std::size_t index) {
  const std::uint64_t v = mix64(h + (static_cast<std::uint64_t>(index) + 1) * 0xD1B54A32D192ED03ULL);
  return static_cast<double>(v >> 11) * 0x1.0p-53;
}

}  // namespace

SimModel::SimModel(ModelKind kind, std::size_t w, Vocab vocab)
    : kind_(kind), w_(w), vocab_(std::move(vocab)) {
  if (w_ == 0) throw InputError("context size w must be >= 1");
  require_dense_ids(vocab_);
}

SimModel SimModel::table(std::size_t w, Vocab vocab, Table entries) {
  SimModel m(ModelKind::kTable, w, std::move(vocab));
  for (const auto& [window, logits] : entries) {
    if (window.empty() || window.size() > w)
      throw InputError("table window length must lie in [1, w]");
    if (logits.size() != m.vocab_size()) throw InputError("table logits must have length N");
    for (SymbolId id : window) {
      if (id >= m.vocab_size()) throw InputError("table window id out of vocabulary");
    }
    Logits validated(logits);
    m.max_key_ = std::max(m.max_key_, window.size());
  }
  m.table_ = std::move(entries);
  return m;
}

SimModel SimModel::hash_echo(std::size_t w, Vocab vocab, std::uint64_t seed, double echo_beta,
                             double eos_bias) {
  if (!(echo_beta >= 0.0) || !std::isfinite(echo_beta))
    throw InputError("echo_beta must be finite and >= 0");
  if (!std::isfinite(eos_bias)) throw InputError("eos_bias must be finite");
  SimModel m(ModelKind::kHashEcho, w, std::move(vocab));
  m.seed_ = seed;
  m.echo_beta_ = echo_beta;
  m.eos_bias_ = eos_bias;
  return m;
}

double SimModel::prf(std::span<const SymbolId> window, std::size_t index) const {
  std::uint64_t h = mix64(seed_ ^ kSeedSalt);
  for (SymbolId id : window) h = fold_symbol(h, id);
  return unit_from_hash(h, index);
}

Logits SimModel::next_logits(std::span<const SymbolId> window) const {
  if (window.empty()) throw InputError("next_logits: empty window");
  const auto trailing = window.last(std::min(w_, window.size()));
  const std::size_t n = vocab_size();

  if (kind_ == ModelKind::kTable) {
    SymbolStream key;
    for (std::size_t len = std::min(max_key_, trailing.size()); len >= 1; --len) {
      auto suffix = trailing.last(len);
      key.assign(suffix.begin(), suffix.end());
      if (auto it = table_.find(key); it != table_.end()) return Logits(it->second);
    }
    return Logits(std::vector<double>(n, 0.0));
  }

  std::uint64_t h = mix64(seed_ ^ kSeedSalt);
  std::vector<double> z(n, 0.0);
  for (SymbolId id : trailing) {
    h = fold_symbol(h, id);
    if (id < n) z[id] += echo_beta_;
  }
  for (std::size_t i = 0; i < n; ++i) z[i] += unit_from_hash(h, i);
  z[eos()] += eos_bias_;
  return Logits(std::move(z));
}

Simulation::Simulation(const SimModel& model, std::span<const SymbolId> prompt,
                       const SamplerConfig& config)
    : model_(&model), config_(config), rng_{config.seed}, context_(prompt.begin(), prompt.end()) {
  if (prompt.empty()) throw PreconditionError("simulation needs a non-empty prompt");
  for (SymbolId id : prompt) {
    if (id >= model.vocab_size()) throw InputError("prompt symbol " + std::to_string(id) + " out of vocabulary");
  }
  config_.validate(model.vocab_size());
}

std::optional<SymbolId> Simulation::step() {
  if (halted_) return std::nullopt;
  const Distribution dist = finalize(model_->next_logits(context_), config_);
  auto [index, next_state] = sample_token(dist, rng_);
  rng_ = next_state;
  last_probability_ = dist[index];
  const auto id = static_cast<SymbolId>(index);
  context_.push_back(id);
  output_.push_back(id);
  if (id == model_->eos()) halted_ = true;
  return id;
}

SimRun simulate(const SimModel& model, std::span<const SymbolId> prompt,
                const SamplerConfig& config, std::size_t max_len) {
  if (max_len == 0) throw PreconditionError("simulate: max_len must be >= 1");
  Simulation sim(model, prompt, config);
  while (sim.output().size() < max_len && sim.step()) {
  }
  return SimRun{sim.output(), sim.halted()};
}

}  // namespace nonhalt
