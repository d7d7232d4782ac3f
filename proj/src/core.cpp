#include "nonhalt/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

namespace nonhalt {

std::vector<Symbol> to_symbols(std::span<const SymbolId> ids) {
  std::vector<Symbol> out;
  out.reserve(ids.size());
  for (SymbolId id : ids) out.emplace_back(id);
  return out;
}

SymbolStream to_ids(std::span<const Symbol> symbols) {
  SymbolStream out;
  out.reserve(symbols.size());
  for (const Symbol& s : symbols) out.push_back(s.id);
  return out;
}

SymbolId Interner::intern(std::string_view text) {
  auto it = ids_.find(std::string(text));
  if (it != ids_.end()) return it->second;
  const auto id = static_cast<SymbolId>(texts_.size());
  texts_.emplace_back(text);
  ids_.emplace(texts_.back(), id);
  return id;
}

const std::string& Interner::text(SymbolId id) const { return texts_.at(id); }

std::optional<SymbolId> Interner::find(std::string_view text) const {
  auto it = ids_.find(std::string(text));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

Vocab::Vocab(std::size_t n, SymbolId eos) : Vocab([n] {
    std::vector<Symbol> s;
    s.reserve(n);
    for (std::size_t i = 0; i < n; ++i) s.emplace_back(static_cast<SymbolId>(i));
    return s;
  }(), eos) {}

Vocab::Vocab(std::vector<Symbol> symbols, SymbolId eos) : symbols_(std::move(symbols)), eos_(eos) {
  if (symbols_.size() < 2) throw InputError("vocabulary needs at least 2 symbols");
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (!index_.emplace(symbols_[i].id, i).second)
      throw InputError("duplicate symbol id " + std::to_string(symbols_[i].id));
  }
  if (!index_.contains(eos_)) throw InputError("eos is not a member of the vocabulary");
}

std::optional<std::size_t> Vocab::index_of(SymbolId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Logits::Logits(std::vector<double> scores) : scores_(std::move(scores)) {
  if (scores_.empty()) throw InputError("logits must be non-empty");
  for (double z : scores_) {
    if (!std::isfinite(z)) throw InputError("logits must be finite");
  }
}

Distribution::Distribution(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw InputError("distribution must be non-empty");
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0 && p <= 1.0)) throw InputError("probability outside [0,1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kDistributionTolerance)
    throw InputError("probabilities sum to " + std::to_string(sum) + ", not 1");
}

Distribution Distribution::one_hot(std::size_t n, std::size_t index) {
  std::vector<double> p(n, 0.0);
  p.at(index) = 1.0;
  return Distribution(std::move(p));
}

std::vector<std::size_t> Distribution::support() const {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    if (probs_[i] > 0.0) s.push_back(i);
  }
  return s;
}

std::size_t Distribution::argmax() const {
  return static_cast<std::size_t>(std::max_element(probs_.begin(), probs_.end()) - probs_.begin());
}

bool holds_cyclic_condition(std::span<const SymbolId> stream, std::size_t b, std::size_t c,
                            std::size_t ell) {
  if (c == 0 || ell <= b + c || ell > stream.size()) return false;
  for (std::size_t i = b + c + 1; i <= ell; ++i) {
    if (stream[i - 1] != stream[i - 1 - c]) return false;
  }
  return true;
}

CycleAnomaly make_anomaly(std::span<const SymbolId> stream, std::size_t b, std::size_t c,
                          std::size_t ell) {
  if (!holds_cyclic_condition(stream, b, c, ell))
    throw InputError("stream does not witness a (" + std::to_string(b) + "," + std::to_string(c) +
                     "," + std::to_string(ell) + ") cyclic anomaly");
  const auto block = stream.subspan(b, c);
  const std::size_t root = primitive_root_length(block);

  CycleAnomaly a;
  a.b = b;
  a.c = root;
  a.ell = ell;
  a.beginning.assign(stream.begin(), stream.begin() + static_cast<std::ptrdiff_t>(b));
  a.cycle.assign(block.begin(), block.begin() + static_cast<std::ptrdiff_t>(root));
  a.r_obs = (ell - b) / root;
  return a;
}

std::size_t primitive_period(std::span<const SymbolId> seq) {
  if (seq.empty()) throw PreconditionError("primitive_period: empty sequence");
  // Failure function: border[i] is the longest proper border of seq[0..i].
  std::vector<std::size_t> border(seq.size(), 0);
  std::size_t k = 0;
  for (std::size_t i = 1; i < seq.size(); ++i) {
    while (k > 0 && seq[i] != seq[k]) k = border[k - 1];
    if (seq[i] == seq[k]) ++k;
    border[i] = k;
  }
  return seq.size() - border.back();
}

std::size_t primitive_root_length(std::span<const SymbolId> cycle) {
  const std::size_t p = primitive_period(cycle);
  return cycle.size() % p == 0 ? p : cycle.size();
}

bool is_primitive(std::span<const SymbolId> cycle) {
  return !cycle.empty() && primitive_root_length(cycle) == cycle.size();
}

SymbolStream rotate(std::span<const SymbolId> seq, std::size_t k) {
  SymbolStream out(seq.begin(), seq.end());
  if (!out.empty()) std::rotate(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(k % out.size()), out.end());
  return out;
}

SymbolStream canonical_rotation(std::span<const SymbolId> cycle) {
  if (cycle.empty()) throw InputError("canonical_rotation: empty cycle");
  if (!is_primitive(cycle))
    throw InputError("canonical_rotation: cycle is not primitive; reduce it with primitive_period first");

  // Booth's least-rotation algorithm over the doubled sequence.
  const std::size_t n = cycle.size();
  auto at = [&](std::size_t i) { return cycle[i % n]; };
  std::vector<std::ptrdiff_t> f(2 * n, -1);
  std::size_t k = 0;
  for (std::size_t j = 1; j < 2 * n; ++j) {
    std::ptrdiff_t i = f[j - k - 1];
    while (i != -1 && at(j) != at(k + static_cast<std::size_t>(i) + 1)) {
      if (at(j) < at(k + static_cast<std::size_t>(i) + 1)) k = j - static_cast<std::size_t>(i) - 1;
      i = f[static_cast<std::size_t>(i)];
    }
    if (i == -1 && at(j) != at(k)) {
      if (at(j) < at(k)) k = j;
      f[j - k] = -1;
    } else {
      f[j - k] = i + 1;
    }
  }
  return rotate(cycle, k);
}

}  // namespace nonhalt
