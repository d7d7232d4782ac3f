#pragma once

// Shared domain types: symbols, vocabularies, distributions, cyclic
// anomalies and non-halting certificates.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace nonhalt {

/// Bad argument supplied by a caller (out-of-range parameter, malformed input).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition of an operation was violated.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

using SymbolId = std::uint32_t;

/// One generation unit. Offline streams carry token ids only; online streams
/// also carry the visible text of the unit.
struct Symbol {
  SymbolId id = 0;
  std::optional<std::string> text;

  Symbol() = default;
  explicit Symbol(SymbolId i) : id(i) {}
  Symbol(SymbolId i, std::string t) : id(i), text(std::move(t)) {}

  /// Texts are compared when both sides carry one, ids otherwise.
  friend bool operator==(const Symbol& a, const Symbol& b) {
    if (a.text && b.text) return *a.text == *b.text;
    return a.id == b.id;
  }
};

/// Ordered generation units. Detection runs on ids; online adapters intern
/// text so that equal texts share an id.
using SymbolStream = std::vector<SymbolId>;

std::vector<Symbol> to_symbols(std::span<const SymbolId> ids);
SymbolStream to_ids(std::span<const Symbol> symbols);

/// First-seen interning of text units into dense ids.
class Interner {
 public:
  SymbolId intern(std::string_view text);
  const std::string& text(SymbolId id) const;
  std::optional<SymbolId> find(std::string_view text) const;
  std::size_t size() const { return texts_.size(); }

 private:
  std::unordered_map<std::string, SymbolId> ids_;
  std::vector<std::string> texts_;
};

class Vocab {
 public:
  /// Symbols with ids 0..n-1; `eos` must be one of them.
  Vocab(std::size_t n, SymbolId eos);
  Vocab(std::vector<Symbol> symbols, SymbolId eos);

  std::size_t size() const { return symbols_.size(); }
  SymbolId eos() const { return eos_; }
  const std::vector<Symbol>& symbols() const { return symbols_; }
  const Symbol& at(std::size_t index) const { return symbols_.at(index); }
  /// Position of `id` in vocabulary order.
  std::optional<std::size_t> index_of(SymbolId id) const;

 private:
  std::vector<Symbol> symbols_;
  SymbolId eos_;
  std::unordered_map<SymbolId, std::size_t> index_;
};

/// Pre-softmax scores aligned to vocabulary order. All entries finite.
class Logits {
 public:
  explicit Logits(std::vector<double> scores);
  const std::vector<double>& scores() const { return scores_; }
  std::size_t size() const { return scores_.size(); }
  double operator[](std::size_t i) const { return scores_[i]; }

 private:
  std::vector<double> scores_;
};

inline constexpr double kDistributionTolerance = 1e-9;

/// Probability vector over the vocabulary. Entries in [0,1], summing to 1
/// within kDistributionTolerance.
class Distribution {
 public:
  explicit Distribution(std::vector<double> probs);
  static Distribution one_hot(std::size_t n, std::size_t index);

  const std::vector<double>& probs() const { return probs_; }
  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  /// Indices with strictly positive probability, ascending.
  std::vector<std::size_t> support() const;
  /// Highest-probability index; ties go to the lowest index.
  std::size_t argmax() const;

 private:
  std::vector<double> probs_;
};

/// A witnessed (b, c, ell) cyclic anomaly. Positions are 1-based as in the
/// definition: x_i = x_{i-c} for every i in (b+c, ell].
struct CycleAnomaly {
  std::size_t b = 0;
  std::size_t c = 0;
  std::size_t ell = 0;
  SymbolStream beginning;
  SymbolStream cycle;
  std::size_t r_obs = 0;

  /// Trailing partial-cycle length, (ell - b) mod c.
  std::size_t remainder() const { return (ell - b) % c; }

  friend bool operator==(const CycleAnomaly&, const CycleAnomaly&) = default;
};

/// Builds an anomaly from a witnessing stream, checking the cyclic condition
/// and reducing a non-primitive cycle to its primitive root. Throws InputError
/// when the witness does not hold.
CycleAnomaly make_anomaly(std::span<const SymbolId> stream, std::size_t b, std::size_t c,
                          std::size_t ell);

/// True iff x_i = x_{i-c} for every 1-based i in (b+c, ell] and ell > b+c.
bool holds_cyclic_condition(std::span<const SymbolId> stream, std::size_t b, std::size_t c,
                            std::size_t ell);

struct NonHaltingCertificate {
  CycleAnomaly anomaly;
  std::size_t w = 0;
  std::size_t ell_star = 0;  // anomaly.b + anomaly.c + w
  bool deterministic = false;
  std::optional<std::size_t> oracle_depth;

  friend bool operator==(const NonHaltingCertificate&, const NonHaltingCertificate&) = default;
};

/// Smallest p >= 1 with seq_i = seq_{i-p} for all i in (p, |seq|].
std::size_t primitive_period(std::span<const SymbolId> seq);

/// True iff no proper divisor d of |cycle| makes the cycle d-periodic.
bool is_primitive(std::span<const SymbolId> cycle);

/// Length of the primitive root (the shortest u with cycle = u^k).
std::size_t primitive_root_length(std::span<const SymbolId> cycle);

/// Lexicographically least rotation by id. Throws InputError on a
/// non-primitive cycle; reduce it first.
SymbolStream canonical_rotation(std::span<const SymbolId> cycle);

/// Left rotation by k positions.
SymbolStream rotate(std::span<const SymbolId> seq, std::size_t k);

}  // namespace nonhalt
