#pragma once

// Detection of (b, c, ell) cyclic anomalies in symbol streams, non-halting
// certification, and rotation windows of a detected cycle.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

#include "nonhalt/core.hpp"

namespace nonhalt {

inline constexpr std::size_t kDefaultOfflineCMax = 256;
inline constexpr std::size_t kDefaultGuardCMax = 64;
inline constexpr std::size_t kDefaultMinRepeats = 2;

/// Smallest cycle length c <= c_max (and for it the smallest beginning b)
/// such that the stream is a (b, c, ell) anomaly with floor((ell-b)/c) >= r_min.
/// Scans each candidate c backwards from the end of the stream.
std::optional<CycleAnomaly> detect_cycle(std::span<const SymbolId> stream, std::size_t c_max,
                                         std::size_t r_min);

/// Online form of detect_cycle. Tracks, for each candidate period c, the
/// length of the trailing run of positions i with x_i = x_{i-c}; feeding one
/// symbol costs O(c_max).
class StreamingDetector {
 public:
  StreamingDetector(std::size_t c_max, std::size_t r_min);

  /// Appends a symbol and returns the anomaly detect_cycle would report on the
  /// prefix fed so far.
  std::optional<CycleAnomaly> feed(SymbolId next);

  /// Same report as the last feed(), recomputed without appending.
  std::optional<CycleAnomaly> current() const;

  /// Smallest c whose trailing run has reached w, i.e. the prefix is a
  /// (b, c, ell) anomaly with ell >= b + c + w. Ignores r_min.
  std::optional<CycleAnomaly> certifiable(std::size_t w) const;

  std::size_t length() const { return length_; }
  std::size_t c_max() const { return c_max_; }
  std::size_t r_min() const { return r_min_; }

 private:
  SymbolId at(std::size_t pos1) const;  // 1-based
  CycleAnomaly build(std::size_t c) const;

  std::size_t c_max_;
  std::size_t r_min_;
  std::size_t length_ = 0;
  std::vector<std::size_t> run_;  // run_[c]: trailing matches at distance c
  // Matching reads only the last c_max symbols; the full history is kept so
  // reports can carry the beginning.
  SymbolStream history_;
};

enum class RefusalReason { kNotDeterministic, kBelowThreshold };

std::string_view to_string(RefusalReason reason);

struct CertifyResult {
  std::optional<NonHaltingCertificate> certificate;
  std::optional<RefusalReason> refusal;

  explicit operator bool() const { return certificate.has_value(); }
};

/// Issues a certificate iff sampling was deterministic and
/// anomaly.ell >= b + c + w.
CertifyResult certify_non_halting(const CycleAnomaly& anomaly, std::size_t w, bool deterministic);

/// True iff every prefix x_1..x_{ell'} with ell' in [b+c+1, anomaly.ell]
/// satisfies the cyclic condition for the anomaly's (b, c).
bool check_prefix_persistence(std::span<const SymbolId> stream, const CycleAnomaly& anomaly);

/// The w-symbol window of the periodic extension of `cycle` starting at
/// cycle position i (0-based).
SymbolStream rotation_window(std::span<const SymbolId> cycle, std::size_t w, std::size_t i);

}  // namespace nonhalt
