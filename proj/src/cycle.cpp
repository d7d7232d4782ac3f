#include "nonhalt/cycle.hpp"

#include <algorithm>
#include <string>

namespace nonhalt {

namespace {

// Number of trailing 1-based positions i (i > c) with x_i = x_{i-c}.
std::size_t trailing_run(std::span<const SymbolId> x, std::size_t c) {
  std::size_t run = 0;
  for (std::size_t i = x.size(); i > c && x[i - 1] == x[i - 1 - c]; --i) ++run;
  return run;
}

void append_range(SymbolStream& out, std::span<const SymbolId> cycle, std::size_t from,
                  std::size_t to) {
  out.insert(out.end(), cycle.begin() + static_cast<std::ptrdiff_t>(from),
             cycle.begin() + static_cast<std::ptrdiff_t>(to));
}

}  // namespace

std::optional<CycleAnomaly> detect_cycle(std::span<const SymbolId> stream, std::size_t c_max,
                                         std::size_t r_min) {
  const std::size_t ell = stream.size();
  if (ell < 2) return std::nullopt;
  const std::size_t limit = std::min(c_max, ell - 1);
  for (std::size_t c = 1; c <= limit; ++c) {
    const std::size_t run = trailing_run(stream, c);
    if (run == 0) continue;
    // Minimal start m = ell - run + 1, hence b = m - c - 1.
    const std::size_t b = ell - run - c;
    if ((ell - b) / c < r_min) continue;
    return make_anomaly(stream, b, c, ell);
  }
  return std::nullopt;
}

StreamingDetector::StreamingDetector(std::size_t c_max, std::size_t r_min)
    : c_max_(c_max), r_min_(r_min), run_(c_max + 1, 0) {
  if (c_max == 0) throw InputError("c_max must be >= 1");
  if (r_min == 0) throw InputError("r_min must be >= 1");
}

SymbolId StreamingDetector::at(std::size_t pos1) const { return history_[pos1 - 1]; }

std::optional<CycleAnomaly> StreamingDetector::feed(SymbolId next) {
  history_.push_back(next);
  ++length_;
  const std::size_t limit = std::min(c_max_, length_ - 1);
  for (std::size_t c = 1; c <= limit; ++c) {
    run_[c] = at(length_ - c) == next ? run_[c] + 1 : 0;
  }
  return current();
}

CycleAnomaly StreamingDetector::build(std::size_t c) const {
  const std::size_t b = length_ - run_[c] - c;
  CycleAnomaly a;
  a.b = b;
  a.c = c;
  a.ell = length_;
  a.beginning.assign(history_.begin(), history_.begin() + static_cast<std::ptrdiff_t>(b));
  a.cycle.assign(history_.begin() + static_cast<std::ptrdiff_t>(b),
                 history_.begin() + static_cast<std::ptrdiff_t>(b + c));
  a.r_obs = (length_ - b) / c;
  return a;
}

std::optional<CycleAnomaly> StreamingDetector::current() const {
  if (length_ < 2) return std::nullopt;
  const std::size_t limit = std::min(c_max_, length_ - 1);
  for (std::size_t c = 1; c <= limit; ++c) {
    if (run_[c] == 0) continue;
    if ((run_[c] + c) / c < r_min_) continue;
    return build(c);
  }
  return std::nullopt;
}

std::optional<CycleAnomaly> StreamingDetector::certifiable(std::size_t w) const {
  if (length_ < 2 || w == 0) return std::nullopt;
  const std::size_t limit = std::min(c_max_, length_ - 1);
  for (std::size_t c = 1; c <= limit; ++c) {
    if (run_[c] >= w) return build(c);
  }
  return std::nullopt;
}

std::string_view to_string(RefusalReason reason) {
  switch (reason) {
    case RefusalReason::kNotDeterministic: return "NOT_DETERMINISTIC";
    case RefusalReason::kBelowThreshold: return "BELOW_THRESHOLD";
  }
  return "UNKNOWN";
}

CertifyResult certify_non_halting(const CycleAnomaly& anomaly, std::size_t w, bool deterministic) {
  if (w == 0) throw InputError("context size w must be >= 1");
  CertifyResult result;
  if (!deterministic) {
    result.refusal = RefusalReason::kNotDeterministic;
    return result;
  }
  const std::size_t ell_star = anomaly.b + anomaly.c + w;
  if (anomaly.ell < ell_star) {
    result.refusal = RefusalReason::kBelowThreshold;
    return result;
  }
  result.certificate = NonHaltingCertificate{anomaly, w, ell_star, true, std::nullopt};
  return result;
}

bool check_prefix_persistence(std::span<const SymbolId> stream, const CycleAnomaly& anomaly) {
  const std::size_t b = anomaly.b;
  const std::size_t c = anomaly.c;
  if (c == 0 || anomaly.ell > stream.size() || anomaly.ell <= b + c) return false;
  // Prefix ell' holds iff every position up to ell' matches; walking ell'
  // upward checks each prefix in turn.
  for (std::size_t ell_prime = b + c + 1; ell_prime <= anomaly.ell; ++ell_prime) {
    if (stream[ell_prime - 1] != stream[ell_prime - 1 - c]) return false;
  }
  return true;
}

SymbolStream rotation_window(std::span<const SymbolId> cycle, std::size_t w, std::size_t i) {
  const std::size_t c = cycle.size();
  if (c == 0) throw InputError("rotation_window: empty cycle");
  if (w == 0) throw InputError("rotation_window: w must be >= 1");
  if (i >= c) throw InputError("rotation_window: i must lie in [0, c-1]");

  SymbolStream out;
  out.reserve(w);
  if (w >= c) {
    // x^c_(1+i:c), (r - 1 + floor((i+j)/c)) full copies, x^c_(1:(j+i) mod c)
    const std::size_t r = w / c;
    const std::size_t j = w % c;
    append_range(out, cycle, i, c);
    const std::size_t copies = r - 1 + (i + j) / c;
    for (std::size_t k = 0; k < copies; ++k) append_range(out, cycle, 0, c);
    append_range(out, cycle, 0, (j + i) % c);
  } else if (i <= c - w) {
    append_range(out, cycle, i, i + w);
  } else {
    append_range(out, cycle, i, c);
    append_range(out, cycle, 0, i + w - c);
  }
  return out;
}

}  // namespace nonhalt
