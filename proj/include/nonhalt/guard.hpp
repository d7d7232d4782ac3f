#pragma once

// Sampler-side countermeasures: a hard cap on generated units and an online
// loop detector that ends degenerate streams.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "nonhalt/cycle.hpp"

namespace nonhalt {

struct GuardPolicy {
  std::size_t hard_limit = 4096;
  std::size_t loop_c_max = kDefaultGuardCMax;
  std::size_t loop_min_repeats = 3;  // R
  bool hard_limit_enabled = true;
  bool loop_enabled = true;

  /// Throws InputError unless hard_limit >= 1, loop_c_max >= 1 and R >= 2.
  void validate() const;
};

/// Reads "key = value" lines (hard_limit, loop_c_max, loop_min_repeats,
/// hard_limit_enabled, loop_enabled); '#' starts a comment.
GuardPolicy parse_guard_policy(std::string_view text);
GuardPolicy load_guard_policy(const std::string& path);

enum class GuardVerdict { kPass, kTerminate };
enum class TerminateReason { kHardLimit, kLoop };

struct GuardAction {
  GuardVerdict verdict = GuardVerdict::kPass;
  std::optional<TerminateReason> reason;
  std::optional<CycleAnomaly> loop;  // set for kLoop

  bool terminated() const { return verdict == GuardVerdict::kTerminate; }
};

std::string describe(const GuardAction& action);

class GuardState {
 public:
  explicit GuardState(const GuardPolicy& policy);

  /// PASS, or TERMINATE on the unit exceeding hard_limit or on the first unit
  /// completing R full repetitions of a cycle. Throws std::logic_error once
  /// terminated.
  GuardAction feed(SymbolId next);

  bool terminated() const { return terminated_; }
  std::size_t units_seen() const { return seen_; }
  const GuardPolicy& policy() const { return policy_; }

 private:
  GuardPolicy policy_;
  StreamingDetector detector_;
  std::size_t seen_ = 0;
  bool terminated_ = false;
};

GuardState guard_new(const GuardPolicy& policy);

}  // namespace nonhalt
