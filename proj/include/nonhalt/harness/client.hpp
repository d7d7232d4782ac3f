#pragma once

// Black-box model endpoint contract used by the probe harness.

#include <chrono>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nonhalt/core.hpp"
#include "nonhalt/sampler.hpp"

namespace nonhalt {

enum class ClientKind { kSim, kRemote };
enum class FinishReason { kStop, kLength, kError };

/// "stop" / "length" / "error".
std::string_view to_string(FinishReason finish);
std::optional<FinishReason> parse_finish(std::string_view name);

struct OutputUnit {
  std::string text;
  std::optional<SymbolId> id;  // set when the endpoint exposes token ids
};

struct CompletionRequest {
  std::string prompt;
  SamplerConfig config;
  std::size_t max_units = 1;
  std::chrono::milliseconds timeout{300'000};
  bool want_logprobs = false;
};

struct Completion {
  FinishReason finish = FinishReason::kError;
  std::string diagnostic;
  std::optional<std::vector<double>> logprobs;
};

/// Receives each unit in generation order; returning false stops generation.
using UnitCallback = std::function<bool(const OutputUnit&)>;

/// Implementations must tolerate concurrent complete() calls.
class ModelClient {
 public:
  virtual ~ModelClient() = default;

  virtual const std::string& id() const = 0;
  virtual ClientKind kind() const = 0;
  /// Context size, when the model declares one.
  virtual std::optional<std::size_t> w_known() const = 0;

  /// Delivers at most request.max_units units exactly once each. Reports
  /// kLength when the unit cap or the callback ended generation.
  virtual Completion complete(const CompletionRequest& request, const UnitCallback& on_unit) = 0;
};

}  // namespace nonhalt
