#include "nonhalt/harness/client.hpp"

namespace nonhalt {

std::string_view to_string(FinishReason finish) {
  switch (finish) {
    case FinishReason::kStop: return "stop";
    case FinishReason::kLength: return "length";
    case FinishReason::kError: return "error";
  }
  return "error";
}

std::optional<FinishReason> parse_finish(std::string_view name) {
  if (name == "stop") return FinishReason::kStop;
  if (name == "length") return FinishReason::kLength;
  if (name == "error") return FinishReason::kError;
  return std::nullopt;
}

}  // namespace nonhalt
