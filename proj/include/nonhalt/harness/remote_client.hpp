#pragma once

// OpenAI-compatible chat-completions client with server-sent-event streaming.

#include <optional>
#include <string>

#include "nonhalt/harness/client.hpp"
#include "nonhalt/harness/segment.hpp"

namespace nonhalt {

inline constexpr const char* kApiKeyEnv = "NONHALT_API_KEY";
inline constexpr const char* kBaseUrlEnv = "NONHALT_BASE_URL";

struct RemoteClientOptions {
  std::string base_url;  // scheme://host[:port][/prefix]; "/v1/chat/completions" is appended
  std::string model;
  std::string api_key;
  UnitMode unit_mode = UnitMode::kWord;
  std::optional<std::size_t> w_known;
  /// Overrides the request's max_units as the server-side max_tokens.
  std::optional<std::size_t> max_tokens;
};

/// Fills base_url and api_key from NONHALT_BASE_URL / NONHALT_API_KEY when
/// they are empty.
RemoteClientOptions with_environment(RemoteClientOptions options);

class RemoteClient final : public ModelClient {
 public:
  explicit RemoteClient(RemoteClientOptions options);

  const std::string& id() const override { return options_.model; }
  ClientKind kind() const override { return ClientKind::kRemote; }
  std::optional<std::size_t> w_known() const override { return options_.w_known; }
  Completion complete(const CompletionRequest& request, const UnitCallback& on_unit) override;

  /// JSON body sent for a request.
  std::string request_body(const CompletionRequest& request) const;

 private:
  RemoteClientOptions options_;
  std::string origin_;  // scheme://host:port
  std::string path_;    // prefix + /v1/chat/completions
};

}  // namespace nonhalt
