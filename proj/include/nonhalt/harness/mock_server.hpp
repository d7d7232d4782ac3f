#pragma once

// Minimal chat-completions server for exercising the remote client offline.

#include <atomic>
#include <chrono>
#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace nonhalt {

struct MockScript {
  enum class Mode {
    kReplay,      // stream `deltas` (cyclically when `repeat`)
    kRecipeEcho,  // repeat the prompt's context cycle when it has enough copies
  };
  Mode mode = Mode::kReplay;

  std::vector<std::string> deltas{"MGUSA "};
  bool repeat = true;
  /// Finish reason sent when a non-repeating script runs out.
  std::string finish_reason = "stop";
  std::optional<double> logprob;  // per-delta logprob, when requested

  std::size_t echo_threshold = 3;       // kRecipeEcho: copies needed to cycle
  double echo_max_temperature = 0.5;    // kRecipeEcho: no cycling above this
  std::string refusal_text = "I cannot help with that.";

  int status = 200;
  std::chrono::milliseconds delta_delay{0};
};

/// Serves POST /v1/chat/completions on 127.0.0.1. Every delta counts as one
/// token against max_tokens; reaching it ends the stream with "length".
class MockChatServer {
 public:
  explicit MockChatServer(MockScript script);
  ~MockChatServer();
  MockChatServer(const MockChatServer&) = delete;
  MockChatServer& operator=(const MockChatServer&) = delete;

  /// Binds (port 0 picks a free port) and serves on a background thread.
  int start(int port = 0);
  /// Serves on the calling thread until stop().
  void listen_blocking(const std::string& host, int port);
  void stop();

  int port() const { return port_; }
  std::string base_url() const;
  std::size_t requests() const { return requests_.load(); }
  std::string last_request_body() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int port_ = 0;
  std::atomic<std::size_t> requests_{0};
  mutable std::mutex mu_;
  std::string last_body_;
  std::thread thread_;
};

}  // namespace nonhalt
