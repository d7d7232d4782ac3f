#include "nonhalt/harness/mock_server.hpp"

#include <stdexcept>

#include "httplib.h"
#include "json.hpp"
#include "nonhalt/core.hpp"

namespace nonhalt {

using nlohmann::json;

namespace {

struct StreamPlan {
  std::vector<std::string> deltas;
  bool repeat = false;
  std::string finish_reason = "stop";
};

std::string last_user_message(const json& body) {
  if (!body.contains("messages") || !body["messages"].is_array()) return {};
  std::string text;
  for (const auto& m : body["messages"]) {
    if (m.contains("content") && m["content"].is_string()) text = m["content"].get<std::string>();
  }
  return text;
}

// The cycle a recipe prompt's context repeats, and how many whole copies.
std::pair<std::string, std::size_t> context_cycle(const std::string& prompt) {
  const std::string open = "Context: ";
  const std::string close = "\nAnswer:";
  const auto a = prompt.find(open);
  if (a == std::string::npos) return {{}, 0};
  const auto b = prompt.find(close, a + open.size());
  if (b == std::string::npos) return {{}, 0};
  const std::string context = prompt.substr(a + open.size(), b - a - open.size());
  if (context.empty()) return {{}, 0};
  SymbolStream bytes;
  for (unsigned char ch : context) bytes.push_back(ch);
  const std::size_t p = primitive_period(bytes);
  if (context.size() % p != 0) return {context, 1};
  return {context.substr(0, p), context.size() / p};
}

std::string sse(const json& event) { return "data: " + event.dump() + "\n\n"; }

json chunk(const std::string& model, const json& delta, const json& finish, const json& logprobs) {
  json choice = {{"index", 0}, {"delta", delta}, {"finish_reason", finish}};
  if (!logprobs.is_null()) choice["logprobs"] = logprobs;
  return {{"id", "chatcmpl-mock"},
          {"object", "chat.completion.chunk"},
          {"model", model},
          {"choices", json::array({choice})}};
}

}  // namespace

struct MockChatServer::Impl {
  MockScript script;
  httplib::Server server;
  std::atomic<bool> stopping{false};
};

MockChatServer::MockChatServer(MockScript script) : impl_(std::make_unique<Impl>()) {
  impl_->script = std::move(script);
  Impl* impl = impl_.get();

  impl_->server.Post("/v1/chat/completions", [this, impl](const httplib::Request& req,
                                                          httplib::Response& res) {
    ++requests_;
    {
      std::lock_guard lock(mu_);
      last_body_ = req.body;
    }
    const MockScript& s = impl->script;
    if (s.status != 200) {
      res.status = s.status;
      res.set_content(json{{"error", {{"message", "scripted failure"}}}}.dump(), "application/json");
      return;
    }
    json body;
    try {
      body = json::parse(req.body);
    } catch (const json::exception&) {
      res.status = 400;
      res.set_content(R"({"error":{"message":"invalid JSON"}})", "application/json");
      return;
    }
    const std::string model = body.value("model", std::string("mock"));
    const std::size_t max_tokens = body.value("max_tokens", std::size_t{1} << 20);
    const double temperature = body.value("temperature", 1.0);
    const bool want_logprobs = body.value("logprobs", false);

    auto plan = std::make_shared<StreamPlan>();
    if (s.mode == MockScript::Mode::kReplay) {
      plan->deltas = s.deltas;
      plan->repeat = s.repeat;
      plan->finish_reason = s.finish_reason;
    } else {
      const auto [root, copies] = context_cycle(last_user_message(body));
      if (!root.empty() && copies >= s.echo_threshold && temperature <= s.echo_max_temperature) {
        plan->deltas = {root + " "};
        plan->repeat = true;
      } else {
        plan->deltas = {s.refusal_text};
        plan->repeat = false;
        plan->finish_reason = "stop";
      }
    }
    if (plan->deltas.empty()) plan->repeat = false;

    auto sent = std::make_shared<std::size_t>(0);
    const auto delay = s.delta_delay;
    const std::optional<double> logprob = s.logprob;
    res.set_header("Cache-Control", "no-cache");
    res.set_chunked_content_provider(
        "text/event-stream",
        [impl, plan, sent, model, max_tokens, want_logprobs, logprob, delay](std::size_t,
                                                                            httplib::DataSink& sink) {
          if (impl->stopping) return false;
          auto finish = [&](const std::string& reason) {
            const std::string tail = sse(chunk(model, json::object(), reason, nullptr)) + "data: [DONE]\n\n";
            sink.write(tail.data(), tail.size());
            sink.done();
            return true;
          };
          if (*sent >= max_tokens) return finish("length");
          const bool exhausted = !plan->repeat && *sent >= plan->deltas.size();
          if (exhausted) return finish(plan->finish_reason);
          if (delay.count() > 0) std::this_thread::sleep_for(delay);
          const std::string& text = plan->deltas[*sent % plan->deltas.size()];
          json lp = nullptr;
          if (want_logprobs && logprob) {
            lp = {{"content", json::array({{{"token", text}, {"logprob", *logprob}}})}};
          }
          const std::string event = sse(chunk(model, {{"content", text}}, nullptr, lp));
          ++*sent;
          return sink.write(event.data(), event.size());
        });
  });
}

MockChatServer::~MockChatServer() { stop(); }

int MockChatServer::start(int port) {
  if (port == 0) {
    port_ = impl_->server.bind_to_any_port("127.0.0.1");
    if (port_ < 0) throw std::runtime_error("mock server could not bind");
  } else {
    if (!impl_->server.bind_to_port("127.0.0.1", port)) throw std::runtime_error("mock server could not bind");
    port_ = port;
  }
  thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port_;
}

void MockChatServer::listen_blocking(const std::string& host, int port) {
  port_ = port;
  if (!impl_->server.listen(host, port)) throw std::runtime_error("mock server could not listen");
}

void MockChatServer::stop() {
  impl_->stopping = true;
  impl_->server.stop();
  if (thread_.joinable()) thread_.join();
}

std::string MockChatServer::base_url() const { return "http://127.0.0.1:" + std::to_string(port_); }

std::string MockChatServer::last_request_body() const {
  std::lock_guard lock(mu_);
  return last_body_;
}

}  // namespace nonhalt
