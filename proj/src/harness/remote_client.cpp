#include "nonhalt/harness/remote_client.hpp"

#include <chrono>
#include <cstdlib>

#include "httplib.h"
#include "json.hpp"

namespace nonhalt {

using nlohmann::json;

RemoteClientOptions with_environment(RemoteClientOptions options) {
  if (options.base_url.empty()) {
    if (const char* v = std::getenv(kBaseUrlEnv)) options.base_url = v;
  }
  if (options.api_key.empty()) {
    if (const char* v = std::getenv(kApiKeyEnv)) options.api_key = v;
  }
  return options;
}

RemoteClient::RemoteClient(RemoteClientOptions options) : options_(std::move(options)) {
  if (options_.base_url.empty()) throw InputError("remote client needs a base URL");
  if (options_.model.empty()) throw InputError("remote client needs a model name");
  std::string url = options_.base_url;
  while (!url.empty() && url.back() == '/') url.pop_back();
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw InputError("base URL needs a scheme: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  origin_ = url.substr(0, path_start);
  path_ = (path_start == std::string::npos ? std::string{} : url.substr(path_start)) +
          "/v1/chat/completions";
}

std::string RemoteClient::request_body(const CompletionRequest& request) const {
  json body = {
      {"model", options_.model},
      {"messages", json::array({{{"role", "user"}, {"content", request.prompt}}})},
      {"temperature", request.config.tau},
      {"top_p", request.config.top_p},
      {"max_tokens", options_.max_tokens.value_or(request.max_units)},
      {"stream", true},
  };
  if (request.want_logprobs) body["logprobs"] = true;
  return body.dump();
}

Completion RemoteClient::complete(const CompletionRequest& request, const UnitCallback& on_unit) {
  Completion done;
  const auto deadline = std::chrono::steady_clock::now() + request.timeout;

  httplib::Client http(origin_);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(request.timeout).count();
  http.set_connection_timeout(std::max<long long>(1, std::min<long long>(secs, 30)), 0);
  http.set_read_timeout(std::max<long long>(1, secs), 0);

  UnitSegmenter segmenter(options_.unit_mode);
  std::string buffer;
  std::string error_body;
  int status = 0;
  std::size_t delivered = 0;
  bool stopped = false;      // budget reached or caller asked to stop
  bool timed_out = false;
  bool saw_done = false;
  std::optional<std::string> server_finish;
  std::vector<double> logprobs;
  std::string parse_error;

  auto deliver = [&](std::vector<std::string> units) {
    for (auto& text : units) {
      if (delivered >= request.max_units) {
        stopped = true;
        return false;
      }
      ++delivered;
      if (!on_unit(OutputUnit{std::move(text), std::nullopt})) {
        stopped = true;
        return false;
      }
    }
    if (delivered >= request.max_units) {
      stopped = true;
      return false;
    }
    return true;
  };

  auto handle_event = [&](std::string_view data) {
    if (data == "[DONE]") {
      saw_done = true;
      return false;
    }
    json chunk;
    try {
      chunk = json::parse(data);
    } catch (const std::exception& e) {
      parse_error = std::string("malformed stream event: ") + e.what();
      return false;
    }
    if (!chunk.contains("choices") || !chunk["choices"].is_array() || chunk["choices"].empty())
      return true;
    const json& choice = chunk["choices"][0];
    if (choice.contains("logprobs") && choice["logprobs"].is_object() &&
        choice["logprobs"].contains("content") && choice["logprobs"]["content"].is_array()) {
      for (const auto& tok : choice["logprobs"]["content"]) {
        if (tok.contains("logprob") && tok["logprob"].is_number()) logprobs.push_back(tok["logprob"].get<double>());
      }
    }
    if (choice.contains("delta") && choice["delta"].contains("content") &&
        choice["delta"]["content"].is_string()) {
      if (!deliver(segmenter.push(choice["delta"]["content"].get<std::string>()))) return false;
    }
    if (choice.contains("finish_reason") && choice["finish_reason"].is_string()) {
      server_finish = choice["finish_reason"].get<std::string>();
    }
    return true;
  };

  httplib::Request req;
  req.method = "POST";
  req.path = path_;
  req.body = request_body(request);
  req.set_header("Content-Type", "application/json");
  req.set_header("Accept", "text/event-stream");
  if (!options_.api_key.empty()) req.set_header("Authorization", "Bearer " + options_.api_key);
  req.response_handler = [&](const httplib::Response& res) {
    status = res.status;
    return true;
  };
  req.content_receiver = [&](const char* data, std::size_t len, std::uint64_t, std::uint64_t) {
    if (std::chrono::steady_clock::now() > deadline) {
      timed_out = true;
      return false;
    }
    if (status != 200) {
      if (error_body.size() < 2048) error_body.append(data, std::min(len, 2048 - error_body.size()));
      return true;
    }
    buffer.append(data, len);
    std::size_t start = 0;
    for (auto nl = buffer.find('\n', start); nl != std::string::npos; nl = buffer.find('\n', start)) {
      std::string_view line(buffer.data() + start, nl - start);
      start = nl + 1;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (!line.starts_with("data:")) continue;
      line.remove_prefix(5);
      if (!line.empty() && line.front() == ' ') line.remove_prefix(1);
      if (!handle_event(line)) {
        buffer.erase(0, start);
        return false;
      }
    }
    buffer.erase(0, start);
    return true;
  };

  const auto result = http.send(req);

  // A unit still open when the server truncates at max_tokens is incomplete.
  if (!stopped && !timed_out && parse_error.empty() && status == 200 && server_finish != "length") {
    deliver(segmenter.finish());
  }
  if (!logprobs.empty()) done.logprobs = std::move(logprobs);

  if (timed_out) {
    done.finish = FinishReason::kError;
    done.diagnostic = "timeout";
  } else if (stopped) {
    done.finish = FinishReason::kLength;
  } else if (!parse_error.empty()) {
    done.finish = FinishReason::kError;
    done.diagnostic = parse_error;
  } else if (status != 0 && status != 200) {
    done.finish = FinishReason::kError;
    done.diagnostic = "HTTP " + std::to_string(status) + ": " + error_body;
  } else if (!result && !saw_done) {
    done.finish = FinishReason::kError;
    done.diagnostic = "transport: " + httplib::to_string(result.error());
  } else if (server_finish == "length") {
    done.finish = FinishReason::kLength;
  } else if (server_finish == "stop" || server_finish == "eos" || saw_done) {
    done.finish = FinishReason::kStop;
  } else {
    done.finish = FinishReason::kError;
    done.diagnostic = "stream ended without a finish reason";
  }
  return done;
}

}  // namespace nonhalt
