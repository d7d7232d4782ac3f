// Standalone chat-completions mock for manual runs of the probe harness.
//
//   nonhalt_mock_server [--port 8089] [--mode replay|recipe-echo]
//                       [--delta "MGUSA "]... [--once] [--finish stop]
//                       [--threshold 3] [--max-temperature 0.5]

#include <iostream>

#include "CLI11.hpp"
#include "nonhalt/harness/mock_server.hpp"

int main(int argc, char** argv) {
  CLI::App app{"OpenAI-compatible mock endpoint"};
  int port = 8089;
  std::string host = "127.0.0.1";
  std::string mode = "replay";
  std::vector<std::string> deltas;
  bool once = false;
  nonhalt::MockScript script;
  app.add_option("--host", host)->capture_default_str();
  app.add_option("--port", port)->capture_default_str();
  app.add_option("--mode", mode, "replay or recipe-echo")->capture_default_str();
  app.add_option("--delta", deltas, "Streamed text deltas (repeatable)");
  app.add_flag("--once", once, "Send the deltas once, then finish");
  app.add_option("--finish", script.finish_reason, "Finish reason after --once deltas")->capture_default_str();
  app.add_option("--threshold", script.echo_threshold, "recipe-echo: copies needed")->capture_default_str();
  app.add_option("--max-temperature", script.echo_max_temperature)->capture_default_str();
  app.add_option("--logprob", script.logprob, "Per-delta logprob");
  CLI11_PARSE(app, argc, argv);

  if (mode == "recipe-echo") script.mode = nonhalt::MockScript::Mode::kRecipeEcho;
  else if (mode != "replay") {
    std::cerr << "unknown mode " << mode << '\n';
    return 2;
  }
  if (!deltas.empty()) script.deltas = deltas;
  script.repeat = !once;

  nonhalt::MockChatServer server(script);
  std::cout << "listening on http://" << host << ':' << port << std::endl;
  server.listen_blocking(host, port);
  return 0;
}
