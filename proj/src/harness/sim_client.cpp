#include "nonhalt/harness/sim_client.hpp"

#include <chrono>
#include <cmath>

#include "nonhalt/fixture.hpp"

namespace nonhalt {

SymbolStream tokenize(std::string_view text, const Vocab& vocab, std::optional<SymbolId> unknown_id) {
  SymbolStream out;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t best_len = 0;
    SymbolId best = 0;
    for (const Symbol& s : vocab.symbols()) {
      if (!s.text || s.text->empty() || s.text->size() <= best_len) continue;
      if (text.substr(i, s.text->size()) == *s.text) {
        best_len = s.text->size();
        best = s.id;
      }
    }
    if (best_len == 0) {
      if (!unknown_id)
        throw InputError("no vocabulary text matches the prompt at byte " + std::to_string(i));
      out.push_back(*unknown_id);
      ++i;
    } else {
      out.push_back(best);
      i += best_len;
    }
  }
  return out;
}

SimClient::SimClient(std::string id, SimModel model, SimClientOptions options)
    : id_(std::move(id)), model_(std::move(model)), options_(options) {
  if (options_.unknown_id && *options_.unknown_id >= model_.vocab_size())
    throw InputError("unknown_id out of vocabulary");
}

SymbolStream SimClient::encode(std::string_view prompt) const {
  if (options_.encoding == PromptEncoding::kIds) return parse_ids(prompt);
  return tokenize(prompt, model_.vocab(), options_.unknown_id);
}

std::string SimClient::unit_text(SymbolId id) const {
  const Symbol& s = model_.vocab().at(id);
  return s.text ? *s.text : std::to_string(id);
}

Completion SimClient::complete(const CompletionRequest& request, const UnitCallback& on_unit) {
  Completion done;
  SymbolStream prompt;
  try {
    prompt = encode(request.prompt);
    if (prompt.empty()) throw InputError("prompt encodes to no symbols");
  } catch (const std::exception& e) {
    done.finish = FinishReason::kError;
    done.diagnostic = e.what();
    return done;
  }

  const auto deadline = std::chrono::steady_clock::now() + request.timeout;
  Simulation sim(model_, prompt, request.config);
  std::vector<double> logprobs;
  std::size_t delivered = 0;
  while (true) {
    if (delivered >= request.max_units) {
      done.finish = FinishReason::kLength;
      break;
    }
    if (std::chrono::steady_clock::now() > deadline) {
      done.finish = FinishReason::kError;
      done.diagnostic = "timeout";
      break;
    }
    const SymbolId id = *sim.step();
    if (sim.halted()) {
      done.finish = FinishReason::kStop;
      break;
    }
    logprobs.push_back(std::log(sim.last_probability()));
    ++delivered;
    if (!on_unit(OutputUnit{unit_text(id), id})) {
      done.finish = FinishReason::kLength;
      break;
    }
  }
  if (request.want_logprobs) done.logprobs = std::move(logprobs);
  return done;
}

}  // namespace nonhalt
