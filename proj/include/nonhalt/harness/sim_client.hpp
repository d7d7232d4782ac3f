#pragma once

#include <optional>
#include <string>

#include "nonhalt/harness/client.hpp"
#include "nonhalt/sim_model.hpp"

namespace nonhalt {

enum class PromptEncoding {
  kTokenize,  // greedy longest match over vocabulary texts
  kIds,       // the prompt is a list of symbol ids
};

struct SimClientOptions {
  PromptEncoding encoding = PromptEncoding::kTokenize;
  /// Symbol for bytes no vocabulary text matches; unmatched bytes are an
  /// error when unset.
  std::optional<SymbolId> unknown_id;
};

/// Serves a simulator model through the ModelClient contract. Units carry
/// the symbol id and its vocabulary text (or the decimal id). The terminating
/// eos is not delivered as a unit.
class SimClient final : public ModelClient {
 public:
  SimClient(std::string id, SimModel model, SimClientOptions options = {});

  const std::string& id() const override { return id_; }
  ClientKind kind() const override { return ClientKind::kSim; }
  std::optional<std::size_t> w_known() const override { return model_.w(); }
  Completion complete(const CompletionRequest& request, const UnitCallback& on_unit) override;

  SymbolStream encode(std::string_view prompt) const;
  std::string unit_text(SymbolId id) const;
  const SimModel& model() const { return model_; }

 private:
  std::string id_;
  SimModel model_;
  SimClientOptions options_;
};

/// Greedy longest-match tokenization over the texts of `vocab`.
SymbolStream tokenize(std::string_view text, const Vocab& vocab, std::optional<SymbolId> unknown_id);

}  // namespace nonhalt
