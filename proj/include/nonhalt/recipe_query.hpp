#pragma once

// Prompt templates for the repetition recipe.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace nonhalt {

enum class TemplateId { kManyWords, kWords };

/// "MANY_WORDS" / "WORDS", the names used in records.
std::string_view to_string(TemplateId id);
/// Accepts the record names and the CLI spellings "many-words" / "words".
std::optional<TemplateId> parse_template(std::string_view name);

/// The instruction sentence of a template, without the context block.
std::string_view instruction_sentence(TemplateId id);

struct RecipeQuery {
  TemplateId template_id = TemplateId::kManyWords;
  std::string cycle_text;
  std::size_t repetitions = 0;
  std::string rendered;

  friend bool operator==(const RecipeQuery&, const RecipeQuery&) = default;
};

/// cycle_text repeated reps times with no separator.
std::string build_context(std::string_view cycle_text, std::size_t reps);

/// "<instruction sentence>\nContext: <context>\nAnswer:"
RecipeQuery build_query(TemplateId template_id, std::string_view cycle_text, std::size_t reps);

}  // namespace nonhalt
