#pragma once

// Splits streamed text deltas into output units.

#include <string>
#include <string_view>
#include <vector>
#include <optional>

namespace nonhalt {

enum class UnitMode { kRawChunk, kWord, kChar };

std::optional<UnitMode> parse_unit_mode(std::string_view name);
std::string_view to_string(UnitMode mode);

/// kWord: maximal runs of non-whitespace, reassembled across deltas.
/// kChar: one UTF-8 code point per unit. kRawChunk: each non-empty delta.
class UnitSegmenter {
 public:
  explicit UnitSegmenter(UnitMode mode) : mode_(mode) {}

  /// Units completed by this delta.
  std::vector<std::string> push(std::string_view delta);
  /// Flushes a trailing partial unit at end of stream.
  std::vector<std::string> finish();

 private:
  UnitMode mode_;
  std::string pending_;
};

/// Whole-text convenience wrapper.
std::vector<std::string> segment_text(std::string_view text, UnitMode mode);

}  // namespace nonhalt
