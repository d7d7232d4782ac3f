#include "nonhalt/harness/segment.hpp"

namespace nonhalt {

namespace {

bool is_space(char ch) {
  return ch == ' ' || ch == '\n' || ch == '\t' || ch == '\r' || ch == '\f' || ch == '\v';
}

// Length of the UTF-8 sequence introduced by a lead byte; 1 for stray bytes.
std::size_t utf8_length(unsigned char lead) {
  if (lead >= 0xF0 && lead < 0xF8) return 4;
  if (lead >= 0xE0) return lead < 0xF0 ? 3 : 1;
  if (lead >= 0xC0) return 2;
  return 1;
}

}  // namespace

std::optional<UnitMode> parse_unit_mode(std::string_view name) {
  if (name == "chunk" || name == "raw") return UnitMode::kRawChunk;
  if (name == "word") return UnitMode::kWord;
  if (name == "char") return UnitMode::kChar;
  return std::nullopt;
}

std::string_view to_string(UnitMode mode) {
  switch (mode) {
    case UnitMode::kRawChunk: return "chunk";
    case UnitMode::kWord: return "word";
    case UnitMode::kChar: return "char";
  }
  return "unknown";
}

std::vector<std::string> UnitSegmenter::push(std::string_view delta) {
  std::vector<std::string> units;
  switch (mode_) {
    case UnitMode::kRawChunk:
      if (!delta.empty()) units.emplace_back(delta);
      break;
    case UnitMode::kWord:
      for (char ch : delta) {
        if (is_space(ch)) {
          if (!pending_.empty()) units.push_back(std::exchange(pending_, {}));
        } else {
          pending_.push_back(ch);
        }
      }
      break;
    case UnitMode::kChar: {
      pending_.append(delta);
      std::size_t i = 0;
      while (i < pending_.size()) {
        const std::size_t len = utf8_length(static_cast<unsigned char>(pending_[i]));
        if (i + len > pending_.size()) break;  // code point split across deltas
        units.push_back(pending_.substr(i, len));
        i += len;
      }
      pending_.erase(0, i);
      break;
    }
  }
  return units;
}

std::vector<std::string> UnitSegmenter::finish() {
  std::vector<std::string> units;
  if (!pending_.empty()) units.push_back(std::exchange(pending_, {}));
  return units;
}

std::vector<std::string> segment_text(std::string_view text, UnitMode mode) {
  UnitSegmenter seg(mode);
  auto units = seg.push(text);
  for (auto& u : seg.finish()) units.push_back(std::move(u));
  return units;
}

}  // namespace nonhalt
