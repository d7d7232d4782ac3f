#include "nonhalt/fixture.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace nonhalt {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view s, std::size_t line_no) {
  s = trim(s);
  T value{};
  if constexpr (std::is_floating_point_v<T>) {
    try {
      std::size_t used = 0;
      value = static_cast<T>(std::stod(std::string(s), &used));
      if (used != s.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw InputError("line " + std::to_string(line_no) + ": bad number '" + std::string(s) + "'");
    }
  } else {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw InputError("line " + std::to_string(line_no) + ": bad integer '" + std::string(s) + "'");
  }
  return value;
}

}  // namespace

std::string unescape_text(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\' || i + 1 == s.size()) {
      out.push_back(s[i]);
      continue;
    }
    switch (s[++i]) {
      case 'n': out.push_back('\n'); break;
      case 't': out.push_back('\t'); break;
      case 's': out.push_back(' '); break;
      case '\\': out.push_back('\\'); break;
      default: out.push_back('\\'); out.push_back(s[i]); break;
    }
  }
  return out;
}

std::string escape_text(std::string_view s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case ' ': out += "\\s"; break;
      case '\\': out += "\\\\"; break;
      default: out.push_back(ch);
    }
  }
  return out;
}

SymbolStream parse_ids(std::string_view text) {
  SymbolStream ids;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == ',' || text[i] == '\t' ||
                               text[i] == '\n' || text[i] == '\r'))
      ++i;
    std::size_t j = i;
    while (j < text.size() && text[j] != ' ' && text[j] != ',' && text[j] != '\t' &&
           text[j] != '\n' && text[j] != '\r')
      ++j;
    if (j > i) ids.push_back(parse_number<SymbolId>(text.substr(i, j - i), 0));
    i = j;
  }
  return ids;
}

SimModel parse_model(std::istream& in) {
  std::string kind = "table";
  std::size_t w = 0;
  std::size_t n = 0;
  SymbolId eos = 0;
  std::uint64_t seed = 0;
  double echo_beta = 0.0;
  double eos_bias = 0.0;
  std::map<SymbolId, std::string> texts;
  SimModel::Table table;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (line.starts_with("@text ")) {
      // The text runs to the end of the line, so no comment stripping here.
      auto rest = line.substr(6);
      const auto space = rest.find(' ');
      if (space == std::string_view::npos)
        throw InputError("line " + std::to_string(line_no) + ": @text needs an id and a text");
      texts[parse_number<SymbolId>(rest.substr(0, space), line_no)] =
          unescape_text(rest.substr(space + 1));
      continue;
    }
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '@') {
      const auto space = line.find_first_of(" \t");
      const auto key = line.substr(1, space == std::string_view::npos ? line.npos : space - 1);
      const auto value = space == std::string_view::npos ? std::string_view{} : trim(line.substr(space));
      if (key == "kind") kind = std::string(value);
      else if (key == "w") w = parse_number<std::size_t>(value, line_no);
      else if (key == "vocab") n = parse_number<std::size_t>(value, line_no);
      else if (key == "eos") eos = parse_number<SymbolId>(value, line_no);
      else if (key == "seed") seed = parse_number<std::uint64_t>(value, line_no);
      else if (key == "echo_beta") echo_beta = parse_number<double>(value, line_no);
      else if (key == "eos_bias") eos_bias = parse_number<double>(value, line_no);
      else throw InputError("line " + std::to_string(line_no) + ": unknown directive @" + std::string(key));
      continue;
    }

    const auto arrow = line.find("->");
    if (arrow == std::string_view::npos)
      throw InputError("line " + std::to_string(line_no) + ": expected 'window-ids -> logits'");
    SymbolStream window = parse_ids(line.substr(0, arrow));
    std::vector<double> logits;
    std::string_view rest = line.substr(arrow + 2);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      logits.push_back(parse_number<double>(rest.substr(0, comma), line_no));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    if (!table.emplace(std::move(window), std::move(logits)).second)
      throw InputError("line " + std::to_string(line_no) + ": duplicate window");
  }

  if (w == 0) throw InputError("model file must set @w");
  if (n < 2) throw InputError("model file must set @vocab >= 2");
  std::vector<Symbol> symbols;
  for (std::size_t i = 0; i < n; ++i) {
    const auto id = static_cast<SymbolId>(i);
    if (auto it = texts.find(id); it != texts.end()) symbols.emplace_back(id, it->second);
    else symbols.emplace_back(id);
  }
  Vocab vocab(std::move(symbols), eos);
  if (kind == "table") return SimModel::table(w, std::move(vocab), std::move(table));
  if (kind == "hash_echo") {
    if (!table.empty()) throw InputError("hash_echo models take no table entries");
    return SimModel::hash_echo(w, std::move(vocab), seed, echo_beta, eos_bias);
  }
  throw InputError("unknown model kind '" + kind + "'");
}

SimModel parse_model(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_model(in);
}

SimModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open model file " + path);
  return parse_model(in);
}

std::string format_model(const SimModel& model) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "@kind " << (model.kind() == ModelKind::kTable ? "table" : "hash_echo") << '\n';
  out << "@w " << model.w() << '\n';
  out << "@vocab " << model.vocab_size() << '\n';
  out << "@eos " << model.eos() << '\n';
  if (model.kind() == ModelKind::kHashEcho) {
    out << "@seed " << model.seed() << '\n';
    out << "@echo_beta " << model.echo_beta() << '\n';
    out << "@eos_bias " << model.eos_bias() << '\n';
  }
  for (const Symbol& s : model.vocab().symbols()) {
    if (s.text) out << "@text " << s.id << ' ' << escape_text(*s.text) << '\n';
  }
  for (const auto& [window, logits] : model.entries()) {
    for (std::size_t i = 0; i < window.size(); ++i) out << (i ? " " : "") << window[i];
    out << " ->";
    for (std::size_t i = 0; i < logits.size(); ++i) out << (i ? "," : " ") << logits[i];
    out << '\n';
  }
  return out.str();
}

}  // namespace nonhalt
