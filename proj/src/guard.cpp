#include "nonhalt/guard.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nonhalt {

void GuardPolicy::validate() const {
  if (hard_limit < 1) throw InputError("hard_limit must be >= 1");
  if (loop_c_max < 1) throw InputError("loop_c_max must be >= 1");
  if (loop_min_repeats < 2) throw InputError("loop_min_repeats must be >= 2");
}

namespace {

std::string trim(std::string_view s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string_view::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return std::string(s.substr(a, b - a + 1));
}

std::size_t parse_size(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  unsigned long long n = 0;
  try {
    n = std::stoull(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty() || v[0] == '-') throw InputError(key + " needs a non-negative integer, got '" + v + "'");
  return static_cast<std::size_t>(n);
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw InputError(key + " needs a boolean, got '" + v + "'");
}

}  // namespace

GuardPolicy parse_guard_policy(std::string_view text) {
  GuardPolicy p;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InputError("policy line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key == "hard_limit") p.hard_limit = parse_size(key, value);
    else if (key == "loop_c_max") p.loop_c_max = parse_size(key, value);
    else if (key == "loop_min_repeats") p.loop_min_repeats = parse_size(key, value);
    else if (key == "hard_limit_enabled") p.hard_limit_enabled = parse_bool(key, value);
    else if (key == "loop_enabled") p.loop_enabled = parse_bool(key, value);
    else throw InputError("policy line " + std::to_string(lineno) + ": unknown key " + key);
  }
  p.validate();
  return p;
}

GuardPolicy load_guard_policy(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read policy file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_guard_policy(buf.str());
}

std::string describe(const GuardAction& action) {
  if (!action.terminated()) return "PASS";
  if (action.reason == TerminateReason::kHardLimit) return "TERMINATE HARD_LIMIT";
  std::string out = "TERMINATE LOOP";
  if (action.loop) {
    out += " b=" + std::to_string(action.loop->b) + " c=" + std::to_string(action.loop->c) +
           " r_obs=" + std::to_string(action.loop->r_obs);
  }
  return out;
}

GuardState::GuardState(const GuardPolicy& policy)
    : policy_((policy.validate(), policy)), detector_(policy.loop_c_max, policy.loop_min_repeats) {}

GuardAction GuardState::feed(SymbolId next) {
  if (terminated_) throw std::logic_error("guard already terminated the stream");
  ++seen_;
  GuardAction action;
  if (policy_.hard_limit_enabled && seen_ > policy_.hard_limit) {
    terminated_ = true;
    action.verdict = GuardVerdict::kTerminate;
    action.reason = TerminateReason::kHardLimit;
    return action;
  }
  if (policy_.loop_enabled) {
    if (auto loop = detector_.feed(next)) {
      terminated_ = true;
      action.verdict = GuardVerdict::kTerminate;
      action.reason = TerminateReason::kLoop;
      action.loop = std::move(loop);
    }
  }
  return action;
}

GuardState guard_new(const GuardPolicy& policy) { return GuardState(policy); }

}  // namespace nonhalt
