#include "nonhalt/harness/record.hpp"

#include <ctime>
#include <filesystem>
#include <stdexcept>

namespace nonhalt {

using nlohmann::json;

std::string format_rfc3339(std::chrono::system_clock::time_point t) {
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(t.time_since_epoch()).count();
  const std::time_t secs = static_cast<std::time_t>(ms / 1000);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[40];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[48];
  std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms % 1000));
  return out;
}

RecordLine to_record_line(const ProbeRecord& record) {
  RecordLine line;
  line.ts = format_rfc3339(record.started_at);
  line.model_id = record.model_id;
  line.prompt = record.prompt;
  if (record.query) {
    line.template_id = std::string(to_string(record.query->template_id));
    line.cycle_text = record.query->cycle_text;
    line.reps = record.query->repetitions;
  }
  line.tau = record.config.tau;
  line.top_k = record.config.top_k;
  line.top_p = record.config.top_p;
  line.seed = record.config.seed;
  line.output_budget = record.output_budget;
  line.finish = std::string(to_string(record.finish));
  if (record.anomaly) {
    line.anomaly = AnomalyLine{record.anomaly->b, record.anomaly->c, record.anomaly->r_obs,
                               record.anomaly->ell, record.cycle_text()};
  }
  line.ell_star = record.ell_star;
  line.classification = std::string(to_string(record.classification));
  line.duration_ms = record.duration.count();
  line.logprobs = record.logprobs;
  return line;
}

namespace {

template <typename T>
json nullable(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

const json& field(const json& j, const char* key) {
  if (!j.contains(key)) throw InputError(std::string("record is missing field ") + key);
  return j.at(key);
}

template <typename T>
T get(const json& j, const char* key) {
  try {
    return field(j, key).get<T>();
  } catch (const json::exception& e) {
    throw InputError(std::string("record field ") + key + ": " + e.what());
  }
}

template <typename T>
std::optional<T> get_nullable(const json& j, const char* key) {
  if (field(j, key).is_null()) return std::nullopt;
  return get<T>(j, key);
}

const char* const kFields[] = {"ts",           "model_id", "prompt",       "template_id",
                               "cycle_text",   "reps",     "tau",          "top_k",
                               "top_p",        "seed",     "output_budget", "finish",
                               "anomaly",      "ell_star", "classification", "duration_ms",
                               "logprobs"};

}  // namespace

json to_json(const RecordLine& line) {
  json anomaly = nullptr;
  if (line.anomaly) {
    anomaly = {{"b", line.anomaly->b},
               {"c", line.anomaly->c},
               {"r_obs", line.anomaly->r_obs},
               {"ell", line.anomaly->ell},
               {"cycle", line.anomaly->cycle}};
  }
  return json{{"ts", line.ts},
              {"model_id", line.model_id},
              {"prompt", line.prompt},
              {"template_id", nullable(line.template_id)},
              {"cycle_text", nullable(line.cycle_text)},
              {"reps", nullable(line.reps)},
              {"tau", line.tau},
              {"top_k", line.top_k},
              {"top_p", line.top_p},
              {"seed", line.seed},
              {"output_budget", line.output_budget},
              {"finish", line.finish},
              {"anomaly", anomaly},
              {"ell_star", nullable(line.ell_star)},
              {"classification", line.classification},
              {"duration_ms", line.duration_ms},
              {"logprobs", nullable(line.logprobs)}};
}

RecordLine record_from_json(const json& j) {
  if (!j.is_object()) throw InputError("record must be a JSON object");
  for (const char* key : kFields) field(j, key);
  if (j.size() != std::size(kFields)) throw InputError("record has unexpected fields");

  RecordLine line;
  line.ts = get<std::string>(j, "ts");
  line.model_id = get<std::string>(j, "model_id");
  line.prompt = get<std::string>(j, "prompt");
  line.template_id = get_nullable<std::string>(j, "template_id");
  line.cycle_text = get_nullable<std::string>(j, "cycle_text");
  line.reps = get_nullable<std::size_t>(j, "reps");
  line.tau = get<double>(j, "tau");
  line.top_k = get<std::size_t>(j, "top_k");
  line.top_p = get<double>(j, "top_p");
  line.seed = get<std::uint64_t>(j, "seed");
  line.output_budget = get<std::size_t>(j, "output_budget");
  line.finish = get<std::string>(j, "finish");
  if (!parse_finish(line.finish)) throw InputError("record has unknown finish " + line.finish);
  if (const json& a = field(j, "anomaly"); !a.is_null()) {
    AnomalyLine al;
    al.b = get<std::size_t>(a, "b");
    al.c = get<std::size_t>(a, "c");
    al.r_obs = get<std::size_t>(a, "r_obs");
    al.ell = get<std::size_t>(a, "ell");
    al.cycle = get<std::vector<std::string>>(a, "cycle");
    line.anomaly = std::move(al);
  }
  line.ell_star = get_nullable<std::size_t>(j, "ell_star");
  line.classification = get<std::string>(j, "classification");
  if (!parse_classification(line.classification))
    throw InputError("record has unknown classification " + line.classification);
  line.duration_ms = get<std::int64_t>(j, "duration_ms");
  line.logprobs = get_nullable<std::vector<double>>(j, "logprobs");
  return line;
}

std::string serialize(const RecordLine& line) { return to_json(line).dump(); }

RecordLine parse_record(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed record line: ") + e.what());
  }
  return record_from_json(j);
}

RecordSink::RecordSink(const std::string& path, const json& config) : path_(path) {
  std::error_code ec;
  const bool fresh = !std::filesystem::exists(path, ec) || std::filesystem::file_size(path, ec) == 0;
  out_.open(path, std::ios::app | std::ios::binary);
  if (!out_) throw std::runtime_error("cannot open record file " + path);
  if (fresh) {
    out_ << json{{"config", config}}.dump() << '\n';
    out_.flush();
    if (!out_) throw std::runtime_error("cannot write record file " + path);
  }
}

void RecordSink::append(const RecordLine& line) {
  const std::string text = serialize(line) + '\n';
  std::lock_guard lock(mu_);
  out_.write(text.data(), static_cast<std::streamsize>(text.size()));
  out_.flush();
  if (!out_) throw std::runtime_error("write to record file " + path_ + " failed");
}

namespace {

std::vector<std::string> read_lines(const std::string& path, bool& last_complete) {
  std::vector<std::string> lines;
  last_complete = true;
  std::ifstream in(path, std::ios::binary);
  if (!in) return lines;
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::size_t start = 0;
  while (start < content.size()) {
    const auto nl = content.find('\n', start);
    if (nl == std::string::npos) {
      lines.push_back(content.substr(start));
      last_complete = false;
      break;
    }
    lines.push_back(content.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

bool is_config_line(const std::string& line) {
  try {
    const json j = json::parse(line);
    return j.is_object() && j.size() == 1 && j.contains("config");
  } catch (const json::exception&) {
    return false;
  }
}

}  // namespace

std::vector<RecordLine> load_records(const std::string& path) {
  bool last_complete = true;
  const auto lines = read_lines(path, last_complete);
  std::vector<RecordLine> out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    if (i == 0 && is_config_line(lines[i])) continue;
    const bool torn = i + 1 == lines.size() && !last_complete;
    try {
      out.push_back(parse_record(lines[i]));
    } catch (const InputError&) {
      if (torn) break;
      throw InputError(path + ":" + std::to_string(i + 1) + ": malformed record");
    }
  }
  return out;
}

std::optional<json> load_config(const std::string& path) {
  bool last_complete = true;
  const auto lines = read_lines(path, last_complete);
  if (lines.empty() || !is_config_line(lines[0])) return std::nullopt;
  return json::parse(lines[0]).at("config");
}

RecordCache::RecordCache(const std::vector<RecordLine>& lines) {
  for (const auto& line : lines) add(line);
}

void RecordCache::add(const RecordLine& line) {
  // Cells that ended in a transport error are not complete.
  if (!line.template_id || !line.cycle_text || !line.reps || line.finish == "error") return;
  cells_[Key{line.model_id, *line.template_id, *line.cycle_text, line.tau, *line.reps}] = line;
}

std::optional<RecordLine> RecordCache::find(const std::string& model_id, TemplateId template_id,
                                            const std::string& cycle_text, double tau,
                                            std::size_t reps) const {
  const auto it = cells_.find(Key{model_id, std::string(to_string(template_id)), cycle_text, tau, reps});
  if (it == cells_.end()) return std::nullopt;
  return it->second;
}

}  // namespace nonhalt
