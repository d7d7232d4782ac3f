#pragma once

// JSON Lines persistence of probe records.
//
// The first line of a file is a config object {"config": {...}}; every
// further line is one record with exactly the fields of RecordLine.

#include <cstdint>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"
#include "nonhalt/harness/probe.hpp"

namespace nonhalt {

struct AnomalyLine {
  std::size_t b = 0;
  std::size_t c = 0;
  std::size_t r_obs = 0;
  std::size_t ell = 0;
  std::vector<std::string> cycle;

  friend bool operator==(const AnomalyLine&, const AnomalyLine&) = default;
};

struct RecordLine {
  std::string ts;
  std::string model_id;
  std::string prompt;
  std::optional<std::string> template_id;
  std::optional<std::string> cycle_text;
  std::optional<std::size_t> reps;
  double tau = 0.0;
  std::size_t top_k = 1;
  double top_p = 1.0;
  std::uint64_t seed = 0;
  std::size_t output_budget = 0;
  std::string finish;
  std::optional<AnomalyLine> anomaly;
  std::optional<std::size_t> ell_star;
  std::string classification;
  std::int64_t duration_ms = 0;
  std::optional<std::vector<double>> logprobs;

  friend bool operator==(const RecordLine&, const RecordLine&) = default;
};

std::string format_rfc3339(std::chrono::system_clock::time_point t);

RecordLine to_record_line(const ProbeRecord& record);
nlohmann::json to_json(const RecordLine& line);
/// Throws InputError on a missing or mistyped field.
RecordLine record_from_json(const nlohmann::json& j);
std::string serialize(const RecordLine& line);
RecordLine parse_record(const std::string& line);

/// Append-only JSON Lines sink. Each append writes one complete line and
/// flushes; concurrent appends are serialized.
class RecordSink {
 public:
  /// Opens `path` for append, writing `config` as the first line when the
  /// file is new or empty.
  RecordSink(const std::string& path, const nlohmann::json& config);

  void append(const RecordLine& line);
  void append(const ProbeRecord& record) { append(to_record_line(record)); }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ofstream out_;
  std::mutex mu_;
};

/// Reads the records of a file (skipping the config line and a torn final
/// line). A missing file yields no records.
std::vector<RecordLine> load_records(const std::string& path);
std::optional<nlohmann::json> load_config(const std::string& path);

/// Completed cells of earlier runs, keyed by model, prompt template, cycle
/// text, temperature and repetitions.
class RecordCache {
 public:
  using Key = std::tuple<std::string, std::string, std::string, double, std::size_t>;

  RecordCache() = default;
  explicit RecordCache(const std::vector<RecordLine>& lines);

  void add(const RecordLine& line);
  std::optional<RecordLine> find(const std::string& model_id, TemplateId template_id,
                                 const std::string& cycle_text, double tau, std::size_t reps) const;
  std::size_t size() const { return cells_.size(); }

 private:
  std::map<Key, RecordLine> cells_;
};

}  // namespace nonhalt
