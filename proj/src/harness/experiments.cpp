#include "nonhalt/harness/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

namespace nonhalt {

namespace {

// Runs task(0..n-1) on at most `parallelism` threads; the first exception is
// rethrown after all workers finish.
void run_bounded(std::size_t n, std::size_t parallelism, const std::function<void(std::size_t)>& task) {
  const std::size_t workers = std::max<std::size_t>(1, std::min(parallelism, n));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::size_t count_transport_failures(const EscalationResult& r) {
  return static_cast<std::size_t>(std::count_if(r.attempts.begin(), r.attempts.end(),
                                                [](const EscalationAttempt& a) { return a.failed_transport; }));
}

}  // namespace

std::vector<double> default_temperatures() {
  std::vector<double> t;
  for (int i = 0; i <= 10; ++i) t.push_back(i / 10.0);
  return t;
}

std::vector<SweepRow> run_temperature_sweep(ModelClient& client, const std::string& cycle_text,
                                            TemplateId template_id, const std::vector<double>& temps,
                                            const SamplerConfig& base,
                                            const std::vector<std::size_t>& schedule,
                                            std::size_t output_budget,
                                            const ExperimentOptions& options) {
  if (temps.empty()) throw InputError("temperature list must be non-empty");
  std::vector<SweepRow> rows(temps.size());
  run_bounded(temps.size(), options.parallelism, [&](std::size_t i) {
    SamplerConfig config = base;
    config.tau = temps[i];
    const EscalationResult r = find_min_repetitions(client, cycle_text, template_id, config, schedule,
                                                    output_budget, options.escalation);
    rows[i] = SweepRow{temps[i], r.min_reps, count_transport_failures(r)};
  });
  return rows;
}

WordlistSummary run_wordlist_experiment(ModelClient& client, const std::vector<std::string>& words,
                                        TemplateId template_id, const SamplerConfig& config,
                                        const std::vector<std::size_t>& schedule,
                                        std::size_t output_budget,
                                        const ExperimentOptions& options) {
  if (words.empty()) throw InputError("word list must be non-empty");
  WordlistSummary summary;
  summary.rows.resize(words.size());
  run_bounded(words.size(), options.parallelism, [&](std::size_t i) {
    const EscalationResult r = find_min_repetitions(client, words[i], template_id, config, schedule,
                                                    output_budget, options.escalation);
    summary.rows[i] = WordRow{words[i], r.min_reps.value_or(0), count_transport_failures(r)};
  });

  std::size_t successes = 0;
  double total = 0.0;
  for (const auto& row : summary.rows) {
    if (row.min_reps == 0) continue;
    ++successes;
    total += static_cast<double>(row.min_reps);
  }
  summary.success_percent = 100.0 * static_cast<double>(successes) / static_cast<double>(words.size());
  if (successes > 0) summary.mean_reps = total / static_cast<double>(successes);
  return summary;
}

std::string format_sweep_table(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "tau\tmin_reps\n";
  for (const auto& row : rows) {
    out << row.tau << '\t';
    if (row.min_reps) out << *row.min_reps;
    else out << "FAIL";
    out << '\n';
  }
  return out.str();
}

std::string format_wordlist_table(const WordlistSummary& summary) {
  std::ostringstream out;
  out << "word\tmin_reps\n";
  for (const auto& row : summary.rows) out << row.word << '\t' << row.min_reps << '\n';
  out << "# success_percent\t" << summary.success_percent << '\n';
  out << "# mean_reps\t";
  if (summary.mean_reps) out << *summary.mean_reps;
  else out << "NA";
  out << '\n';
  return out.str();
}

std::vector<std::string> load_wordlist(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read word list " + path);
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r\n");
    words.push_back(line.substr(first, last - first + 1));
  }
  return words;
}

}  // namespace nonhalt
