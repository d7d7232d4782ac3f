#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "client_helpers.hpp"
#include "nonhalt/harness/experiments.hpp"

using namespace nonhalt;
using testutil::greedy;

namespace {

std::vector<std::size_t> one_to(std::size_t n) {
  std::vector<std::size_t> s;
  for (std::size_t i = 1; i <= n; ++i) s.push_back(i);
  return s;
}

std::vector<std::string> words() { return load_wordlist(std::string(NONHALT_FIXTURES) + "/wordlist.txt"); }

}  // namespace

TEST(Sweep, ThresholdTwoOnlyAtZero) {
  SimClient client = testutil::fixture_client("sweep_threshold2");
  const auto rows = run_temperature_sweep(client, "Adam", TemplateId::kManyWords, default_temperatures(),
                                          greedy(4), one_to(10), 64);
  ASSERT_EQ(rows.size(), 11u);
  EXPECT_EQ(rows[0].tau, 0.0);
  ASSERT_TRUE(rows[0].min_reps);
  EXPECT_EQ(*rows[0].min_reps, 2u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_NEAR(rows[i].tau, 0.1 * static_cast<double>(i), 1e-12);
    EXPECT_FALSE(rows[i].min_reps) << "tau " << rows[i].tau;
  }
  const std::string table = format_sweep_table(rows);
  EXPECT_EQ(table.substr(0, table.find('\n', table.find('\n') + 1) + 1), "tau\tmin_reps\n0\t2\n");
  EXPECT_NE(table.find("0.1\tFAIL\n"), std::string::npos);
}

TEST(Sweep, EmptyTemperaturesRejected) {
  SimClient client = testutil::fixture_client("sweep_threshold2");
  EXPECT_THROW(run_temperature_sweep(client, "Adam", TemplateId::kManyWords, {}, greedy(4), one_to(3), 8),
               InputError);
}

TEST(Wordlist, ThirtyPercentMeanFour) {
  SimClient client = testutil::fixture_client("wordlist_thresholds");
  const auto w = words();
  ASSERT_EQ(w.size(), 10u);
  const auto s = run_wordlist_experiment(client, w, TemplateId::kManyWords, greedy(13), one_to(10), 64);
  ASSERT_EQ(s.rows.size(), 10u);
  EXPECT_DOUBLE_EQ(s.success_percent, 30.0);
  ASSERT_TRUE(s.mean_reps);
  EXPECT_DOUBLE_EQ(*s.mean_reps, 4.0);
  EXPECT_EQ(s.rows[0].word, "Zorblax");
  EXPECT_EQ(s.rows[0].min_reps, 2u);
  EXPECT_EQ(s.rows[2].min_reps, 4u);
  EXPECT_EQ(s.rows[5].min_reps, 6u);
  EXPECT_EQ(s.rows[1].min_reps, 0u);
  const std::string table = format_wordlist_table(s);
  EXPECT_NE(table.find("Zorblax\t2\n"), std::string::npos);
  EXPECT_NE(table.find("Plinth\t0\n"), std::string::npos);
  EXPECT_NE(table.find("# success_percent\t30"), std::string::npos);
  EXPECT_NE(table.find("# mean_reps\t4"), std::string::npos);
}

TEST(Wordlist, ParallelismDoesNotChangeResults) {
  SimClient client = testutil::fixture_client("wordlist_thresholds");
  ExperimentOptions serial, parallel;
  serial.parallelism = 1;
  parallel.parallelism = 8;
  const auto a = run_wordlist_experiment(client, words(), TemplateId::kManyWords, greedy(13), one_to(8), 32, serial);
  const auto b = run_wordlist_experiment(client, words(), TemplateId::kManyWords, greedy(13), one_to(8), 32, parallel);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].word, b.rows[i].word);
    EXPECT_EQ(a.rows[i].min_reps, b.rows[i].min_reps);
  }
}

TEST(Wordlist, NoSuccesses) {
  SimClient client = testutil::fixture_client("wordlist_thresholds");
  const auto s = run_wordlist_experiment(client, {"Plinth", "Gorse"}, TemplateId::kManyWords, greedy(13), one_to(5), 32);
  EXPECT_DOUBLE_EQ(s.success_percent, 0.0);
  EXPECT_FALSE(s.mean_reps);
  EXPECT_NE(format_wordlist_table(s).find("# mean_reps\tNA"), std::string::npos);
}

TEST(Wordlist, EmptyListRejected) {
  SimClient client = testutil::fixture_client("wordlist_thresholds");
  EXPECT_THROW(run_wordlist_experiment(client, {}, TemplateId::kManyWords, greedy(13), one_to(3), 8), InputError);
}

TEST(Wordlist, TransportFailuresRecordedAndContinued) {
  testutil::BrokenClient client;
  ExperimentOptions o;
  o.escalation.max_retries = 0;
  const auto s = run_wordlist_experiment(client, {"a", "b"}, TemplateId::kManyWords, greedy(4), one_to(3), 8, o);
  ASSERT_EQ(s.rows.size(), 2u);
  EXPECT_EQ(s.rows[0].transport_failures, 3u);
  EXPECT_EQ(s.rows[1].transport_failures, 3u);
  EXPECT_EQ(client.calls, 6u);
}

TEST(Wordlist, ResumeSkipsCompletedCells) {
  const auto p = std::filesystem::temp_directory_path() / "nonhalt_wordlist_resume.jsonl";
  std::filesystem::remove(p);
  SimClient sim = testutil::fixture_client("wordlist_thresholds");
  {
    RecordSink sink(p.string(), {{"command", "wordlist"}});
    ExperimentOptions o;
    o.escalation.sink = &sink;
    run_wordlist_experiment(sim, words(), TemplateId::kManyWords, greedy(13), one_to(8), 32, o);
  }
  const RecordCache cache(load_records(p.string()));
  testutil::CountingClient counting(sim);
  ExperimentOptions o;
  o.escalation.cache = &cache;
  const auto s = run_wordlist_experiment(counting, words(), TemplateId::kManyWords, greedy(13), one_to(8), 32, o);
  EXPECT_EQ(counting.calls, 0u);
  EXPECT_DOUBLE_EQ(s.success_percent, 30.0);
  std::filesystem::remove(p);
}

TEST(Wordlist, LoadTrimsAndDropsBlanks) {
  const auto p = std::filesystem::temp_directory_path() / "nonhalt_words.txt";
  { std::ofstream(p) << "  Apple \n\n\tPear\r\n   \n"; }
  EXPECT_EQ(load_wordlist(p.string()), (std::vector<std::string>{"Apple", "Pear"}));
  std::filesystem::remove(p);
}
