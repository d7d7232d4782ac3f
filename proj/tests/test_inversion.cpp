#include <gtest/gtest.h>

#include <algorithm>

#include "nonhalt/fixture.hpp"
#include "nonhalt/inversion.hpp"
#include "oracles.hpp"

using namespace nonhalt;

namespace {

SamplerConfig greedy(std::size_t n) {
  SamplerConfig c;
  c.tau = 0;
  c.top_k = n;
  c.top_p = 1;
  return c;
}

SimModel fixture() {
  return load_model(std::string(NONHALT_SHIPPED_FIXTURES) + "/hash_echo_n16_w8.model");
}

// Naive reference: run the model to the horizon and scan each prefix length
// for the first ell = b + c + w at which the output is cyclic.
bool naive_hit(const SimModel& m, const SymbolStream& prompt, SymbolId target, std::size_t horizon,
               std::size_t c_max) {
  const SimRun run = simulate(m, prompt, greedy(m.vocab_size()), horizon);
  const std::size_t w = m.w();
  const std::size_t limit = run.halted ? run.output.size() - 1 : run.output.size();
  for (std::size_t ell = 1; ell <= limit; ++ell) {
    for (std::size_t c = 1; c <= c_max && c + w <= ell; ++c) {
      const std::size_t b = ell - c - w;
      if (!oracle::cyclic(run.output, b, c, ell)) continue;
      const auto first = run.output.begin() + static_cast<std::ptrdiff_t>(b);
      return std::find(first, first + static_cast<std::ptrdiff_t>(c), target) != first + static_cast<std::ptrdiff_t>(c);
    }
  }
  return false;
}

}  // namespace

TEST(Inversion, ExhaustiveGoldenCounts) {
  const SimModel m = fixture();
  const std::vector<std::size_t> golden{0, 132, 127, 136, 126, 146, 133, 118, 127, 139, 132, 140, 121, 134, 134, 152};
  for (SymbolId t = 0; t < 16; ++t) {
    const auto r = invert_search(m, t, 3, SearchStrategy::kExhaustive, 4096, greedy(16));
    ASSERT_FALSE(r.refusal);
    EXPECT_EQ(r.stats.evaluations, 4096u);
    EXPECT_EQ(r.stats.hits, golden[t]) << "target " << t;
    EXPECT_DOUBLE_EQ(r.stats.hit_rate, golden[t] / 4096.0);
  }
}

TEST(Inversion, ExhaustiveMatchesNaiveReference) {
  const SimModel m = fixture();
  const SymbolId target = 5;
  const auto r = invert_search(m, target, 3, SearchStrategy::kExhaustive, 4096, greedy(16));
  std::vector<SymbolStream> expected;
  for (SymbolId a = 0; a < 16; ++a)
    for (SymbolId b = 0; b < 16; ++b)
      for (SymbolId c = 0; c < 16; ++c) {
        const SymbolStream p{a, b, c};
        if (naive_hit(m, p, target, 256, 64)) expected.push_back(p);
      }
  EXPECT_EQ(r.prompts, expected);
}

TEST(Inversion, EveryReturnedPromptReplays) {
  const SimModel m = fixture();
  for (auto s : {SearchStrategy::kRandom, SearchStrategy::kHillClimb}) {
    SamplerConfig c = greedy(16);
    c.seed = 99;
    const auto r = invert_search(m, 3, 3, s, 500, c);
    EXPECT_LE(r.stats.evaluations, 500u);
    EXPECT_GT(r.stats.hits, 0u) << to_string(s);
    for (const auto& p : r.prompts) ASSERT_TRUE(naive_hit(m, p, 3, 256, 64));
    const auto again = invert_search(m, 3, 3, s, 500, c);
    EXPECT_EQ(again.prompts, r.prompts);
  }
}

TEST(Inversion, RefusesOversizedExhaustiveSearch) {
  const auto r = invert_search(fixture(), 3, 4, SearchStrategy::kExhaustive, 4096, greedy(16));
  ASSERT_TRUE(r.refusal);
  EXPECT_EQ(*r.refusal, SearchRefusal::kSearchSpaceTooLarge);
  EXPECT_EQ(r.stats.evaluations, 0u);
}

TEST(Inversion, RejectsStochasticSamplingAndBadTargets) {
  SamplerConfig c = greedy(16);
  c.tau = 0.7;
  EXPECT_THROW(invert_search(fixture(), 3, 2, SearchStrategy::kRandom, 10, c), PreconditionError);
  EXPECT_THROW(invert_search(fixture(), 99, 2, SearchStrategy::kRandom, 10, greedy(16)), InputError);
}

TEST(Inversion, StrategyNames) {
  EXPECT_EQ(parse_strategy("exhaustive"), SearchStrategy::kExhaustive);
  EXPECT_EQ(parse_strategy("hill-climb"), SearchStrategy::kHillClimb);
  EXPECT_FALSE(parse_strategy("magic"));
}
