#include <gtest/gtest.h>

#include <random>

#include "nonhalt/cycle.hpp"
#include "oracles.hpp"

using namespace nonhalt;

namespace {

constexpr SymbolId A = 0, B = 1, C = 2, D = 3, E = 4, X = 9;

SymbolStream random_stream(std::mt19937_64& gen, std::size_t max_len, std::size_t alpha) {
  const std::size_t len = 2 + gen() % (max_len - 1);
  SymbolStream s(len);
  // Random prefix, then a periodic tail with occasional noise so that
  // anomalies of varied shape show up.
  const std::size_t head = gen() % len;
  const std::size_t period = 1 + gen() % 6;
  for (std::size_t i = 0; i < len; ++i) {
    s[i] = i < head + period ? static_cast<SymbolId>(gen() % alpha) : s[i - period];
  }
  if (gen() % 5 == 0) s[gen() % len] = static_cast<SymbolId>(gen() % alpha);
  return s;
}

void expect_matches_oracle(const SymbolStream& s, std::size_t c_max, std::size_t r_min) {
  const auto got = detect_cycle(s, c_max, r_min);
  const auto want = oracle::detect(s, c_max, r_min);
  ASSERT_EQ(got.has_value(), want.has_value());
  if (!got) return;
  ASSERT_EQ(got->c, want->c);
  ASSERT_EQ(got->b, want->b);
  ASSERT_EQ(got->ell, want->ell);
  ASSERT_EQ(got->r_obs, want->r_obs);
  ASSERT_EQ(got->cycle, want->cycle);
}

}  // namespace

TEST(DetectCycle, Examples) {
  const auto a = detect_cycle(SymbolStream{A, A, A, A}, 4, 2);
  ASSERT_TRUE(a);
  EXPECT_EQ(a->b, 0u);
  EXPECT_EQ(a->c, 1u);
  EXPECT_EQ(a->r_obs, 4u);
  EXPECT_EQ(a->ell, 4u);
  EXPECT_FALSE(detect_cycle(SymbolStream{A, B, C, D}, 4, 1));

  const auto b = detect_cycle(SymbolStream{X, A, B, A, B, A}, 4, 2);
  ASSERT_TRUE(b);
  EXPECT_EQ(b->b, 1u);
  EXPECT_EQ(b->c, 2u);
  EXPECT_EQ(b->cycle, (SymbolStream{A, B}));
  EXPECT_EQ(b->r_obs, 2u);
  EXPECT_EQ(b->ell, 6u);
  EXPECT_EQ(b->beginning, (SymbolStream{X}));
}

TEST(DetectCycle, WordStreamOfRepeatedUnits) {
  Interner in;
  SymbolStream s;
  for (int i = 0; i < 40; ++i) {
    s.push_back(in.intern("MG"));
    s.push_back(in.intern("USA"));
    s.push_back(in.intern("@"));
  }
  const auto a = detect_cycle(s, kDefaultOfflineCMax, kDefaultMinRepeats);
  ASSERT_TRUE(a);
  EXPECT_EQ(a->b, 0u);
  EXPECT_EQ(a->c, 3u);
  EXPECT_EQ(a->r_obs, 40u);
}

TEST(DetectCycle, MatchesExhaustiveOracle) {
  std::mt19937_64 gen(21);
  for (int t = 0; t < 3000; ++t) {
    const SymbolStream s = random_stream(gen, 64, 3);
    const std::size_t c_max = 1 + gen() % 12;
    const std::size_t r_min = 1 + gen() % 3;
    expect_matches_oracle(s, c_max, r_min);
  }
}

TEST(DetectCycle, ReportedCycleIsPrimitiveAndInPhase) {
  std::mt19937_64 gen(22);
  for (int t = 0; t < 2000; ++t) {
    const SymbolStream s = random_stream(gen, 128, 2);
    const auto a = detect_cycle(s, 16, 1);
    if (!a) continue;
    ASSERT_TRUE(is_primitive(a->cycle));
    ASSERT_EQ(a->cycle.front(), s[a->b]);
    ASSERT_GT(a->ell, a->b + a->c);
    ASSERT_EQ(a->r_obs, (a->ell - a->b) / a->c);
    ASSERT_TRUE(oracle::cyclic(s, a->b, a->c, a->ell));
  }
}

TEST(StreamingDetector, Examples) {
  StreamingDetector d(4, 2);
  EXPECT_FALSE(d.feed(A));
  const auto a = d.feed(A);
  ASSERT_TRUE(a);
  EXPECT_EQ(a->b, 0u);
  EXPECT_EQ(a->c, 1u);
  EXPECT_EQ(a->ell, 2u);

  StreamingDetector e(4, 2);
  e.feed(A);
  e.feed(B);
  EXPECT_FALSE(e.feed(A));
}

TEST(StreamingDetector, EqualsBatchAtEveryPrefix) {
  std::mt19937_64 gen(23);
  for (int t = 0; t < 300; ++t) {
    const SymbolStream s = random_stream(gen, 300, 1 + gen() % 4);
    const std::size_t c_max = 1 + gen() % 16;
    const std::size_t r_min = 1 + gen() % 3;
    StreamingDetector d(c_max, r_min);
    for (std::size_t ell = 1; ell <= s.size(); ++ell) {
      const auto got = d.feed(s[ell - 1]);
      const auto want = ell >= 2 ? detect_cycle(std::span(s).first(ell), c_max, r_min) : std::nullopt;
      ASSERT_EQ(got, want) << "prefix " << ell;
      ASSERT_EQ(d.current(), got);
    }
  }
}

TEST(StreamingDetector, CertifiableAtExactThreshold) {
  // b = 2, c = 3, w = 4: certifiable first at ell = 9.
  const SymbolStream s{X, D, A, B, C, A, B, C, A, B, C};
  StreamingDetector d(8, 1);
  for (std::size_t ell = 1; ell <= s.size(); ++ell) {
    d.feed(s[ell - 1]);
    const auto a = d.certifiable(4);
    if (ell < 9) {
      EXPECT_FALSE(a) << ell;
    } else {
      ASSERT_TRUE(a) << ell;
      EXPECT_EQ(a->b, 2u);
      EXPECT_EQ(a->c, 3u);
      EXPECT_EQ(a->ell, ell);
    }
  }
}

TEST(Certify, Examples) {
  const CycleAnomaly a = make_anomaly(SymbolStream{A, A, A, A, A}, 0, 1, 5);
  const auto r = certify_non_halting(a, 4, true);
  ASSERT_TRUE(r);
  EXPECT_EQ(r.certificate->ell_star, 5u);
  EXPECT_EQ(r.certificate->w, 4u);
  EXPECT_TRUE(r.certificate->deterministic);

  SymbolStream ab;
  for (int i = 0; i < 50; ++i) {
    ab.push_back(A);
    ab.push_back(B);
  }
  const auto far = certify_non_halting(make_anomaly(ab, 0, 2, 100), 128000, true);
  EXPECT_FALSE(far);
  EXPECT_EQ(far.refusal, RefusalReason::kBelowThreshold);
  EXPECT_EQ(to_string(*far.refusal), "BELOW_THRESHOLD");

  const auto nondet = certify_non_halting(a, 4, false);
  EXPECT_EQ(nondet.refusal, RefusalReason::kNotDeterministic);
  EXPECT_EQ(to_string(*nondet.refusal), "NOT_DETERMINISTIC");
}

TEST(Certify, ThresholdBoundary) {
  std::mt19937_64 gen(24);
  for (int t = 0; t < 500; ++t) {
    const std::size_t b = gen() % 6, c = 1 + gen() % 5, w = 1 + gen() % 10;
    SymbolStream s;
    for (std::size_t i = 0; i < b; ++i) s.push_back(100 + static_cast<SymbolId>(i));
    SymbolStream cycle(c);
    for (std::size_t i = 0; i < c; ++i) cycle[i] = static_cast<SymbolId>(i);
    while (s.size() < b + c + w) s.push_back(cycle[(s.size() - b) % c]);
    const auto at = make_anomaly(s, b, c, b + c + w);
    ASSERT_TRUE(certify_non_halting(at, w, true));
    ASSERT_EQ(certify_non_halting(at, w, true).certificate->ell_star, b + c + w);
    if (b + c + w - 1 > b + c) {
      const auto below = make_anomaly(s, b, c, b + c + w - 1);
      ASSERT_EQ(certify_non_halting(below, w, true).refusal, RefusalReason::kBelowThreshold);
    }
  }
}

TEST(PrefixPersistence, Examples) {
  EXPECT_TRUE(check_prefix_persistence(SymbolStream{A, A, A, A, A},
                                       make_anomaly(SymbolStream{A, A, A, A, A}, 0, 1, 5)));
  const SymbolStream s{X, A, B, A, B, A};
  const auto a = make_anomaly(s, 1, 2, 6);
  EXPECT_TRUE(check_prefix_persistence(s, a));
  for (std::size_t l = 4; l <= 6; ++l) EXPECT_TRUE(oracle::cyclic(s, 1, 2, l));
}

TEST(RotationWindow, Examples) {
  EXPECT_EQ(rotation_window(SymbolStream{A}, 3, 0), (SymbolStream{A, A, A}));
  EXPECT_EQ(rotation_window(SymbolStream{A, B, C}, 4, 1), (SymbolStream{B, C, A, B}));
  EXPECT_EQ(rotation_window(SymbolStream{A, B, C, D, E}, 3, 3), (SymbolStream{D, E, A}));
  EXPECT_THROW(rotation_window(SymbolStream{A, B}, 3, 2), InputError);
}

TEST(RotationWindow, FormulaEqualsPeriodicSlicing) {
  for (std::size_t c = 1; c <= 8; ++c) {
    SymbolStream cycle(c);
    for (std::size_t k = 0; k < c; ++k) cycle[k] = static_cast<SymbolId>(k);
    for (std::size_t w = 1; w <= 32; ++w) {
      for (std::size_t i = 0; i < c; ++i) {
        ASSERT_EQ(rotation_window(cycle, w, i), oracle::periodic_slice(cycle, w, i))
            << "c=" << c << " w=" << w << " i=" << i;
      }
    }
  }
}
