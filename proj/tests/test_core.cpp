#include <gtest/gtest.h>

#include <random>

#include "nonhalt/core.hpp"
#include "oracles.hpp"

using namespace nonhalt;

namespace {
constexpr SymbolId A = 0, B = 1, C = 2;
}

TEST(Symbol, EqualityUsesTextWhenBothHaveIt) {
  EXPECT_EQ(Symbol(1, "x"), Symbol(2, "x"));
  EXPECT_NE(Symbol(1, "x"), Symbol(1, "y"));
  EXPECT_EQ(Symbol(3), Symbol(3, "z"));
  EXPECT_NE(Symbol(3), Symbol(4));
}

TEST(Interner, AssignsDenseIdsInFirstSeenOrder) {
  Interner in;
  EXPECT_EQ(in.intern("MG"), 0u);
  EXPECT_EQ(in.intern("USA"), 1u);
  EXPECT_EQ(in.intern("MG"), 0u);
  EXPECT_EQ(in.text(1), "USA");
  EXPECT_EQ(in.size(), 2u);
  EXPECT_FALSE(in.find("@").has_value());
}

TEST(Vocab, RejectsBadShapes) {
  EXPECT_THROW(Vocab(1, 0), InputError);
  EXPECT_THROW(Vocab(3, 3), InputError);
  EXPECT_THROW(Vocab({Symbol(0), Symbol(0)}, 0), InputError);
  const Vocab v(4, 2);
  EXPECT_EQ(v.size(), 4u);
  EXPECT_EQ(v.eos(), 2u);
  EXPECT_EQ(v.index_of(3), 3u);
}

TEST(Logits, RejectsNonFinite) {
  EXPECT_THROW(Logits({1.0, std::nan("")}), InputError);
  EXPECT_THROW(Logits({1.0, INFINITY}), InputError);
  EXPECT_NO_THROW(Logits({1.0, -3.0}));
}

TEST(Distribution, SumTolerance) {
  EXPECT_NO_THROW(Distribution({0.5, 0.5 + 0.5e-9}));
  EXPECT_THROW(Distribution({0.5, 0.5 + 2e-9}), InputError);
  EXPECT_THROW(Distribution({1.2, -0.2}), InputError);
  const Distribution d({0.0, 0.7, 0.3});
  EXPECT_EQ(d.support(), (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(d.argmax(), 1u);
}

TEST(PrimitivePeriod, Examples) {
  EXPECT_EQ(primitive_period(SymbolStream{A, B, A, B}), 2u);
  EXPECT_EQ(primitive_period(SymbolStream{A, A, A}), 1u);
  EXPECT_EQ(primitive_period(SymbolStream{A, B, C, A, B}), 3u);
  EXPECT_EQ(oracle::primitive_period({A, B, C, A, B}), 3u);
  EXPECT_THROW(primitive_period(SymbolStream{}), PreconditionError);
}

TEST(PrimitivePeriod, MatchesBruteForce) {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 3000; ++trial) {
    const std::size_t len = 1 + gen() % 512;
    const std::size_t alpha = 1 + gen() % 3;
    // Build a partially periodic sequence so small periods actually occur.
    const std::size_t base = 1 + gen() % 8;
    SymbolStream s(len);
    for (std::size_t i = 0; i < len; ++i) s[i] = i < base ? gen() % alpha : s[i - base];
    if (gen() % 4 == 0) s[gen() % len] = static_cast<SymbolId>(gen() % alpha);
    const std::size_t p = primitive_period(s);
    ASSERT_EQ(p, oracle::primitive_period(s));
    ASSERT_TRUE(oracle::is_periodic(s, p));
    for (std::size_t q = 1; q < p; ++q) ASSERT_FALSE(oracle::is_periodic(s, q));
  }
}

TEST(CanonicalRotation, Examples) {
  EXPECT_EQ(canonical_rotation(SymbolStream{B, A}), (SymbolStream{A, B}));
  EXPECT_EQ(canonical_rotation(SymbolStream{A}), (SymbolStream{A}));
  EXPECT_EQ(canonical_rotation(SymbolStream{C, A, B}), (SymbolStream{A, B, C}));
  EXPECT_EQ(oracle::least_rotation({C, A, B}), (oracle::Stream{A, B, C}));
  EXPECT_THROW(canonical_rotation(SymbolStream{A, B, A, B}), InputError);
}

TEST(CanonicalRotation, RotationInvariantAndIdempotent) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t c = 1 + gen() % 12;
    SymbolStream cycle(c);
    for (auto& s : cycle) s = static_cast<SymbolId>(gen() % 3);
    if (!is_primitive(cycle)) continue;
    const SymbolStream canon = canonical_rotation(cycle);
    ASSERT_EQ(canon, oracle::least_rotation(cycle));
    ASSERT_EQ(canonical_rotation(canon), canon);
    for (std::size_t k = 0; k < c; ++k) ASSERT_EQ(canonical_rotation(rotate(cycle, k)), canon);
  }
}

TEST(MakeAnomaly, ReducesToPrimitiveRoot) {
  const SymbolStream s{C, A, B, A, B, A, B, A};
  const CycleAnomaly a = make_anomaly(s, 1, 4, 8);
  EXPECT_EQ(a.b, 1u);
  EXPECT_EQ(a.c, 2u);
  EXPECT_EQ(a.cycle, (SymbolStream{A, B}));
  EXPECT_EQ(a.beginning, (SymbolStream{C}));
  EXPECT_EQ(a.r_obs, 3u);
  EXPECT_EQ(a.remainder(), 1u);
  EXPECT_THROW(make_anomaly(s, 0, 2, 8), InputError);
  EXPECT_THROW(make_anomaly(s, 1, 2, 3), InputError);
}

TEST(HoldsCyclicCondition, AgreesWithDefinitionalForm) {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t len = 2 + gen() % 30;
    SymbolStream s(len);
    for (auto& v : s) v = static_cast<SymbolId>(gen() % 2);
    const std::size_t c = 1 + gen() % 5;
    const std::size_t b = gen() % len;
    const std::size_t ell = 1 + gen() % len;
    ASSERT_EQ(holds_cyclic_condition(s, b, c, ell), oracle::cyclic(s, b, c, ell));
  }
}
