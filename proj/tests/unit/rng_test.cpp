#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "ncvr/errors.hpp"
#include "ncvr/rng.hpp"

using ncvr::RngStream;

TEST(Rng, SplitMixFirstOutputForZeroSeed) {
  std::uint64_t state = 0;
  EXPECT_EQ(ncvr::splitmix64(state), 0xE220A8397B1DCDAFULL);
}

// Values from a separate Python implementation of the same generator.
TEST(Rng, FrozenRawOutputs) {
  RngStream rng(42);
  EXPECT_EQ(rng.next_u64(), 0x15780b2e0c2ec716ULL);
  EXPECT_EQ(rng.next_u64(), 0x6104d9866d113a7eULL);
  EXPECT_EQ(rng.next_u64(), 0xae17533239e499a1ULL);
}

TEST(Rng, FrozenBoundedDraws) {
  RngStream rng(42);
  const std::vector<std::uint64_t> expected{0, 3, 6, 9, 9, 7, 7, 8, 7, 5};
  for (auto e : expected) EXPECT_EQ(rng.uniform_index(10), e);

  RngStream big(2024);
  const std::vector<std::uint64_t> expected_big{55793, 782106, 72055, 159716, 773652};
  for (auto e : expected_big) EXPECT_EQ(big.uniform_index(1000003), e);
}

TEST(Rng, SameSeedSameStream) {
  RngStream a(5), b(5);
  for (int k = 0; k < 1000; ++k) {
    EXPECT_EQ(a.uniform_index(17), b.uniform_index(17));
    EXPECT_EQ(a.normal(), b.normal());
  }
}

TEST(Rng, DifferentSeedsDiffer) {
  RngStream a(1), b(2);
  int same = 0;
  for (int k = 0; k < 100; ++k) same += a.next_u64() == b.next_u64();
  EXPECT_EQ(same, 0);
}

TEST(Rng, DeriveDoesNotAdvanceParent) {
  RngStream a(9), b(9);
  RngStream child = a.derive(3);
  EXPECT_EQ(a.next_u64(), b.next_u64());
  EXPECT_NE(child.next_u64(), RngStream(9).derive(4).next_u64());
  EXPECT_EQ(RngStream(9).derive(3).next_u64(), RngStream(9).derive(3).next_u64());
}

TEST(Rng, IndexDrawsAreUniform) {
  RngStream rng(11);
  const std::size_t n = 7;
  const int draws = 70000;
  std::vector<int> counts(n, 0);
  for (int k = 0; k < draws; ++k) {
    const auto i = rng.uniform_index(n);
    ASSERT_LT(i, n);
    ++counts[i];
  }
  double chi2 = 0.0;
  const double expected = static_cast<double>(draws) / n;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  // 6 degrees of freedom; 99.9% quantile is 22.46.
  EXPECT_LT(chi2, 22.46);
}

TEST(Rng, BoundOneAlwaysZeroAndZeroBoundRejected) {
  RngStream rng(3);
  for (int k = 0; k < 10; ++k) EXPECT_EQ(rng.uniform_index(1), 0u);
  EXPECT_THROW(rng.uniform_index(0), ncvr::ContractViolation);
}

TEST(Rng, UniformAndNormalMoments) {
  RngStream rng(123);
  const int draws = 200000;
  double su = 0.0, sn = 0.0, sn2 = 0.0;
  for (int k = 0; k < draws; ++k) {
    const double u = rng.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    su += u;
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
  }
  EXPECT_NEAR(su / draws, 0.5, 0.005);
  EXPECT_NEAR(sn / draws, 0.0, 0.01);
  EXPECT_NEAR(sn2 / draws, 1.0, 0.01);
}

TEST(Rng, AlgorithmIdentifierIsStable) {
  EXPECT_EQ(std::string(RngStream::kAlgorithm),
            "xoshiro256**/splitmix64-seed/lemire-bounded/polar-normal");
}
