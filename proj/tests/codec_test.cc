// Copyright 2026 The FastSGD Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// =============================================================================

#include "fastsgd/codec.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "fastsgd/errors.h"
#include "fastsgd/synthetic.h"
#include "test_util.h"

namespace fastsgd {
namespace {

CodecConfig Config(double base, unsigned tau, unsigned l = 2) {
  CodecConfig c;
  c.base = base;
  c.threshold = tau;
  c.flag_size = l;
  return c;
}

// ---------------------------------------------------------------------------
// Value pipeline.

TEST(ReciprocalMapTest, Examples) {
  EXPECT_DOUBLE_EQ(ReciprocalMap(1.0, 6.1), 6.1);
  EXPECT_EQ(ReciprocalMap(-3.5, 3.5), 1.0);
  EXPECT_EQ(ReciprocalMap(2.5, 10.0), 4.0);
}

TEST(LogQuantizeTest, WorkedExample) { EXPECT_EQ(LogQuantize(6.1, 2.0), 3u); }

TEST(LogQuantizeTest, OneMapsToLevelZero) {
  for (double b : {1.01, 1.1, 2.0, 10.0}) EXPECT_EQ(LogQuantize(1.0, b), 0u);
}

TEST(LogQuantizeTest, ExactPowersOfBaseMatchIntegerOracle) {
  EXPECT_EQ(LogQuantize(4.0, 2.0), testing::IntegerLevel(4, 1, 2));
  EXPECT_EQ(LogQuantize(4.0, 2.0), 2u);
  for (uint64_t base : {2u, 3u, 10u}) {
    uint64_t p = 1;
    for (unsigned k = 0; p <= (uint64_t{1} << 52); ++k, p *= base) {
      const double r = static_cast<double>(p);
      ASSERT_EQ(LogQuantize(r, static_cast<double>(base)),
                testing::IntegerLevel(p, 1, base))
          << "base " << base << " power " << k;
      // Just above a power must move to the next level.
      ASSERT_EQ(LogQuantize(r * (1 + 1e-9), static_cast<double>(base)),
                testing::IntegerLevel(p, 1, base) + 1);
    }
  }
}

TEST(LogQuantizeTest, MatchesMultiplicationOracleOnRandomInputs) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> exp10(0.0, 12.0);
  for (double b : {1.05, 1.1, 2.0}) {
    for (int i = 0; i < 20000; ++i) {
      double r = std::pow(10.0, exp10(rng));
      ASSERT_EQ(LogQuantize(r, b), testing::ReferenceLevel(r, b))
          << "r=" << r << " b=" << b;
    }
  }
}

TEST(LogQuantizeTest, RejectsOutOfDomain) {
  EXPECT_THROW(LogQuantize(0.5, 2.0), ContractViolation);
  EXPECT_THROW(LogQuantize(2.0, 1.0), ContractViolation);
}

TEST(EncodeValuesTest, WorkedExampleRetainedAtLevelThree) {
  // sum = 6.1, so the entry 1.0 has R = 6.1.
  SparseGradient g({{3, 1.0}, {7, 5.1}}, 10);
  ValueEncoding enc = EncodeValues(g, Config(2.0, 127));
  EXPECT_DOUBLE_EQ(enc.sum, 6.1);
  ASSERT_EQ(enc.retained.size(), 2u);
  EXPECT_EQ(enc.retained[0], (QuantizedEntry{3, false, 3}));
}

TEST(EncodeValuesTest, SingleEntryIsLevelZeroWithSign) {
  for (double b : {1.05, 2.0}) {
    SparseGradient g({{4, -0.75}}, 5);
    ValueEncoding enc = EncodeValues(g, Config(b, 1));
    ASSERT_EQ(enc.retained.size(), 1u);
    EXPECT_EQ(enc.retained[0], (QuantizedEntry{4, true, 0}));
  }
}

TEST(EncodeValuesTest, DiscardsAboveThreshold) {
  // sum = 8, v = 0.5 -> R = 16 -> L = 4 > 3.
  SparseGradient g({{0, 0.5}, {1, 7.5}}, 2);
  ValueEncoding enc = EncodeValues(g, Config(2.0, 3));
  EXPECT_EQ(enc.sum, 8.0);
  ASSERT_EQ(enc.retained.size(), 1u);
  EXPECT_EQ(enc.retained[0].key, 1u);
  EXPECT_EQ(enc.retained[0].level, 1u);
}

TEST(EncodeValuesTest, ExactBoundaryIsRetained) {
  // v = sum / b^tau exactly: L == tau is kept.
  SparseGradient g({{0, 1.0}, {1, 7.0}}, 2);  // sum 8, R(1) = 8 = 2^3
  ValueEncoding enc = EncodeValues(g, Config(2.0, 3));
  ASSERT_EQ(enc.retained.size(), 2u);
  EXPECT_EQ(enc.retained[0].level, 3u);
}

TEST(EncodeValuesTest, EmptyGradientThrows) {
  EXPECT_THROW(EncodeValues(SparseGradient(10), CodecConfig{}), EmptyInput);
}

TEST(DecodeValueTest, Examples) {
  EXPECT_EQ(DecodeValue(0, false, 3.25, 1.1), 3.25);
  EXPECT_EQ(DecodeValue(2, false, 10.0, 2.0), 2.5);
  EXPECT_EQ(DecodeValue(3, true, 16.0, 2.0), -2.0);
}

TEST(DecodeValueTest, LevelThreeLiesInHalfOpenInterval) {
  // For every v with R(v) in (4, 8], s/8 is in (v/2, v].
  const double s = 10.0;
  for (int i = 1; i <= 10000; ++i) {
    double r = 4.0 + 4.0 * i / 10000.0;
    double v = s / r;
    ASSERT_EQ(LogQuantize(r, 2.0), 3u);
    double d = DecodeValue(3, false, s, 2.0);
    ASSERT_GT(d, v / 2);
    ASSERT_LE(d, v * (1 + 1e-12));
  }
}

TEST(ValueByteTest, SignMagnitudeLayout) {
  EXPECT_EQ(PackValueByte(false, 3), 0x03);
  EXPECT_EQ(PackValueByte(true, 2), 0x82);
  EXPECT_EQ(PackValueByte(true, 0), 0x80);  // negative zero level
  EXPECT_THROW(PackValueByte(false, 128), ContractViolation);
  for (int b = 0; b < 256; ++b) {
    bool neg;
    unsigned level;
    UnpackValueByte(static_cast<uint8_t>(b), &neg, &level);
    EXPECT_EQ(PackValueByte(neg, level), b);
  }
}

// ---------------------------------------------------------------------------
// Key pipeline.

TEST(DeltaEncodeTest, Examples) {
  std::vector<uint64_t> fig = {200, 432, 575, 578};
  DeltaKeys d = DeltaEncode(fig);
  EXPECT_EQ(d.deltas, (std::vector<uint64_t>{200, 232, 143, 3}));
  EXPECT_EQ(d.max_delta, 232u);

  std::vector<uint64_t> zero = {0};
  d = DeltaEncode(zero);
  EXPECT_EQ(d.deltas, (std::vector<uint64_t>{0}));
  EXPECT_EQ(d.max_delta, 0u);

  std::vector<uint64_t> three = {5, 9, 500};
  d = DeltaEncode(three);
  EXPECT_EQ(d.deltas, (std::vector<uint64_t>{5, 4, 491}));
  EXPECT_EQ(d.max_delta, 491u);
}

TEST(DeltaEncodeTest, RejectsNonIncreasing) {
  std::vector<uint64_t> keys = {3, 3};
  EXPECT_THROW(DeltaEncode(keys), ContractViolation);
}

TEST(BitLengthTest, Definition) {
  EXPECT_EQ(BitLength(0), 0u);
  EXPECT_EQ(BitLength(1), 1u);
  EXPECT_EQ(BitLength(232), 8u);
  EXPECT_EQ(BitLength(256), 9u);
  EXPECT_EQ(BitLength(~uint64_t{0}), 64u);
}

TEST(LengthLevelsTest, Examples) {
  EXPECT_EQ(LengthLevels(8, 2), (std::vector<unsigned>{2, 4, 6, 8}));
  EXPECT_EQ(LengthLevels(1, 2), (std::vector<unsigned>{1, 1, 1, 1}));
  EXPECT_EQ(LengthLevels(9, 2), (std::vector<unsigned>{3, 5, 7, 9}));
  EXPECT_EQ(LengthLevels(64, 1), (std::vector<unsigned>{32, 64}));
}

TEST(EncodeKeysTest, WorkedExampleEndsWith0011) {
  std::vector<uint64_t> keys = {200, 432, 575, 578};
  KeyEncoding enc = EncodeKeys(keys, 2);
  EXPECT_EQ(enc.max_bits, 8u);
  EXPECT_EQ(enc.bit_count, 34u);
  std::string bits = testing::BytesToBitString(enc.bytes).substr(0, 34);
  EXPECT_EQ(bits.substr(30), "0011");
  EXPECT_EQ(bits, "11" "11001000" "11" "11101000" "11" "10001111" "00" "11");
}

TEST(EncodeKeysTest, SingleZeroKey) {
  std::vector<uint64_t> keys = {0};
  KeyEncoding enc = EncodeKeys(keys, 2);
  EXPECT_EQ(enc.max_bits, 1u);
  EXPECT_EQ(enc.bit_count, 3u);
  EXPECT_EQ(enc.bytes, (std::vector<uint8_t>{0x00}));
}

TEST(EncodeKeysTest, ThreeKeysHandEncoded) {
  std::vector<uint64_t> keys = {5, 9, 500};
  KeyEncoding enc = EncodeKeys(keys, 2);
  EXPECT_EQ(enc.max_bits, 9u);
  EXPECT_EQ(enc.bit_count, 21u);
  ASSERT_EQ(enc.bytes.size(), 3u);
  EXPECT_EQ(enc.bytes,
            testing::PackBitString("00101" "00100" "11111101011"));
}

TEST(EncodeKeysTest, MatchesReferenceEncoder) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    unsigned l = 1 + trial % 5;
    size_t n = 1 + rng() % 300;
    uint64_t dim = n + rng() % (uint64_t{1} << (8 + trial % 40));
    std::vector<uint64_t> keys = testing::RandomKeys(n, dim, &rng);
    unsigned ref_m = 0;
    std::string ref = testing::ReferenceEncodeKeys(keys, l, &ref_m);
    KeyEncoding enc = EncodeKeys(keys, l);
    ASSERT_EQ(enc.max_bits, ref_m);
    ASSERT_EQ(enc.bit_count, ref.size());
    ASSERT_EQ(enc.bytes, testing::PackBitString(ref));
  }
}

TEST(DecodeKeysTest, WorkedExampleRecovers578) {
  std::vector<uint64_t> keys = {200, 432, 575, 578};
  KeyEncoding enc = EncodeKeys(keys, 2);
  std::vector<uint64_t> out = DecodeKeys(enc.bytes, 4, 8, 2);
  EXPECT_EQ(out, keys);
  EXPECT_EQ(out[3] - out[2], 3u);
}

TEST(DecodeKeysTest, RoundTripExamples) {
  for (std::vector<uint64_t> keys :
       {std::vector<uint64_t>{0}, std::vector<uint64_t>{5, 9, 500}}) {
    KeyEncoding enc = EncodeKeys(keys, 2);
    EXPECT_EQ(DecodeKeys(enc.bytes, keys.size(), enc.max_bits, 2), keys);
  }
}

TEST(DecodeKeysTest, RoundTripNearPowerOfTwoBoundaries) {
  std::mt19937_64 rng(5);
  for (unsigned bits = 1; bits < 63; ++bits) {
    for (unsigned l = 1; l <= 5; ++l) {
      const uint64_t p = uint64_t{1} << bits;
      std::vector<uint64_t> keys = {0, 1, 2, 2 + p - 1, 2 + p - 1 + p,
                                    2 + p - 1 + p + p + 1};
      KeyEncoding enc = EncodeKeys(keys, l);
      ASSERT_EQ(DecodeKeys(enc.bytes, keys.size(), enc.max_bits, l), keys);
    }
  }
}

TEST(DecodeKeysTest, RejectsMalformedStreams) {
  std::vector<uint64_t> keys = {5, 9, 500};
  KeyEncoding enc = EncodeKeys(keys, 2);
  // Missing a byte.
  std::vector<uint8_t> shorter(enc.bytes.begin(), enc.bytes.end() - 1);
  EXPECT_THROW(DecodeKeys(shorter, 3, 9, 2), TruncatedStream);
  // Extra byte.
  std::vector<uint8_t> longer = enc.bytes;
  longer.push_back(0);
  EXPECT_THROW(DecodeKeys(longer, 3, 9, 2), CorruptPayload);
  // Nonzero padding.
  std::vector<uint8_t> padded = enc.bytes;
  padded.back() |= 0x01;
  EXPECT_THROW(DecodeKeys(padded, 3, 9, 2), CorruptPayload);
  // Zero delta after the first key.
  std::vector<uint8_t> zero_delta = testing::PackBitString("00101" "00000");
  EXPECT_THROW(DecodeKeys(zero_delta, 2, 9, 2), CorruptPayload);
  // Invalid header fields.
  EXPECT_THROW(DecodeKeys(enc.bytes, 3, 0, 2), CorruptPayload);
  EXPECT_THROW(DecodeKeys(enc.bytes, 3, 9, 6), CorruptPayload);
}

// ---------------------------------------------------------------------------
// Whole-gradient codec.

TEST(CompressTest, SingleEntryRoundTripsExactly) {
  SparseGradient g({{17, -0.3}}, 100);
  CodecConfig cfg;
  CompressedGradient c = Compress(g, cfg);
  EXPECT_EQ(c.count, 1u);
  EXPECT_EQ(c.value_bytes, (std::vector<uint8_t>{0x80}));
  EXPECT_EQ(Decompress(c, cfg, 100), g);
}

TEST(CompressTest, WorkedExampleDecodesToSumOverEight) {
  const double s = 6.1;
  SparseGradient g({{0, 1.0}, {1, 5.1}}, 2);
  CodecConfig cfg = Config(2.0, 127);
  SparseGradient d = Decompress(Compress(g, cfg), cfg, 2);
  ASSERT_EQ(d.size(), 2u);
  const double decoded = d.entries()[0].value;
  EXPECT_DOUBLE_EQ(decoded, s / 8);
  const double v = s / 6.1;
  EXPECT_GT(decoded, v / 2);
  EXPECT_LE(decoded, v);
}

TEST(CompressTest, RetainedCountMatchesBruteForce) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    SparseGradient g = testing::RandomGradient(1 + rng() % 500, 100000,
                                               trial % 2 == 0, &rng);
    CodecConfig cfg = Config(trial % 3 ? 1.1 : 2.0, 8 + trial % 40);
    const double sum = g.AbsSum();
    std::set<uint64_t> expected;
    for (const GradientEntry& e : g.entries()) {
      if (testing::ReferenceLevel(sum / std::fabs(e.value), cfg.base) <=
          cfg.threshold) {
        expected.insert(e.key);
      }
    }
    CompressedGradient c = Compress(g, cfg);
    ASSERT_EQ(c.count, expected.size());
    SparseGradient d = Decompress(c, cfg, g.dimension());
    std::vector<uint64_t> keys = d.Keys();
    ASSERT_EQ(std::set<uint64_t>(keys.begin(), keys.end()), expected);
  }
}

TEST(CompressTest, NothingRetainedGivesEmptyPayload) {
  // With tau = 1 and b = 1.1 every entry of a flat gradient has L >= 2.
  std::vector<GradientEntry> entries;
  for (uint64_t k = 0; k < 10; ++k) entries.push_back({k, 1.0});
  SparseGradient g(entries, 10);
  CodecConfig cfg = Config(1.1, 1);
  CompressedGradient c = Compress(g, cfg);
  EXPECT_EQ(c.count, 0u);
  EXPECT_TRUE(c.key_bytes.empty());
  EXPECT_TRUE(Decompress(c, cfg, 10).empty());
}

TEST(CompressTest, UnderestimationAndSignProperty) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    SparseGradient g = testing::RandomGradient(1 + rng() % 1000, 1000000,
                                               trial % 2 == 0, &rng);
    for (double b : {1.05, 1.1, 2.0}) {
      CodecConfig cfg = Config(b, 127);
      SparseGradient d = Decompress(Compress(g, cfg), cfg, g.dimension());
      size_t i = 0;
      for (const GradientEntry& e : d.entries()) {
        while (g.entries()[i].key != e.key) ++i;
        const double orig = g.entries()[i].value;
        ASSERT_EQ(std::signbit(orig), std::signbit(e.value));
        ASSERT_LE(std::fabs(e.value), std::fabs(orig) * (1 + 1e-9));
        ASSERT_GT(std::fabs(e.value), std::fabs(orig) / b * (1 - 1e-9));
      }
    }
  }
}

TEST(CompressTest, LargerMagnitudesGetSmallerLevels) {
  std::mt19937_64 rng(41);
  SparseGradient g = testing::RandomGradient(2000, 100000, true, &rng);
  ValueEncoding enc = EncodeValues(g, Config(1.1, 127));
  std::vector<std::pair<double, unsigned>> pairs;
  size_t i = 0;
  for (const QuantizedEntry& q : enc.retained) {
    while (g.entries()[i].key != q.key) ++i;
    pairs.emplace_back(std::fabs(g.entries()[i].value), q.level);
  }
  std::sort(pairs.begin(), pairs.end());
  for (size_t j = 1; j < pairs.size(); ++j) {
    ASSERT_LE(pairs[j].second, pairs[j - 1].second);
  }
}

TEST(CompressTest, IsDeterministic) {
  SyntheticGradientSpec spec;
  spec.entries = 5000;
  SparseGradient g = MakeSyntheticGradient(spec);
  EXPECT_EQ(Compress(g, CodecConfig{}), Compress(g, CodecConfig{}));
}

TEST(CompressTest, SizeFollowsFormulaForEvenlySpacedKeys) {
  SyntheticGradientSpec spec;
  spec.entries = 10000;
  spec.dimension = 1000000;
  spec.keys = KeyLayout::kEvenlySpaced;
  SparseGradient g = MakeSyntheticGradient(spec);
  CodecConfig cfg;
  CompressedGradient c = Compress(g, cfg);
  const double d = c.count;
  const double per_key = 8.0 * c.key_bytes.size() / d;
  const double bound = std::ceil(std::log2(1e6 / d)) + cfg.flag_size + 1;
  EXPECT_LE(per_key, bound);
}

TEST(DecompressTest, RejectsInconsistentInput) {
  SparseGradient g({{1, 1.0}, {5, 2.0}}, 10);
  CodecConfig cfg;
  CompressedGradient c = Compress(g, cfg);
  CompressedGradient bad = c;
  bad.value_bytes.pop_back();
  EXPECT_THROW(Decompress(bad, cfg, 10), CorruptPayload);
  bad = c;
  bad.sum = -1.0;
  EXPECT_THROW(Decompress(bad, cfg, 10), CorruptPayload);
  EXPECT_THROW(Decompress(c, cfg, 5), CorruptPayload);  // key 5 >= 5
}

TEST(CodecConfigTest, Validation) {
  EXPECT_NO_THROW(CodecConfig{}.Validate());
  EXPECT_THROW(Config(1.0, 127).Validate(), ConfigError);
  EXPECT_THROW(Config(1.1, 0).Validate(), ConfigError);
  EXPECT_THROW(Config(1.1, 128).Validate(), ConfigError);
  EXPECT_THROW(Config(1.1, 127, 0).Validate(), ConfigError);
  EXPECT_THROW(Config(1.1, 127, 6).Validate(), ConfigError);
}

}  // namespace
}  // namespace fastsgd
