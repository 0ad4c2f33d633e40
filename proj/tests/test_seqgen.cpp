#include <gtest/gtest.h>
#include <openssl/evp.h>

#include <algorithm>
#include <cstring>
#include <memory>
#include <random>
#include <sstream>

#include "seqprint/error.hpp"
#include "seqprint/parallel.hpp"
#include "seqprint/seqgen.hpp"
#include "test_support.hpp"

namespace seqprint {
namespace {

std::vector<std::uint8_t> from_hex(const std::string& hex) {
  std::vector<std::uint8_t> out;
  for (std::size_t i = 0; i < hex.size(); i += 2) out.push_back(static_cast<std::uint8_t>(std::stoul(hex.substr(i, 2), nullptr, 16)));
  return out;
}

// Independent ChaCha20 from OpenSSL: IV = 32-bit LE counter || 96-bit nonce.
ArxBlock openssl_chacha20(const ArxKey& key, const ArxNonce& nonce, std::uint32_t counter) {
  std::uint8_t key_bytes[32];
  std::uint8_t iv[16];
  for (int i = 0; i < 8; ++i) {
    for (int b = 0; b < 4; ++b) key_bytes[4 * i + b] = static_cast<std::uint8_t>(key[i] >> (8 * b));
  }
  for (int b = 0; b < 4; ++b) iv[b] = static_cast<std::uint8_t>(counter >> (8 * b));
  for (int i = 0; i < 3; ++i) {
    for (int b = 0; b < 4; ++b) iv[4 + 4 * i + b] = static_cast<std::uint8_t>(nonce[i] >> (8 * b));
  }
  std::unique_ptr<EVP_CIPHER_CTX, decltype(&EVP_CIPHER_CTX_free)> ctx(EVP_CIPHER_CTX_new(), &EVP_CIPHER_CTX_free);
  EVP_EncryptInit_ex(ctx.get(), EVP_chacha20(), nullptr, key_bytes, iv);
  ArxBlock zeros{};
  ArxBlock out{};
  int len = 0;
  EVP_EncryptUpdate(ctx.get(), out.data(), &len, zeros.data(), static_cast<int>(zeros.size()));
  return out;
}

TEST(ArxBlock, ZeroKeyMatchesPublishedVector) {
  const auto block = arx_block(ArxKey{}, ArxNonce{}, 0, 20);
  const auto expected = from_hex(
      "76b8e0ada0f13d90405d6ae55386bd28bdd219b8a08ded1aa836efcc8b770dc7"
      "da41597c5157488d7724e03fb8d84a376a43b8f41518a11cc387b669b2ee6586");
  EXPECT_TRUE(std::equal(block.begin(), block.end(), expected.begin()));
}

TEST(ArxBlock, BlockFunctionVectorWithCounterAndNonce) {
  ArxKey key{};
  for (int i = 0; i < 8; ++i) {
    key[i] = static_cast<std::uint32_t>(4 * i) | static_cast<std::uint32_t>(4 * i + 1) << 8 |
             static_cast<std::uint32_t>(4 * i + 2) << 16 | static_cast<std::uint32_t>(4 * i + 3) << 24;
  }
  const ArxNonce nonce{0x09000000, 0x4a000000, 0x00000000};
  const auto block = arx_block(key, nonce, 1, 20);
  const auto expected = from_hex(
      "10f1e7e4d13b5915500fdd1fa32071c4c7d1f4c733c068030422aa9ac3d46c4e"
      "d2826446079faa0914c2d705d98b02a2b5129cd1de164eb9cbd083e8a2503c4e");
  EXPECT_TRUE(std::equal(block.begin(), block.end(), expected.begin()));
}

TEST(ArxBlock, MatchesOpenSslOnRandomInputs) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    ArxKey key{};
    ArxNonce nonce{};
    for (auto& w : key) w = static_cast<std::uint32_t>(rng());
    for (auto& w : nonce) w = static_cast<std::uint32_t>(rng());
    const auto counter = static_cast<std::uint32_t>(rng());
    ASSERT_EQ(arx_block(key, nonce, counter, 20), openssl_chacha20(key, nonce, counter)) << "trial " << trial;
  }
}

TEST(ArxBlock, RejectsBadRounds) {
  for (unsigned rounds : {0u, 1u, 7u, 21u, 22u}) {
    try {
      arx_block(ArxKey{}, ArxNonce{}, 0, rounds);
      FAIL() << "rounds " << rounds << " accepted";
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::InvalidSpec);
    }
  }
}

TEST(ArxBlock, DeterministicAndRoundSensitive) {
  const ArxKey key{1, 2, 3, 4, 5, 6, 7, 8};
  const ArxNonce nonce{9, 10, 11};
  EXPECT_EQ(arx_block(key, nonce, 3, 20), arx_block(key, nonce, 3, 20));
  EXPECT_NE(arx_block(key, nonce, 3, 2), arx_block(key, nonce, 3, 20));
}

TEST(Mix64, KnownFinalizerOutputs) {
  // splitmix64 seeded at 0 yields 0xE220A8397B1DCDAF as its first output.
  EXPECT_EQ(mix64(0), 0xE220A8397B1DCDAFull);
  EXPECT_EQ(mix64(0x9E3779B97F4A7C15ull), 0x6E789E6AA1B965F4ull);
}

TEST(GenerateSequence, KeysAndNoncesFollowSeedDerivation) {
  const Seed seed{42};
  const auto key = derive_key(seed, 3);
  for (std::uint64_t j = 0; j < 8; ++j) EXPECT_EQ(key[j], static_cast<std::uint32_t>(mix64(42 ^ (24 + j))));
  EXPECT_EQ(derive_nonce(seed, 3)[0], static_cast<std::uint32_t>(mix64(45)));

  // The sequence is the keystream of (key, nonce, counter 0, 1, ...).
  const auto seq = generate_sequence(ArxKeystream{8}, seed, 3, 1024 + 13);
  const auto nonce = derive_nonce(seed, 3);
  const auto b0 = arx_block(key, nonce, 0, 8);
  const auto b1 = arx_block(key, nonce, 1, 8);
  EXPECT_TRUE(std::equal(b0.begin(), b0.end(), seq.bytes().begin()));
  EXPECT_TRUE(std::equal(b1.begin(), b1.end(), seq.bytes().begin() + 64));
}

TEST(GenerateSequence, UniformRefAliasesFullRoundArx) {
  EXPECT_EQ(generate_sequence(UniformRef{}, Seed{5}, 9, 700), generate_sequence(ArxKeystream{20}, Seed{5}, 9, 700));
}

TEST(GenerateSequence, BiasedExtremes) {
  EXPECT_EQ(generate_sequence(BiasedBits{1.0}, Seed{3}, 17, 16).to_string(), std::string(16, '1'));
  EXPECT_EQ(generate_sequence(BiasedBits{0.0}, Seed{3}, 17, 21).to_string(), std::string(21, '0'));
}

TEST(GenerateSequence, LcgRecurrence) {
  EXPECT_EQ(lcg_step(1), 1103527590u);
  EXPECT_EQ(lcg_step(0), 12345u);

  // Low bits of consecutive states, MSB-first.
  const Seed seed{77};
  std::uint64_t state = mix64(77 + 2) % Lcg::kModulus;
  std::string expected;
  while (expected.size() < 40) {
    state = lcg_step(state);
    for (int b = 4; b >= 0; --b) expected.push_back(((state >> b) & 1u) ? '1' : '0');
  }
  EXPECT_EQ(generate_sequence(Lcg{5}, seed, 2, 37).to_string(), expected.substr(0, 37));
}

TEST(GenerateSequence, LcgSingleLowBitAlternates) {
  // With an odd multiplier and odd increment the low bit toggles every step.
  const auto s = generate_sequence(Lcg{1}, Seed{1}, 0, 64).to_string();
  for (std::size_t i = 1; i < s.size(); ++i) EXPECT_NE(s[i], s[i - 1]);
}

TEST(GenerateSequence, Errors) {
  EXPECT_THROW(generate_sequence(UniformRef{}, Seed{1}, 0, 0), Error);
  EXPECT_THROW(generate_sequence(BiasedBits{1.5}, Seed{1}, 0, 8), Error);
  EXPECT_THROW(generate_sequence(BiasedBits{-0.1}, Seed{1}, 0, 8), Error);
  EXPECT_THROW(generate_sequence(Lcg{0}, Seed{1}, 0, 8), Error);
  EXPECT_THROW(generate_sequence(Lcg{17}, Seed{1}, 0, 8), Error);
  EXPECT_THROW(generate_sequence(ArxKeystream{3}, Seed{1}, 0, 8), Error);
}

TEST(GenerateSequence, DeterministicAndPadBitsClear) {
  for (const GeneratorSpec spec : {GeneratorSpec{ArxKeystream{4}}, GeneratorSpec{Lcg{3}}, GeneratorSpec{BiasedBits{0.3}},
                                   GeneratorSpec{UniformRef{}}}) {
    const auto a = generate_sequence(spec, Seed{9}, 4, 101);
    const auto b = generate_sequence(spec, Seed{9}, 4, 101);
    EXPECT_EQ(a, b) << describe(spec);
    EXPECT_EQ(a.bytes().size(), 13u);
    EXPECT_EQ(a.bytes().back() & 0x07, 0) << describe(spec);
  }
}

TEST(GenerateSequence, BiasSanity) {
  for (double p : {0.1, 0.5, 0.55, 0.9}) {
    const auto s = generate_sequence(BiasedBits{p}, Seed{2024}, 0, 1'000'000);
    std::uint64_t ones = 0;
    for (std::uint64_t i = 0; i < s.size(); ++i) ones += s.bit(i);
    EXPECT_NEAR(static_cast<double>(ones) / 1e6, p, 0.002) << "p = " << p;
  }
}

TEST(GenerateCorpus, SingletonAndOrdering) {
  const auto c = generate_corpus(ArxKeystream{20}, Seed{8}, 1, 300);
  ASSERT_EQ(c.count(), 1u);
  EXPECT_EQ(c.sequences[0], generate_sequence(ArxKeystream{20}, Seed{8}, 0, 300));

  const auto many = generate_corpus(Lcg{2}, Seed{8}, 7, 50);
  for (std::size_t i = 0; i < many.count(); ++i) EXPECT_EQ(many.sequences[i], generate_sequence(Lcg{2}, Seed{8}, i, 50));
}

TEST(GenerateCorpus, DifferentSeedsDiffer) {
  const auto a = generate_corpus(UniformRef{}, Seed{1}, 20, 256);
  const auto b = generate_corpus(UniformRef{}, Seed{2}, 20, 256);
  EXPECT_NE(a.sequences, b.sequences);
}

TEST(GenerateCorpus, RejectsEmpty) {
  EXPECT_THROW(generate_corpus(UniformRef{}, Seed{1}, 0, 8), Error);
}

TEST(GenerateCorpus, ParallelMatchesSequential) {
  set_thread_count(1);
  const auto seq = generate_corpus(BiasedBits{0.4}, Seed{5}, 37, 333);
  set_thread_count(8);
  const auto par = generate_corpus(BiasedBits{0.4}, Seed{5}, 37, 333);
  set_thread_count(0);
  EXPECT_EQ(seq.sequences, par.sequences);
}

TEST(BitSequence, PackRoundTripProperty) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::uint8_t> bits(rng() % 200);
    for (auto& b : bits) b = rng() & 1u;
    const auto seq = BitSequence::from_bits(bits);
    ASSERT_EQ(seq.unpack(), bits);
    ASSERT_EQ(seq.bytes().size(), (bits.size() + 7) / 8);
  }
}

TEST(BitSequence, MsbFirstPacking) {
  const auto s = BitSequence::from_string("1000000001");
  ASSERT_EQ(s.bytes().size(), 2u);
  EXPECT_EQ(s.bytes()[0], 0x80);
  EXPECT_EQ(s.bytes()[1], 0x40);
  EXPECT_THROW(BitSequence::from_string("01x"), Error);
  EXPECT_THROW(BitSequence(9, std::vector<std::uint8_t>{1}), Error);
}

TEST(CorpusFile, HeaderLayoutIsBigEndian) {
  const auto corpus = generate_corpus(ArxKeystream{12}, Seed{0x0102030405060708ull}, 2, 12);
  std::stringstream ss;
  write_corpus(ss, corpus);
  const std::string bytes = ss.str();
  const std::string expected_header =
      std::string("SBFC") + std::string("\x00\x01", 2) + std::string("\x01", 1) + std::string("\x00\x0c", 2) +
      std::string("\x01\x02\x03\x04\x05\x06\x07\x08", 8) + std::string("\x00\x00\x00\x02", 4) +
      std::string("\x00\x00\x00\x00\x00\x00\x00\x0c", 8);
  ASSERT_EQ(bytes.size(), expected_header.size() + 2 * 2);
  EXPECT_EQ(bytes.substr(0, expected_header.size()), expected_header);
}

TEST(CorpusFile, RoundTripsEveryGenerator) {
  for (const GeneratorSpec spec : {GeneratorSpec{ArxKeystream{6}}, GeneratorSpec{Lcg{16}}, GeneratorSpec{BiasedBits{0.25}},
                                   GeneratorSpec{UniformRef{}}}) {
    const auto corpus = generate_corpus(spec, Seed{99}, 5, 77);
    std::stringstream ss;
    write_corpus(ss, corpus);
    const auto back = read_corpus(ss);
    EXPECT_EQ(back.spec, corpus.spec);
    EXPECT_EQ(back.master_seed, corpus.master_seed);
    EXPECT_EQ(back.length_bits, corpus.length_bits);
    EXPECT_EQ(back.sequences, corpus.sequences);
  }
}

TEST(CorpusFile, RejectsMalformedInput) {
  const auto corpus = generate_corpus(UniformRef{}, Seed{1}, 3, 20);
  std::stringstream ss;
  write_corpus(ss, corpus);
  const std::string good = ss.str();

  auto expect_format_error = [](std::string bytes) {
    std::stringstream in(bytes);
    try {
      read_corpus(in);
      FAIL() << "accepted malformed corpus";
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::Format);
    }
  };
  std::string bad_magic = good;
  bad_magic[0] = 'X';
  expect_format_error(bad_magic);
  std::string bad_version = good;
  bad_version[5] = 2;
  expect_format_error(bad_version);
  expect_format_error(good.substr(0, good.size() - 1));
  expect_format_error(good + "x");
  std::string bad_pad = good;
  bad_pad.back() = static_cast<char>(bad_pad.back() | 0x01);
  expect_format_error(bad_pad);
}

}  // namespace
}  // namespace seqprint
