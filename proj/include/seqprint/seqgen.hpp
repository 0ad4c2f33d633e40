#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "seqprint/bits.hpp"

namespace seqprint {

struct Seed {
  std::uint64_t value = 0;
  friend bool operator==(const Seed&, const Seed&) = default;
};

// Reduced- or full-round ARX keystream (ChaCha layout).
struct ArxKeystream {
  unsigned rounds = 20;
  friend bool operator==(const ArxKeystream&, const ArxKeystream&) = default;
};

// 31-bit linear congruential generator with fixed glibc-style constants.
struct Lcg {
  static constexpr std::uint64_t kModulus = std::uint64_t{1} << 31;
  static constexpr std::uint64_t kMultiplier = 1103515245;
  static constexpr std::uint64_t kIncrement = 12345;
  unsigned bits_per_step = 1;
  friend bool operator==(const Lcg&, const Lcg&) = default;
};

// Independent bits with P(1) = p_one.
struct BiasedBits {
  double p_one = 0.5;
  friend bool operator==(const BiasedBits&, const BiasedBits&) = default;
};

// Reference-random source: the 20-round ARX keystream under another label.
struct UniformRef {
  friend bool operator==(const UniformRef&, const UniformRef&) = default;
};

using GeneratorSpec = std::variant<ArxKeystream, Lcg, BiasedBits, UniformRef>;

// Throws InvalidSpec when parameters fall outside their domains.
void validate(const GeneratorSpec& spec);
std::string describe(const GeneratorSpec& spec);

// Generator tag used by the corpus file format.
std::uint8_t generator_tag(const GeneratorSpec& spec) noexcept;

struct Corpus {
  GeneratorSpec spec;
  Seed master_seed;
  std::uint64_t length_bits = 0;
  std::vector<BitSequence> sequences;

  std::size_t count() const noexcept { return sequences.size(); }
};

// 64-bit finalizer (golden-ratio pre-add, then two xorshift-multiply stages).
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  std::uint64_t z = x + 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

using ArxKey = std::array<std::uint32_t, 8>;
using ArxNonce = std::array<std::uint32_t, 3>;
using ArxBlock = std::array<std::uint8_t, 64>;

// One 64-byte keystream block. At rounds = 20 this is the ChaCha20 block
// function. rounds must be even and within [2, 20].
ArxBlock arx_block(const ArxKey& key, const ArxNonce& nonce, std::uint32_t counter,
                   unsigned rounds);

// Per-sequence key and nonce derived from (master_seed, index).
ArxKey derive_key(Seed master_seed, std::uint64_t index) noexcept;
ArxNonce derive_nonce(Seed master_seed, std::uint64_t index) noexcept;

constexpr std::uint64_t lcg_step(std::uint64_t state) noexcept {
  return (Lcg::kMultiplier * state + Lcg::kIncrement) % Lcg::kModulus;
}

BitSequence generate_sequence(const GeneratorSpec& spec, Seed master_seed, std::uint64_t index,
                              std::uint64_t length_bits);

// Sequences are generated in parallel; output is identical to sequential
// generation.
Corpus generate_corpus(const GeneratorSpec& spec, Seed master_seed, std::uint64_t count,
                       std::uint64_t length_bits);

// Binary corpus container ("SBFC", version 1, big-endian header).
void write_corpus(std::ostream& out, const Corpus& corpus);
void write_corpus(const std::filesystem::path& path, const Corpus& corpus);
Corpus read_corpus(std::istream& in);
Corpus read_corpus(const std::filesystem::path& path);

}  // namespace seqprint
