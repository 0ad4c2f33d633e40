#include "seqprint/seqgen.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "seqprint/error.hpp"
#include "seqprint/parallel.hpp"

namespace seqprint {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

constexpr std::array<std::uint32_t, 4> kSigma{0x61707865, 0x3320646e, 0x79622d32, 0x6b206574};

inline void quarter_round(std::array<std::uint32_t, 16>& x, int a, int b, int c, int d) {
  x[a] += x[b]; x[d] = std::rotl(x[d] ^ x[a], 16);
  x[c] += x[d]; x[b] = std::rotl(x[b] ^ x[c], 12);
  x[a] += x[b]; x[d] = std::rotl(x[d] ^ x[a], 8);
  x[c] += x[d]; x[b] = std::rotl(x[b] ^ x[c], 7);
}

void check_rounds(unsigned rounds) {
  if (rounds < 2 || rounds > 20 || rounds % 2 != 0) {
    throw Error(ErrorKind::InvalidSpec,
                "ARX rounds must be even and in [2, 20], got " + std::to_string(rounds));
  }
}

// Appends bits MSB-first into a packed buffer.
class BitWriter {
 public:
  explicit BitWriter(std::uint64_t length_bits) : length_(length_bits), buf_(packed_size(length_bits), 0) {}

  bool full() const noexcept { return pos_ >= length_; }

  void put(bool bit) noexcept {
    if (bit) buf_[pos_ >> 3] |= static_cast<std::uint8_t>(0x80u >> (pos_ & 7));
    ++pos_;
  }

  // Copies whole octets while aligned; falls back to bit-wise for the tail.
  void put_bytes(const std::uint8_t* data, std::size_t size) noexcept {
    std::size_t i = 0;
    while (i < size && !full()) {
      if ((pos_ & 7) == 0 && length_ - pos_ >= 8) {
        buf_[pos_ >> 3] = data[i++];
        pos_ += 8;
      } else {
        for (int b = 7; b >= 0 && !full(); --b) put((data[i] >> b) & 1u);
        ++i;
      }
    }
  }

  BitSequence finish() { return BitSequence(length_, std::move(buf_)); }

 private:
  std::uint64_t length_;
  std::uint64_t pos_ = 0;
  std::vector<std::uint8_t> buf_;
};

BitSequence arx_sequence(unsigned rounds, Seed seed, std::uint64_t index, std::uint64_t n) {
  check_rounds(rounds);
  if ((n + 511) / 512 > (std::uint64_t{1} << 32)) {
    throw Error(ErrorKind::InvalidSpec, "ARX sequence length exceeds the 32-bit block counter");
  }
  const ArxKey key = derive_key(seed, index);
  const ArxNonce nonce = derive_nonce(seed, index);
  BitWriter out(n);
  for (std::uint32_t counter = 0; !out.full(); ++counter) {
    const ArxBlock block = arx_block(key, nonce, counter, rounds);
    out.put_bytes(block.data(), block.size());
  }
  return out.finish();
}

BitSequence lcg_sequence(const Lcg& lcg, Seed seed, std::uint64_t index, std::uint64_t n) {
  std::uint64_t state = mix64(seed.value + index) % Lcg::kModulus;
  BitWriter out(n);
  while (!out.full()) {
    state = lcg_step(state);
    for (int b = static_cast<int>(lcg.bits_per_step) - 1; b >= 0 && !out.full(); --b) {
      out.put((state >> b) & 1u);
    }
  }
  return out.finish();
}

BitSequence biased_sequence(const BiasedBits& biased, Seed seed, std::uint64_t index,
                            std::uint64_t n) {
  const std::uint64_t stream = mix64(seed.value + index);
  BitWriter out(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const double u = static_cast<double>(mix64(stream + i) >> 11) * 0x1.0p-53;
    out.put(u < biased.p_one);
  }
  return out.finish();
}

void put_be(std::ostream& out, std::uint64_t value, int octets) {
  for (int i = octets - 1; i >= 0; --i) out.put(static_cast<char>((value >> (8 * i)) & 0xFF));
}

std::uint64_t get_be(std::istream& in, int octets, const char* field) {
  std::uint64_t value = 0;
  for (int i = 0; i < octets; ++i) {
    const int c = in.get();
    if (c == std::char_traits<char>::eof()) {
      throw Error(ErrorKind::Format, std::string("truncated corpus header at ") + field);
    }
    value = (value << 8) | static_cast<std::uint8_t>(c);
  }
  return value;
}

constexpr char kCorpusMagic[4] = {'S', 'B', 'F', 'C'};
constexpr std::uint16_t kCorpusVersion = 1;

}  // namespace

void validate(const GeneratorSpec& spec) {
  std::visit(overloaded{
                 [](const ArxKeystream& s) { check_rounds(s.rounds); },
                 [](const Lcg& s) {
                   if (s.bits_per_step < 1 || s.bits_per_step > 16) {
                     throw Error(ErrorKind::InvalidSpec, "LCG bits_per_step must be in [1, 16]");
                   }
                 },
                 [](const BiasedBits& s) {
                   if (!(s.p_one >= 0.0 && s.p_one <= 1.0)) {
                     throw Error(ErrorKind::InvalidSpec, "p_one must be a probability in [0, 1]");
                   }
                 },
                 [](const UniformRef&) {},
             },
             spec);
}

std::string describe(const GeneratorSpec& spec) {
  return std::visit(overloaded{
                        [](const ArxKeystream& s) { return "arx(rounds=" + std::to_string(s.rounds) + ")"; },
                        [](const Lcg& s) { return "lcg(bits_per_step=" + std::to_string(s.bits_per_step) + ")"; },
                        [](const BiasedBits& s) {
                          std::ostringstream os;
                          os.precision(17);
                          os << "biased(p_one=" << s.p_one << ")";
                          return os.str();
                        },
                        [](const UniformRef&) { return std::string("uniform"); },
                    },
                    spec);
}

std::uint8_t generator_tag(const GeneratorSpec& spec) noexcept {
  return static_cast<std::uint8_t>(spec.index() + 1);
}

ArxBlock arx_block(const ArxKey& key, const ArxNonce& nonce, std::uint32_t counter,
                   unsigned rounds) {
  check_rounds(rounds);
  std::array<std::uint32_t, 16> init{};
  std::copy(kSigma.begin(), kSigma.end(), init.begin());
  std::copy(key.begin(), key.end(), init.begin() + 4);
  init[12] = counter;
  std::copy(nonce.begin(), nonce.end(), init.begin() + 13);

  auto x = init;
  for (unsigned r = 0; r < rounds; r += 2) {
    quarter_round(x, 0, 4, 8, 12);
    quarter_round(x, 1, 5, 9, 13);
    quarter_round(x, 2, 6, 10, 14);
    quarter_round(x, 3, 7, 11, 15);
    quarter_round(x, 0, 5, 10, 15);
    quarter_round(x, 1, 6, 11, 12);
    quarter_round(x, 2, 7, 8, 13);
    quarter_round(x, 3, 4, 9, 14);
  }

  ArxBlock out{};
  for (int i = 0; i < 16; ++i) {
    const std::uint32_t w = x[i] + init[i];
    out[4 * i + 0] = static_cast<std::uint8_t>(w);
    out[4 * i + 1] = static_cast<std::uint8_t>(w >> 8);
    out[4 * i + 2] = static_cast<std::uint8_t>(w >> 16);
    out[4 * i + 3] = static_cast<std::uint8_t>(w >> 24);
  }
  return out;
}

ArxKey derive_key(Seed master_seed, std::uint64_t index) noexcept {
  ArxKey key{};
  for (std::uint64_t j = 0; j < key.size(); ++j) {
    key[j] = static_cast<std::uint32_t>(mix64(master_seed.value ^ (index * 8 + j)));
  }
  return key;
}

ArxNonce derive_nonce(Seed master_seed, std::uint64_t index) noexcept {
  ArxNonce nonce{};
  for (std::uint64_t j = 0; j < nonce.size(); ++j) {
    nonce[j] = static_cast<std::uint32_t>(mix64(master_seed.value + index + (j << 32)));
  }
  return nonce;
}

BitSequence generate_sequence(const GeneratorSpec& spec, Seed master_seed, std::uint64_t index,
                              std::uint64_t length_bits) {
  validate(spec);
  if (length_bits == 0) throw Error(ErrorKind::InvalidSpec, "length_bits must be at least 1");
  return std::visit(
      overloaded{
          [&](const ArxKeystream& s) { return arx_sequence(s.rounds, master_seed, index, length_bits); },
          [&](const UniformRef&) { return arx_sequence(20, master_seed, index, length_bits); },
          [&](const Lcg& s) { return lcg_sequence(s, master_seed, index, length_bits); },
          [&](const BiasedBits& s) { return biased_sequence(s, master_seed, index, length_bits); },
      },
      spec);
}

Corpus generate_corpus(const GeneratorSpec& spec, Seed master_seed, std::uint64_t count,
                       std::uint64_t length_bits) {
  validate(spec);
  if (count == 0) throw Error(ErrorKind::InvalidSpec, "corpus count must be at least 1");
  if (length_bits == 0) throw Error(ErrorKind::InvalidSpec, "length_bits must be at least 1");
  Corpus corpus{spec, master_seed, length_bits, std::vector<BitSequence>(count)};
  parallel_for(count, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      corpus.sequences[i] = generate_sequence(spec, master_seed, i, length_bits);
    }
  });
  return corpus;
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  if (corpus.sequences.size() > 0xFFFFFFFFull) {
    throw Error(ErrorKind::InvalidArgument, "corpus count does not fit the 32-bit header field");
  }
  out.write(kCorpusMagic, 4);
  put_be(out, kCorpusVersion, 2);
  put_be(out, generator_tag(corpus.spec), 1);
  std::visit(overloaded{
                 [&](const ArxKeystream& s) { put_be(out, s.rounds, 2); },
                 [&](const Lcg& s) { put_be(out, s.bits_per_step, 2); },
                 [&](const BiasedBits& s) { put_be(out, std::bit_cast<std::uint64_t>(s.p_one), 8); },
                 [](const UniformRef&) {},
             },
             corpus.spec);
  put_be(out, corpus.master_seed.value, 8);
  put_be(out, corpus.sequences.size(), 4);
  put_be(out, corpus.length_bits, 8);
  for (const auto& seq : corpus.sequences) {
    if (seq.size() != corpus.length_bits) {
      throw Error(ErrorKind::InvalidArgument, "corpus sequences must share length_bits");
    }
    const auto bytes = seq.bytes();
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  }
  if (!out) throw Error(ErrorKind::Io, "failed writing corpus stream");
}

void write_corpus(const std::filesystem::path& path, const Corpus& corpus) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  write_corpus(out, corpus);
  out.close();
  if (!out) throw Error(ErrorKind::Io, "failed writing " + path.string());
}

Corpus read_corpus(std::istream& in) {
  char magic[4] = {};
  in.read(magic, 4);
  if (in.gcount() != 4 || std::memcmp(magic, kCorpusMagic, 4) != 0) {
    throw Error(ErrorKind::Format, "not a corpus file (bad magic)");
  }
  const auto version = get_be(in, 2, "version");
  if (version != kCorpusVersion) {
    throw Error(ErrorKind::Format, "unsupported corpus format version " + std::to_string(version));
  }
  const auto tag = get_be(in, 1, "generator tag");
  Corpus corpus;
  switch (tag) {
    case 1: corpus.spec = ArxKeystream{static_cast<unsigned>(get_be(in, 2, "rounds"))}; break;
    case 2: corpus.spec = Lcg{static_cast<unsigned>(get_be(in, 2, "bits_per_step"))}; break;
    case 3: corpus.spec = BiasedBits{std::bit_cast<double>(get_be(in, 8, "p_one"))}; break;
    case 4: corpus.spec = UniformRef{}; break;
    default: throw Error(ErrorKind::Format, "unknown generator tag " + std::to_string(tag));
  }
  try {
    validate(corpus.spec);
  } catch (const Error& e) {
    throw Error(ErrorKind::Format, std::string("corpus header carries an invalid spec (") + e.what() + ")");
  }
  corpus.master_seed = Seed{get_be(in, 8, "master seed")};
  const auto count = get_be(in, 4, "count");
  corpus.length_bits = get_be(in, 8, "length_bits");
  if (count == 0 || corpus.length_bits == 0) {
    throw Error(ErrorKind::Format, "corpus header declares an empty corpus");
  }
  const std::size_t octets = packed_size(corpus.length_bits);
  corpus.sequences.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    std::vector<std::uint8_t> buf(octets);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(octets));
    if (static_cast<std::size_t>(in.gcount()) != octets) {
      throw Error(ErrorKind::Format, "truncated corpus body at sequence " + std::to_string(i));
    }
    if (const unsigned tail = corpus.length_bits & 7; tail != 0 && (buf.back() & (0xFFu >> tail)) != 0) {
      throw Error(ErrorKind::Format, "nonzero pad bits in sequence " + std::to_string(i));
    }
    corpus.sequences.emplace_back(corpus.length_bits, std::move(buf));
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw Error(ErrorKind::Format, "trailing bytes after the declared corpus body");
  }
  return corpus;
}

Corpus read_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return read_corpus(in);
}

}  // namespace seqprint
