#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace seqprint {

// A finite binary string packed MSB-first within each octet. Pad bits in the
// final octet are always zero.
class BitSequence {
 public:
  BitSequence() = default;

  // Takes ownership of a packed buffer. Throws InvalidArgument if the buffer
  // size does not equal ceil(length_bits / 8); clears any stray pad bits.
  BitSequence(std::uint64_t length_bits, std::vector<std::uint8_t> packed);

  static BitSequence from_bits(std::span<const std::uint8_t> bits);
  // Parses a string of '0'/'1' characters.
  static BitSequence from_string(std::string_view text);

  std::uint64_t size() const noexcept { return length_bits_; }
  bool empty() const noexcept { return length_bits_ == 0; }

  bool bit(std::uint64_t i) const noexcept {
    return (bytes_[i >> 3] >> (7 - (i & 7))) & 1u;
  }

  std::span<const std::uint8_t> bytes() const noexcept { return bytes_; }

  // Bits as one 0/1 value per element.
  std::vector<std::uint8_t> unpack() const;
  std::string to_string() const;

  // Value of the m-bit window starting at `pos`, MSB-first. m in [1, 64].
  std::uint64_t window(std::uint64_t pos, unsigned m) const noexcept;

  friend bool operator==(const BitSequence&, const BitSequence&) = default;

 private:
  std::uint64_t length_bits_ = 0;
  std::vector<std::uint8_t> bytes_;
};

constexpr std::size_t packed_size(std::uint64_t length_bits) noexcept {
  return static_cast<std::size_t>((length_bits + 7) / 8);
}

// Calls fn(value) for every overlapping m-bit window of `seq` in position
// order. Rolling update: one shift per bit.
template <typename Fn>
void for_each_window(const BitSequence& seq, unsigned m, Fn&& fn) {
  const std::uint64_t n = seq.size();
  if (m == 0 || m > n) return;
  const std::uint64_t mask = m == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << m) - 1);
  const auto bytes = seq.bytes();
  std::uint64_t value = 0;
  std::uint64_t i = 0;
  for (; i < m; ++i) value = (value << 1) | ((bytes[i >> 3] >> (7 - (i & 7))) & 1u);
  fn(value);
  for (; i < n; ++i) {
    value = ((value << 1) | ((bytes[i >> 3] >> (7 - (i & 7))) & 1u)) & mask;
    fn(value);
  }
}

}  // namespace seqprint
