#include "seqprint/bits.hpp"

#include <string>

#include "seqprint/error.hpp"

namespace seqprint {

BitSequence::BitSequence(std::uint64_t length_bits, std::vector<std::uint8_t> packed)
    : length_bits_(length_bits), bytes_(std::move(packed)) {
  if (bytes_.size() != packed_size(length_bits_)) {
    throw Error(ErrorKind::InvalidArgument,
                "packed buffer holds " + std::to_string(bytes_.size()) + " octets, expected " +
                    std::to_string(packed_size(length_bits_)));
  }
  if (const unsigned tail = length_bits_ & 7; tail != 0) {
    bytes_.back() &= static_cast<std::uint8_t>(0xFFu << (8 - tail));
  }
}

BitSequence BitSequence::from_bits(std::span<const std::uint8_t> bits) {
  std::vector<std::uint8_t> packed(packed_size(bits.size()), 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) packed[i >> 3] |= static_cast<std::uint8_t>(0x80u >> (i & 7));
  }
  return BitSequence(bits.size(), std::move(packed));
}

BitSequence BitSequence::from_string(std::string_view text) {
  std::vector<std::uint8_t> bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw Error(ErrorKind::InvalidArgument, "bit string may only contain '0' and '1'");
    }
    bits.push_back(c == '1');
  }
  return from_bits(bits);
}

std::vector<std::uint8_t> BitSequence::unpack() const {
  std::vector<std::uint8_t> out(length_bits_);
  for (std::uint64_t i = 0; i < length_bits_; ++i) out[i] = bit(i);
  return out;
}

std::string BitSequence::to_string() const {
  std::string out(length_bits_, '0');
  for (std::uint64_t i = 0; i < length_bits_; ++i) {
    if (bit(i)) out[i] = '1';
  }
  return out;
}

std::uint64_t BitSequence::window(std::uint64_t pos, unsigned m) const noexcept {
  std::uint64_t value = 0;
  for (unsigned k = 0; k < m; ++k) value = (value << 1) | bit(pos + k);
  return value;
}

}  // namespace seqprint
