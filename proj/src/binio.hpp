#pragma once

// Little-endian scalar encoding for the on-disk formats.

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

namespace kdiff::binio {

inline void put_u8(std::string &out, std::uint8_t v) { out.push_back(static_cast<char>(v)); }

inline void put_u32(std::string &out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

inline void put_f32(std::string &out, float f) { put_u32(out, std::bit_cast<std::uint32_t>(f)); }

/// Bounds-checked reader over a byte buffer.
class Reader {
public:
  explicit Reader(std::span<const char> bytes) : bytes_(bytes) {}

  std::size_t remaining() const { return bytes_.size() - pos_; }
  bool can_read(std::size_t n) const { return remaining() >= n; }

  std::uint8_t u8() { return static_cast<std::uint8_t>(bytes_[pos_++]); }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(bytes_[pos_++])) << (8 * i);
    return v;
  }
  float f32() { return std::bit_cast<float>(u32()); }
  std::string chars(std::size_t n) {
    std::string s(bytes_.data() + pos_, n);
    pos_ += n;
    return s;
  }

private:
  std::span<const char> bytes_;
  std::size_t pos_ = 0;
};

} // namespace kdiff::binio
