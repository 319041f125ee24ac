#pragma once

#include <cstdint>
#include <vector>

#include "ciprng/bitcore.hpp"

namespace ciprng {

/// Packed bit sequence assembled from successive generator outputs.
class BitStream {
 public:
  void reserve(std::size_t bits) { words_.reserve((bits + 63) / 64); }

  void push_back(bool b) {
    if (size_ % 64 == 0) words_.push_back(0);
    if (b) words_[size_ / 64] |= std::uint64_t{1} << (size_ % 64);
    ++size_;
  }

  /// Appends the n components of a configuration, component 1 (MSB) first.
  void append_configuration(std::uint32_t value, int n) {
    for (int i = 1; i <= n; ++i) push_back((value >> (n - i)) & 1u);
  }

  bool operator[](std::size_t i) const {
    return (words_[i / 64] >> (i % 64)) & 1u;
  }

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

 private:
  std::vector<std::uint64_t> words_;
  std::size_t size_ = 0;
};

/// Non-owning window into a BitStream; what the statistical tests consume.
class BitSpan {
 public:
  BitSpan(const BitStream& stream)  // NOLINT: implicit by design
      : stream_(&stream), offset_(0), length_(stream.size()) {}

  BitSpan(const BitStream& stream, std::size_t offset, std::size_t length)
      : stream_(&stream), offset_(offset), length_(length) {
    require(offset + length <= stream.size(), "BitSpan: window out of range");
  }

  bool operator[](std::size_t i) const { return (*stream_)[offset_ + i]; }
  std::size_t size() const { return length_; }

  std::size_t count_ones() const {
    std::size_t ones = 0;
    for (std::size_t i = 0; i < length_; ++i) ones += (*this)[i];
    return ones;
  }

 private:
  const BitStream* stream_;
  std::size_t offset_;
  std::size_t length_;
};

inline BitStream from_string(const std::string& zeros_and_ones) {
  BitStream out;
  for (char c : zeros_and_ones) {
    require(c == '0' || c == '1', "from_string: expected only 0/1");
    out.push_back(c == '1');
  }
  return out;
}

}  // namespace ciprng
