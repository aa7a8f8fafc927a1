#pragma once

#include <cstdint>
#include <bit>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace asep {

/// Fixed-length bit vector backed by 64-bit words, LSB-first within each
/// word. Bits past size() are kept zero so whole-word equality and hashing
/// stay exact.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(int nbits)
      : size_(nbits), words_(static_cast<std::size_t>((nbits + 63) / 64), 0) {
    if (nbits < 0) throw std::invalid_argument("BitVec: negative size");
  }

  int size() const { return size_; }

  bool test(int i) const {
    check(i);
    return (words_[static_cast<std::size_t>(i) >> 6] >> (i & 63)) & 1u;
  }

  void set(int i, bool v = true) {
    check(i);
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (v)
      words_[static_cast<std::size_t>(i) >> 6] |= mask;
    else
      words_[static_cast<std::size_t>(i) >> 6] &= ~mask;
  }

  BitVec& operator|=(const BitVec& o) {
    if (o.size_ != size_) throw std::invalid_argument("BitVec: size mismatch");
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= o.words_[w];
    return *this;
  }

  friend BitVec operator|(BitVec a, const BitVec& b) { return a |= b; }

  /// True iff every set bit of *this is also set in o.
  bool is_subset_of(const BitVec& o) const {
    if (o.size_ != size_) throw std::invalid_argument("BitVec: size mismatch");
    for (std::size_t w = 0; w < words_.size(); ++w)
      if (words_[w] & ~o.words_[w]) return false;
    return true;
  }

  bool any() const {
    for (std::uint64_t w : words_)
      if (w) return true;
    return false;
  }

  bool none() const { return !any(); }

  int count() const {
    int c = 0;
    for (std::uint64_t w : words_) c += std::popcount(w);
    return c;
  }

  friend bool operator==(const BitVec&, const BitVec&) = default;

  /// Byte encoding: ceil(size/8) bytes, bit i stored in byte i/8 at position
  /// i%8 (little-endian bit order within the byte). Injective for a fixed
  /// size since padding bits are zero.
  std::string bytes() const {
    std::string out;
    const int nbytes = (size_ + 7) / 8;
    out.resize(static_cast<std::size_t>(nbytes));
    for (int b = 0; b < nbytes; ++b)
      out[static_cast<std::size_t>(b)] = static_cast<char>(
          (words_[static_cast<std::size_t>(b) >> 3] >> ((b & 7) * 8)) & 0xFF);
    return out;
  }

  /// '0'/'1' characters in index order.
  std::string to01() const {
    std::string out(static_cast<std::size_t>(size_), '0');
    for (int i = 0; i < size_; ++i)
      if (test(i)) out[static_cast<std::size_t>(i)] = '1';
    return out;
  }

  static BitVec from01(std::string_view s) {
    BitVec v(static_cast<int>(s.size()));
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '1')
        v.set(static_cast<int>(i));
      else if (s[i] != '0')
        throw std::invalid_argument("BitVec: character outside {0,1}");
    }
    return v;
  }

  const std::vector<std::uint64_t>& words() const { return words_; }

 private:
  void check(int i) const {
    if (i < 0 || i >= size_) throw std::out_of_range("BitVec: index out of range");
  }

  int size_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace asep
