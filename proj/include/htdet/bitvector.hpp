// Packed binary sequence used for waveforms, encodings and MI inputs.

#ifndef HTDET_BITVECTOR_HPP
#define HTDET_BITVECTOR_HPP

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace htdet {

/// Sequence of 0/1 samples stored 64 per word, LSB first. Bits past size()
/// in the last word are always zero.
class BitVector {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  BitVector() = default;
  explicit BitVector(std::size_t size, bool value = false);
  BitVector(std::initializer_list<int> bits);
  static BitVector from_bytes(std::span<const std::uint8_t> bits);
  /// Parses a "0101..." string; any other character throws std::invalid_argument.
  static BitVector from_string(const std::string& bits);

  [[nodiscard]] std::size_t size() const noexcept { return size_; }
  [[nodiscard]] bool empty() const noexcept { return size_ == 0; }

  [[nodiscard]] bool operator[](std::size_t i) const noexcept {
    return (words_[i / kWordBits] >> (i % kWordBits)) & 1U;
  }
  void set(std::size_t i, bool value) noexcept {
    const Word mask = Word{1} << (i % kWordBits);
    if (value) {
      words_[i / kWordBits] |= mask;
    } else {
      words_[i / kWordBits] &= ~mask;
    }
  }
  void push_back(bool value);
  void resize(std::size_t size);

  [[nodiscard]] std::size_t count() const noexcept;

  [[nodiscard]] std::span<const Word> words() const noexcept { return words_; }
  [[nodiscard]] std::span<Word> words() noexcept { return words_; }
  /// Re-zeroes bits beyond size(); call after writing through words().
  void clear_padding() noexcept;

  [[nodiscard]] std::string to_string() const;
  [[nodiscard]] std::vector<std::uint8_t> to_bytes() const;

  friend bool operator==(const BitVector& a, const BitVector& b) = default;

 private:
  std::size_t size_ = 0;
  std::vector<Word> words_;
};

inline std::size_t word_count(std::size_t bits) noexcept {
  return (bits + BitVector::kWordBits - 1) / BitVector::kWordBits;
}

/// Number of positions where both a and b are 1 (sizes must match).
std::size_t count_and(const BitVector& a, const BitVector& b) noexcept;

BitVector operator~(const BitVector& v);

}  // namespace htdet

#endif  // HTDET_BITVECTOR_HPP
