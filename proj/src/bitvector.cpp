#include "htdet/bitvector.hpp"

#include <algorithm>
#include <stdexcept>

namespace htdet {

BitVector::BitVector(std::size_t size, bool value)
    : size_(size), words_(word_count(size), value ? ~Word{0} : Word{0}) {
  clear_padding();
}

BitVector::BitVector(std::initializer_list<int> bits) : BitVector(bits.size()) {
  std::size_t i = 0;
  for (int b : bits) {
    if (b != 0 && b != 1) {
      throw std::invalid_argument("BitVector: samples must be 0 or 1");
    }
    set(i++, b == 1);
  }
}

BitVector BitVector::from_bytes(std::span<const std::uint8_t> bits) {
  BitVector v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] > 1) {
      throw std::invalid_argument("BitVector: samples must be 0 or 1");
    }
    v.set(i, bits[i] == 1);
  }
  return v;
}

BitVector BitVector::from_string(const std::string& bits) {
  BitVector v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != '0' && bits[i] != '1') {
      throw std::invalid_argument("BitVector: expected only '0' and '1'");
    }
    v.set(i, bits[i] == '1');
  }
  return v;
}

void BitVector::push_back(bool value) {
  if (size_ % kWordBits == 0) {
    words_.push_back(0);
  }
  ++size_;
  set(size_ - 1, value);
}

void BitVector::resize(std::size_t size) {
  words_.resize(word_count(size), 0);
  size_ = size;
  clear_padding();
}

std::size_t BitVector::count() const noexcept {
  std::size_t n = 0;
  for (Word w : words_) {
    n += static_cast<std::size_t>(std::popcount(w));
  }
  return n;
}

void BitVector::clear_padding() noexcept {
  const std::size_t tail = size_ % kWordBits;
  if (tail != 0 && !words_.empty()) {
    words_.back() &= (Word{1} << tail) - 1;
  }
}

std::string BitVector::to_string() const {
  std::string s(size_, '0');
  for (std::size_t i = 0; i < size_; ++i) {
    if ((*this)[i]) s[i] = '1';
  }
  return s;
}

std::vector<std::uint8_t> BitVector::to_bytes() const {
  std::vector<std::uint8_t> out(size_);
  for (std::size_t i = 0; i < size_; ++i) out[i] = (*this)[i] ? 1 : 0;
  return out;
}

std::size_t count_and(const BitVector& a, const BitVector& b) noexcept {
  const auto wa = a.words();
  const auto wb = b.words();
  const std::size_t n = std::min(wa.size(), wb.size());
  std::size_t total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    total += static_cast<std::size_t>(std::popcount(wa[i] & wb[i]));
  }
  return total;
}

BitVector operator~(const BitVector& v) {
  BitVector out = v;
  for (auto& w : out.words()) w = ~w;
  out.clear_padding();
  return out;
}

}  // namespace htdet
