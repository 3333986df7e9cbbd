#include "subrqa/bit_sequence.hpp"

#include <algorithm>
#include <bit>

#include "subrqa/errors.hpp"

namespace subrqa {

BitSequence::BitSequence(std::size_t length) : words_((length + 63) / 64, 0), size_(length) {}

BitSequence BitSequence::from_string(std::string_view text) {
  BitSequence s(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c != '0' && c != '1') {
      throw ParseError(std::string("expected '0' or '1', got '") + c + "'", i);
    }
    s.set(i, c == '1');
  }
  return s;
}

Letter BitSequence::at(std::size_t i) const {
  if (i >= size_) {
    throw DomainError("index " + std::to_string(i) + " out of range for sequence of length " +
                      std::to_string(size_));
  }
  return (*this)[i];
}

void BitSequence::push_back(Letter a) {
  if ((size_ & 63) == 0) words_.push_back(0);
  ++size_;
  set(size_ - 1, to_int(a));
}

void BitSequence::append(const BitSequence& other) {
  // Word-at-a-time copy of the tail.
  const std::size_t old = size_;
  size_ += other.size_;
  words_.resize((size_ + 63) / 64, 0);
  const unsigned shift = old & 63;
  std::size_t dst = old >> 6;
  for (std::size_t k = 0; k < other.words_.size(); ++k) {
    const std::uint64_t w = other.words_[k];
    words_[dst + k] |= w << shift;
    if (shift != 0 && dst + k + 1 < words_.size()) words_[dst + k + 1] |= w >> (64 - shift);
  }
}

void BitSequence::truncate(std::size_t length) {
  if (length >= size_) return;
  size_ = length;
  words_.resize((length + 63) / 64);
  if (length & 63) words_.back() &= (std::uint64_t{1} << (length & 63)) - 1;
}

std::uint64_t BitSequence::word_at(std::size_t pos) const noexcept {
  const std::size_t idx = pos >> 6;
  const unsigned off = pos & 63;
  if (idx >= words_.size()) return 0;
  std::uint64_t lo = words_[idx] >> off;
  if (off != 0 && idx + 1 < words_.size()) lo |= words_[idx + 1] << (64 - off);
  return lo;
}

std::uint64_t BitSequence::window(std::size_t pos, unsigned len) const noexcept {
  const std::uint64_t w = word_at(pos);
  return len >= 64 ? w : (w & ((std::uint64_t{1} << len) - 1));
}

bool BitSequence::windows_equal(std::size_t i, std::size_t j, std::size_t len) const noexcept {
  if (i == j) return true;
  std::size_t k = 0;
  for (; k + 64 <= len; k += 64) {
    if (word_at(i + k) != word_at(j + k)) return false;
  }
  if (k < len) {
    const unsigned rest = static_cast<unsigned>(len - k);
    return window(i + k, rest) == window(j + k, rest);
  }
  return true;
}

std::size_t BitSequence::common_prefix(std::size_t i, std::size_t j, std::size_t limit) const noexcept {
  const std::size_t hi = std::max(i, j);
  if (hi >= size_) return 0;
  limit = std::min(limit, size_ - hi);
  std::size_t k = 0;
  while (k < limit) {
    const std::uint64_t diff = word_at(i + k) ^ word_at(j + k);
    if (diff != 0) return std::min(limit, k + static_cast<std::size_t>(std::countr_zero(diff)));
    k += 64;
  }
  return limit;
}

int BitSequence::compare_windows(std::size_t i, std::size_t j, std::size_t len) const noexcept {
  for (std::size_t k = 0; k < len; k += 64) {
    const unsigned take = static_cast<unsigned>(std::min<std::size_t>(64, len - k));
    const std::uint64_t a = window(i + k, take);
    const std::uint64_t b = window(j + k, take);
    if (a != b) {
      // First differing letter decides.
      const unsigned p = static_cast<unsigned>(std::countr_zero(a ^ b));
      return ((a >> p) & 1U) ? 1 : -1;
    }
  }
  return 0;
}

BitSequence BitSequence::slice(std::size_t pos, std::size_t len) const {
  if (pos > size_ || len > size_ - pos) {
    throw DomainError("slice [" + std::to_string(pos) + ", " + std::to_string(pos + len) +
                      ") out of range for sequence of length " + std::to_string(size_));
  }
  BitSequence out(len);
  for (std::size_t k = 0; k < out.words_.size(); ++k) {
    out.words_[k] = word_at(pos + 64 * k);
  }
  if (len & 63) out.words_.back() &= (std::uint64_t{1} << (len & 63)) - 1;
  return out;
}

bool BitSequence::contains(Letter a) const noexcept {
  if (size_ == 0) return false;
  const std::size_t full = size_ >> 6;
  for (std::size_t k = 0; k < full; ++k) {
    if (a == Letter::One ? words_[k] != 0 : words_[k] != ~std::uint64_t{0}) return true;
  }
  if (size_ & 63) {
    const std::uint64_t mask = (std::uint64_t{1} << (size_ & 63)) - 1;
    const std::uint64_t w = words_[full] & mask;
    return a == Letter::One ? w != 0 : w != mask;
  }
  return false;
}

std::string BitSequence::to_string() const {
  std::string s(size_, '0');
  for (std::size_t i = 0; i < size_; ++i) s[i] = bit(i) ? '1' : '0';
  return s;
}

std::strong_ordering BitSequence::operator<=>(const BitSequence& other) const noexcept {
  if (auto c = size_ <=> other.size_; c != 0) return c;
  return words_ <=> other.words_;
}

std::size_t BitSequenceHash::operator()(const BitSequence& s) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ s.size();
  for (const std::uint64_t w : s.words()) {
    h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

}  // namespace subrqa
