#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace subrqa {

enum class Letter : std::uint8_t { Zero = 0, One = 1 };

constexpr Letter flip(Letter a) { return a == Letter::Zero ? Letter::One : Letter::Zero; }
constexpr int to_int(Letter a) { return static_cast<int>(a); }
constexpr Letter letter_of(int bit) { return bit ? Letter::One : Letter::Zero; }

/// Binary string packed one letter per bit, 64 letters per machine word.
///
/// Letter i lives in bit (i % 64) of word (i / 64). Bits past size() are
/// kept at zero so that word-level comparisons never see garbage.
class BitSequence {
 public:
  BitSequence() = default;
  explicit BitSequence(std::size_t length);

  /// Builds from a string over {'0','1'}; throws ParseError otherwise.
  static BitSequence from_string(std::string_view text);

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  int bit(std::size_t i) const noexcept { return static_cast<int>((words_[i >> 6] >> (i & 63)) & 1U); }
  Letter operator[](std::size_t i) const noexcept { return letter_of(bit(i)); }
  /// Bounds-checked access; throws DomainError when i >= size().
  Letter at(std::size_t i) const;

  void set(std::size_t i, int value) noexcept {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= mask;
    } else {
      words_[i >> 6] &= ~mask;
    }
  }
  void push_back(Letter a);
  void append(const BitSequence& other);
  void reserve(std::size_t letters) { words_.reserve((letters + 63) / 64); }
  /// Shrinks to the first `length` letters.
  void truncate(std::size_t length);

  /// The 64 letters starting at `pos` (letter pos in bit 0); letters past
  /// the end read as 0.
  std::uint64_t word_at(std::size_t pos) const noexcept;

  /// Letters [pos, pos+len) packed into the low bits; len <= 64.
  std::uint64_t window(std::size_t pos, unsigned len) const noexcept;

  bool windows_equal(std::size_t i, std::size_t j, std::size_t len) const noexcept;
  /// Length of the longest common prefix of the windows starting at i and j,
  /// capped at `limit` (and at the end of the sequence).
  std::size_t common_prefix(std::size_t i, std::size_t j, std::size_t limit) const noexcept;
  /// Total order on windows of length len, consistent with windows_equal.
  int compare_windows(std::size_t i, std::size_t j, std::size_t len) const noexcept;

  BitSequence slice(std::size_t pos, std::size_t len) const;
  bool contains(Letter a) const noexcept;
  std::string to_string() const;

  std::span<const std::uint64_t> words() const noexcept { return words_; }

  bool operator==(const BitSequence& other) const noexcept {
    return size_ == other.size_ && words_ == other.words_;
  }
  /// Shortlex-like order: by length, then by packed words.
  std::strong_ordering operator<=>(const BitSequence& other) const noexcept;

 private:
  std::vector<std::uint64_t> words_;
  std::size_t size_ = 0;
};

/// Finite words over {0,1} share the packed representation.
using Word = BitSequence;

struct BitSequenceHash {
  std::size_t operator()(const BitSequence& s) const noexcept;
};

}  // namespace subrqa
