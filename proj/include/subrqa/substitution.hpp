#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "subrqa/bit_sequence.hpp"

namespace subrqa {

/// Default cap on generated words and prefixes, in letters.
inline constexpr std::size_t kDefaultSizeCap = std::size_t{1} << 26;

/// Binary substitution of constant length q >= 2.
class Substitution {
 public:
  /// Throws DomainError unless both images have the same length q >= 2.
  Substitution(Word image0, Word image1);

  /// Parses "0->01,1->10" (whitespace ignored, clauses in either order).
  static Substitution parse(std::string_view spec);

  const Word& image(Letter a) const noexcept { return a == Letter::Zero ? image0_ : image1_; }
  const Word& image0() const noexcept { return image0_; }
  const Word& image1() const noexcept { return image1_; }
  std::size_t q() const noexcept { return image0_.size(); }

  /// ζ∘ζ.
  Substitution squared() const;
  /// Conjugate by the relabelling 0 <-> 1.
  Substitution letter_swapped() const;

  std::string to_string() const;

  bool operator==(const Substitution&) const = default;

 private:
  Word image0_;
  Word image1_;
};

/// ζ(w): concatenation of the images of the letters of w.
Word apply(const Substitution& s, const Word& w);

/// ζ^k(a). Throws ResourceError if q^k exceeds `cap`.
Word iterate(const Substitution& s, Letter a, unsigned k, std::size_t cap = kDefaultSizeCap);

enum class Normalization { Identity, LetterSwap, Square };

struct NormalizedSubstitution {
  Substitution substitution;
  Normalization tag;
};

/// Rewrites a primitive substitution so that the image of 0 starts with 0.
NormalizedSubstitution normalize(const Substitution& s);

/// First n letters of the fixed point ζ^∞(0). The image of 0 must start
/// with 0 (DomainError otherwise); ResourceError if n exceeds `cap`.
BitSequence fixed_point_prefix(const Substitution& s, std::size_t n, std::size_t cap = kDefaultSizeCap);

/// Prefix of a canonical sequence of X_ζ for any substitution: the fixed
/// point starting with 0 if ζ(0) starts with 0, else the one starting with 1,
/// else the fixed point of ζ² starting with 0.
BitSequence generating_prefix(const Substitution& s, std::size_t n, std::size_t cap = kDefaultSizeCap);

enum class SubstitutionKind { PrimitiveAperiodic, PrimitivePeriodic, NonPrimitiveProximal, NonPrimitiveTrivial };

struct Classification {
  SubstitutionKind kind;
  Normalization normalization = Normalization::Identity;
  /// The letter a with ζ(a) = a^q; present only for NonPrimitiveProximal.
  std::optional<Letter> absorbing_letter;

  bool primitive() const noexcept {
    return kind == SubstitutionKind::PrimitiveAperiodic || kind == SubstitutionKind::PrimitivePeriodic;
  }
};

/// Primitivity of a binary substitution: ζ²(a) contains both letters for
/// both a.
bool is_primitive(const Substitution& s);

Classification classify(const Substitution& s);

std::string to_string(SubstitutionKind kind);
std::string to_string(Normalization tag);

}  // namespace subrqa
