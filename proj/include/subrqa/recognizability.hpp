#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "subrqa/rational.hpp"
#include "subrqa/substitution.hpp"

namespace subrqa {

/// Default cap for the prefix-doubling saturation protocol.
inline constexpr std::size_t kSaturationCap = std::size_t{1} << 24;

struct AlphaBeta {
  std::size_t alpha = 0;  // longest common prefix of ζ(0), ζ(1)
  std::size_t beta = 0;   // longest common suffix
  Rational c;             // (α+β)/(q−1)
};

/// Throws DomainError if ζ(0) == ζ(1).
AlphaBeta alpha_beta(const Substitution& s);

struct RecogConstants {
  std::size_t q = 0;
  std::size_t alpha = 0;
  std::size_t beta = 0;
  Rational c;
  std::size_t K = 0;   // recognizability index
  std::size_t R = 0;
  std::size_t R0 = 0;

  std::size_t alpha_plus_beta() const noexcept { return alpha + beta; }
  bool operator==(const RecogConstants&) const = default;
};

struct LanguageSlice {
  std::size_t length = 0;
  std::set<Word> words;
  bool saturated = false;
  /// Prefix length at which the word set stabilised.
  std::size_t prefix_length = 0;
};

/// Allowed words of length ℓ, collected from fixed-point prefixes of length
/// n, 2n, 4n, ... until two rounds agree. ResourceError past `cap`.
LanguageSlice language_slice(const Substitution& s, std::size_t ell, std::size_t cap = kSaturationCap);

/// The residue p_w if every occurrence of w in the fixed point is ≡ p_w
/// (mod q), nothing otherwise. Uses the same saturation protocol; throws
/// DomainError if w never occurs below the cap.
std::optional<std::size_t> is_recognizable_word(const Substitution& s, const Word& w,
                                                std::size_t cap = kSaturationCap);

/// Exact statistics of the language of a primitive substitution.
///
/// Every occurrence of a k-word w in x = ζ(x) sits at position qt+p inside
/// ζ(x[t, t+k'')) with k'' = ceil((k−1)/q)+1, so frequencies and residue
/// sets of k-words follow from those of k''-words. Letters come from the
/// Perron eigenvector and 2-words from a 4x4 linear system; everything is
/// exact.
class WordStatistics {
 public:
  struct Entry {
    Rational frequency;
    /// Bit p set iff w occurs at some position ≡ p (mod q).
    std::vector<bool> residues;

    std::optional<std::size_t> unique_residue() const;
  };

  /// Requires a primitive substitution.
  explicit WordStatistics(Substitution s);

  const Substitution& substitution() const noexcept { return s_; }

  /// All words of length k with positive frequency.
  const std::map<Word, Entry>& words(std::size_t k);

  Rational frequency(const Word& w);

 private:
  Substitution s_;
  std::map<std::size_t, std::map<Word, Entry>> by_length_;

  void build(std::size_t k);
};

/// Computes α, β, c, K, R and R0 from the exact language and validates
/// K+1 <= R <= K+q. Requires a primitive aperiodic substitution whose image
/// of 0 starts with 0.
RecogConstants recognizability_constants(const Substitution& s);

/// Same constants from the saturated prefix scans (independent route).
RecogConstants recognizability_constants_scanned(const Substitution& s, std::size_t cap = kSaturationCap);

/// Smallest positive R0 with R0·q + α + β >= R.
std::size_t compute_R0(std::size_t q, std::size_t alpha_plus_beta, std::size_t R);

}  // namespace subrqa
