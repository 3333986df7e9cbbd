#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "subrqa/bit_sequence.hpp"
#include "subrqa/rational.hpp"
#include "subrqa/recognizability.hpp"
#include "subrqa/substitution.hpp"

namespace subrqa {

/// How base densities dens(K_ℓ0), ℓ0 < R, are obtained.
enum class DensityMethod {
  /// Σ_w f(w)·f(w̄) over (ℓ0+2)-words w, w̄ flipping the first and last
  /// letter, with exact word frequencies; checked against empirical counts.
  Exact,
  /// Two-scale empirical estimate snapped to the simplest nearby rational.
  Snap,
};

struct ReconstructionOptions {
  DensityMethod method = DensityMethod::Exact;
  std::size_t n1 = std::size_t{1} << 12;
  std::size_t n2 = std::size_t{1} << 13;
  /// Tolerance at scale n is tolerance_factor / n.
  double tolerance_factor = 16.0;
  /// Snap only: denominators above max_den_factor·q^6 are rejected.
  unsigned max_den_factor = 4;
};

/// What was measured for one base length.
struct DensityEvidence {
  std::size_t ell0 = 0;
  std::vector<std::size_t> scales;
  std::vector<Rational> empirical;
  std::vector<double> tolerances;
  /// Child length qℓ0+α+β and its empirical δ at the larger scale, when the
  /// scaling cross-check applies (ℓ0 >= R0, nonzero density).
  std::optional<std::size_t> child;
  std::optional<Rational> child_empirical;
};

struct DensityTable {
  Substitution subst;
  RecogConstants constants;
  DensityMethod method = DensityMethod::Exact;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  std::map<std::size_t, Rational> base;  // ℓ0 in [1, R)
  std::vector<DensityEvidence> evidence;
};

struct Decomposition {
  std::size_t ell = 0;
  std::size_t k = 0;
  std::size_t ell0 = 0;
  bool valid = false;
};

/// card(K_ℓ ∩ [1,n)²) / (n² − n). Requires |x| >= n + ℓ.
Rational empirical_delta(const BitSequence& x, std::size_t ell, std::size_t n);

/// dens(K_ℓ) computed directly from exact word frequencies (any ℓ >= 1).
Rational exact_density(WordStatistics& stats, std::size_t ell);

/// Base densities for a primitive aperiodic normalized substitution.
/// Throws ReconstructionError naming the first base length that fails.
DensityTable reconstruct_base(const Substitution& s, const ReconstructionOptions& options = {});

/// Inverse of ℓ ↦ qℓ + α + β down to a base length below R. Requires ℓ >= R.
Decomposition decompose(const RecogConstants& rc, std::size_t ell);

/// dens(K_ℓ) from the table and the scaling law.
Rational dens_K(const DensityTable& table, std::size_t ell);

/// q^k(ℓ0 + c) − c: the k-th length in the orbit of the base length ℓ0.
Integer orbit_length(const RecogConstants& rc, std::size_t ell0, unsigned k);

/// (j, ℓ0) for ℓ' >= R0: j smallest with (R−1)q^j + c(q^j−1) >= ℓ', then ℓ0
/// smallest in [R0, R) with ℓ0·q^j + c(q^j−1) >= ℓ'.
std::pair<std::size_t, std::size_t> closed_form_indices(const RecogConstants& rc, std::size_t ell_prime);

std::string to_string(DensityMethod m);
DensityMethod density_method_from_string(const std::string& s);

std::string describe(const DensityTable& table, std::size_t ell_max = 0);

/// Default cache directory: $SUBRQA_CACHE_DIR, else $XDG_CACHE_HOME/subrqa,
/// else $HOME/.cache/subrqa.
std::filesystem::path default_cache_dir();

/// reconstruct_base with an on-disk cache keyed by substitution, method and
/// scales. Unreadable cache entries are recomputed.
DensityTable load_or_reconstruct(const Substitution& s, const ReconstructionOptions& options = {},
                                 bool use_cache = true);

}  // namespace subrqa
