#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "subrqa/densities.hpp"
#include "subrqa/rational.hpp"
#include "subrqa/rqa.hpp"
#include "subrqa/substitution.hpp"

namespace subrqa {

/// Exact limits n → ∞ for the m-dimensional embedding at ε = 2^-h.
struct AsymptoticQuantifiers {
  std::size_t m = 1;
  std::size_t ell = 1;
  std::size_t h = 1;
  std::size_t ell_prime = 1;  // ℓ + m + h − 2
  Rational linedens;
  Rational lineDens;
  Rational RR;
  Rational RR_1;  // RR at ℓ = 1, the DET denominator
  std::optional<Rational> DET;
  std::optional<RationalOrInfinity> Lavg;
  Rational C;
  std::optional<double> ENT;
  std::vector<std::string> notes;
};

/// Infinite sums over the support of dens(K_l), l >= ℓ', grouped into
/// geometric orbits and summed in closed form. This is the reference path.
AsymptoticQuantifiers quantifiers_via_sums(const DensityTable& table, std::size_t m, std::size_t ell, std::size_t h);

/// ν^ω_ℓ for ℓ in [R0, R] and ω in {N, RR, ENT}.
struct NuTables {
  std::map<std::size_t, Rational> N;
  std::map<std::size_t, Rational> RR;
  std::map<std::size_t, double> ENT;
  std::size_t R = 0;

  Rational tilde_N(std::size_t ell) const { return N.at(R) - N.at(ell); }
  Rational tilde_RR(std::size_t ell) const { return RR.at(R) - RR.at(ell); }
  double tilde_ENT(std::size_t ell) const { return ENT.at(R) - ENT.at(ell); }
};

NuTables nu_tables(const DensityTable& table);

/// Closed forms in the ν-tables at (j, ℓ0), peeling down below R0. Throws
/// DiscrepancyError unless the result matches quantifiers_via_sums exactly
/// (ENT within 1e−9).
AsymptoticQuantifiers closed_form(const DensityTable& table, std::size_t m, std::size_t ell, std::size_t h);

/// Closed forms without the cross-check.
AsymptoticQuantifiers closed_form_unchecked(const DensityTable& table, std::size_t m, std::size_t ell, std::size_t h);

/// C = RR = DET = 1, Lavg = ∞, ENT absent. Rejects primitive inputs.
AsymptoticQuantifiers nonprimitive_quantifiers(const Classification& cls, std::size_t m, std::size_t ell,
                                               std::size_t h);

/// Smallest period of the purely periodic sequence generated by s.
std::size_t fixed_point_period(const Substitution& s);

/// Exact quantifiers for a periodic fixed point of period p: diagonals
/// j − i ≡ 0 (mod p) are infinite lines carrying 1/p of the recurrences;
/// every other residue class contributes its cyclic runs with weight 1/p².
AsymptoticQuantifiers periodic_quantifiers(const Substitution& s, const Classification& cls, std::size_t m,
                                           std::size_t ell, std::size_t h);

struct AsymptoticOptions {
  ReconstructionOptions reconstruction;
  bool use_cache = true;
};

/// Dispatch on the classification. Primitive aperiodic inputs are
/// normalized first and go through closed_form.
AsymptoticQuantifiers asymptotic_quantifiers(const Substitution& s, std::size_t m, std::size_t ell, std::size_t h,
                                             const AsymptoticOptions& options = {});

struct DetScanRow {
  std::size_t h = 0;
  Rational DET;
  /// ℓ(ℓ−1)q²/h.
  double envelope = 0;
};

std::vector<DetScanRow> determinism_limit_scan(const Substitution& s, std::size_t m, std::size_t ell,
                                               std::size_t h_first, std::size_t h_last,
                                               const AsymptoticOptions& options = {});

RQAReport to_report(const AsymptoticQuantifiers& a);

}  // namespace subrqa
