#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "subrqa/bit_sequence.hpp"
#include "subrqa/rational.hpp"
#include "subrqa/recplot.hpp"

namespace subrqa {

enum class Provenance { Empirical, Asymptotic };

/// Whether n-boundary lines take part in the measures.
enum class BoundaryPolicy { Include, ExcludeNBoundary };

struct RQAReport {
  std::optional<std::size_t> n;  // absent means n = ∞
  std::size_t m = 1;
  std::size_t h = 1;
  std::size_t l_min = 1;
  /// p_l for the lengths l >= l_min present in the plot. Asymptotic reports
  /// carry only p_{l_min}.
  std::map<std::size_t, Rational> linedens;
  Rational lineDens;  // P_ℓ
  Rational RR;
  Rational RR_1;  // RR at ℓ = 1, the DET denominator
  std::optional<Rational> DET;
  std::optional<RationalOrInfinity> Lavg;
  std::optional<double> ENT;  // natural logarithm
  std::optional<Rational> C;
  Provenance provenance = Provenance::Empirical;
  std::vector<std::string> notes;
};

/// RR, DET, Lavg and ENT from a histogram; C is left absent.
RQAReport measures_from_histogram(const LineHistogram& hist, std::size_t ell,
                                  BoundaryPolicy policy = BoundaryPolicy::Include);

/// C_ℓ(x, n, 2^-h): fraction of ordered pairs (i, j) in [0,n)², diagonal
/// included, with equal (ℓ+h−1)-windows. Sorts packed windows, O(n log n).
Rational correlation_sum(const BitSequence& x, std::size_t n, std::size_t ell, std::size_t h);

/// (Σ_{l>=ℓ} (l−ℓ+1) N_l + n) / n² under the given boundary policy.
Rational corsum_main_term(const LineHistogram& hist, std::size_t ell,
                          BoundaryPolicy policy = BoundaryPolicy::Include);

struct CorsumDecomposition {
  Rational main_term;
  /// Δ_ℓ = n²·C_ℓ − n²·main_term.
  Rational triangle;
};

CorsumDecomposition corsum_from_histogram(const LineHistogram& hist, std::size_t ell, const Rational& corsum);

/// A main term together with the bound its residual must respect.
struct Estimate {
  Rational main_term;
  Rational residual_low;   // actual − main_term >= residual_low
  Rational residual_high;  // actual − main_term <= residual_high
  bool high_inclusive = true;

  bool admits(const Rational& actual) const;
};

/// RR_ℓ ≈ n/(n−1)·[ℓC_ℓ − (ℓ−1)C_{ℓ+1}] − 1/(n−1), |δ| <= 2ℓ(ℓ−1)/n.
Estimate rqa_from_corsum(const Rational& c_ell, const Rational& c_next, std::size_t n, std::size_t ell);
/// P_ℓ ≈ n/(n−1)·(C_ℓ − C_{ℓ+1}), |δ| <= 2ℓ/n.
Estimate linedens_from_corsum(const Rational& c_ell, const Rational& c_next, std::size_t n, std::size_t ell);
/// Quotient of the two main terms above; absent when the denominator is 0.
std::optional<Rational> lavg_from_corsum(const Rational& c_ell, const Rational& c_next, std::size_t n,
                                         std::size_t ell);
/// C_ℓ ≈ (n−1)/n·[RR_ℓ − (ℓ−1)P_ℓ], residual in [1/n, 2ℓ/n).
Estimate corsum_from_rqa(const Rational& rr, const Rational& line_dens, std::size_t n, std::size_t ell);

struct AsymptoticFromCorsum {
  Rational RR;
  std::optional<Rational> DET;
  std::optional<RationalOrInfinity> Lavg;
  Rational C;  // C_ℓ recovered as RR − (ℓ−1)·P_ℓ
};

/// Limits n → ∞: RR_ℓ = ℓC_ℓ − (ℓ−1)C_{ℓ+1}, Lavg_ℓ = ℓ + C_{ℓ+1}/(C_ℓ − C_{ℓ+1}).
AsymptoticFromCorsum asymptotic_from_corsum(const Rational& c1, const Rational& c_ell, const Rational& c_next,
                                            std::size_t ell);

/// Finite-n report for the m-dimensional embedding at 2^-h, computed on x at
/// h + m − 1. C follows the boundary policy: the true correlation sum when
/// boundary lines are included, the histogram main term otherwise.
RQAReport analyze_prefix(const BitSequence& x, std::size_t n, std::size_t m, std::size_t ell, std::size_t h,
                         BoundaryPolicy policy = BoundaryPolicy::Include);

/// Entropy of a line-length distribution given by densities (natural log).
double entropy_of(const std::map<std::size_t, Rational>& densities, const Rational& total);

std::string to_string(Provenance p);

}  // namespace subrqa
