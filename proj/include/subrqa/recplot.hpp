#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "subrqa/bit_sequence.hpp"
#include "subrqa/rational.hpp"

namespace subrqa {

enum BoundaryFlags : unsigned { kInner = 0, kZeroBoundary = 1, kNBoundary = 2 };

/// A maximal diagonal run (i, j, length) off the main diagonal.
struct LineTriple {
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t length = 0;
  unsigned boundary = kInner;

  bool zero_boundary() const noexcept { return boundary & kZeroBoundary; }
  bool n_boundary() const noexcept { return boundary & kNBoundary; }
  auto operator<=>(const LineTriple&) const = default;
};

/// Line counts at one length. The three classes partition the lines:
/// a line touching both edges is counted under n_boundary only.
struct LineCounts {
  std::uint64_t inner = 0;
  std::uint64_t zero_boundary = 0;
  std::uint64_t n_boundary = 0;

  std::uint64_t total() const noexcept { return inner + zero_boundary + n_boundary; }
  bool operator==(const LineCounts&) const = default;
};

struct LineHistogram {
  std::size_t n = 0;
  std::size_t h = 1;
  std::map<std::size_t, LineCounts> counts;

  bool operator==(const LineHistogram&) const = default;
};

/// RP(x, n, 2^-h)[i][j]: x[i, i+h) == x[j, j+h).
bool rp_entry(const BitSequence& x, std::size_t i, std::size_t j, std::size_t h);

/// Calls f(start, length, reaches_end) for every maximal run of letter
/// matches x[k] == x[k+d], k in [0, limit). Scans 64 positions per step.
void for_each_match_run(const BitSequence& x, std::size_t d, std::size_t limit,
                        const std::function<void(std::size_t, std::size_t, bool)>& f);

/// Every line of RP(x, n, 2^-h), both triangles, sorted.
std::vector<LineTriple> extract_lines(const BitSequence& x, std::size_t n, std::size_t h);

/// Line-length histogram of RP(x, n, 2^-h); lengths of every size recorded.
LineHistogram histogram(const BitSequence& x, std::size_t n, std::size_t h);

/// Total off-diagonal recurrences Σ ℓ·N_ℓ.
std::uint64_t recurrence_mass(const LineHistogram& hist);

/// ℓ-lines at 2^-h correspond to (ℓ+h−1)-lines of RP(x, n+h−1, 1/2).
std::pair<std::size_t, std::size_t> reduce_eps(std::size_t ell, std::size_t n, std::size_t h);

/// θ_{nh} = ((n+h−1)² − (n+h−1)) / (n² − n).
Rational theta(std::size_t n, std::size_t h);

/// ε' = 2^{−m+1}·ε; the m-dimensional embedding at ε is the plain plot at ε'.
double reduce_embedding(std::size_t m, double eps);
/// With ε = 2^-h: h' = h + m − 1.
std::size_t reduced_h(std::size_t m, std::size_t h);

/// h = ceil(−log2 ε) for ε in (0, 1); DomainError otherwise.
std::size_t quantize_eps(double eps);

/// Pairs (i, j), 1 <= i, j < n, i != j, starting an inner ℓ-line of the
/// infinite plot at 1/2. Requires |x| >= n + ℓ.
std::vector<std::pair<std::size_t, std::size_t>> inner_line_starts(const BitSequence& x, std::size_t ell,
                                                                   std::size_t n);

/// card(K_ℓ ∩ [1,n)²) for every ℓ in [1, max_len] in one pass.
/// Requires |x| >= n + max_len.
std::vector<std::uint64_t> inner_line_start_counts(const BitSequence& x, std::size_t n, std::size_t max_len);

/// '#' for a recurrence, '.' otherwise; row 0 printed first.
std::string render_ascii(const BitSequence& x, std::size_t n, std::size_t h);
/// Binary PGM (P5), 255 for a recurrence.
void render_pgm(std::ostream& out, const BitSequence& x, std::size_t n, std::size_t h);

}  // namespace subrqa
