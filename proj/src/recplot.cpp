#include "subrqa/recplot.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "subrqa/errors.hpp"

namespace subrqa {

namespace {

void require_prefix(const BitSequence& x, std::size_t needed, const char* who) {
  if (x.size() < needed) {
    throw DomainError(std::string(who) + ": prefix of length " + std::to_string(x.size()) + " is too short (need " +
                      std::to_string(needed) + ")");
  }
}

}  // namespace

bool rp_entry(const BitSequence& x, std::size_t i, std::size_t j, std::size_t h) {
  require_prefix(x, std::max(i, j) + h, "rp_entry");
  return x.windows_equal(i, j, h);
}

void for_each_match_run(const BitSequence& x, std::size_t d, std::size_t limit,
                        const std::function<void(std::size_t, std::size_t, bool)>& f) {
  bool in_run = false;
  std::size_t start = 0;
  for (std::size_t k = 0; k < limit; k += 64) {
    const unsigned avail = static_cast<unsigned>(std::min<std::size_t>(64, limit - k));
    std::uint64_t eq = ~(x.word_at(k) ^ x.word_at(k + d));
    if (avail < 64) eq &= (std::uint64_t{1} << avail) - 1;
    unsigned pos = 0;
    while (pos < avail) {
      const std::uint64_t rest = eq >> pos;
      if (in_run) {
        const unsigned ones = static_cast<unsigned>(std::countr_one(rest));
        if (pos + ones >= avail) break;
        pos += ones;
        f(start, k + pos - start, false);
        in_run = false;
      } else {
        const unsigned zeros = static_cast<unsigned>(std::countr_zero(rest));
        if (pos + zeros >= avail) break;
        pos += zeros;
        in_run = true;
        start = k + pos;
      }
    }
  }
  if (in_run) f(start, limit - start, true);
}

namespace {

// Visits each line of the upper triangle as (i, d, length, flags).
template <class Visit>
void scan_upper_lines(const BitSequence& x, std::size_t n, std::size_t h, Visit&& visit) {
  if (h == 0) throw DomainError("h must be at least 1");
  if (n < 1) return;
  const std::size_t np = n + h - 1;
  require_prefix(x, np, "extract_lines");
  for (std::size_t d = 1; d < n; ++d) {
    for_each_match_run(x, d, np - d, [&](std::size_t start, std::size_t len, bool reaches_end) {
      if (len < h) return;
      unsigned flags = kInner;
      if (start == 0) flags |= kZeroBoundary;
      if (reaches_end) flags |= kNBoundary;
      visit(start, d, len - h + 1, flags);
    });
  }
}

}  // namespace

std::vector<LineTriple> extract_lines(const BitSequence& x, std::size_t n, std::size_t h) {
  std::vector<LineTriple> lines;
  scan_upper_lines(x, n, h, [&](std::size_t i, std::size_t d, std::size_t len, unsigned flags) {
    lines.push_back({i, i + d, len, flags});
    lines.push_back({i + d, i, len, flags});
  });
  std::sort(lines.begin(), lines.end());
  return lines;
}

LineHistogram histogram(const BitSequence& x, std::size_t n, std::size_t h) {
  LineHistogram hist;
  hist.n = n;
  hist.h = h;
  scan_upper_lines(x, n, h, [&](std::size_t, std::size_t, std::size_t len, unsigned flags) {
    LineCounts& c = hist.counts[len];
    if (flags & kNBoundary) {
      c.n_boundary += 2;
    } else if (flags & kZeroBoundary) {
      c.zero_boundary += 2;
    } else {
      c.inner += 2;
    }
  });
  return hist;
}

std::uint64_t recurrence_mass(const LineHistogram& hist) {
  std::uint64_t mass = 0;
  for (const auto& [len, c] : hist.counts) mass += len * c.total();
  return mass;
}

std::pair<std::size_t, std::size_t> reduce_eps(std::size_t ell, std::size_t n, std::size_t h) {
  if (h == 0) throw DomainError("reduce_eps: h must be at least 1");
  return {ell + h - 1, n + h - 1};
}

Rational theta(std::size_t n, std::size_t h) {
  if (n < 2 || h == 0) throw DomainError("theta: need n >= 2 and h >= 1");
  const Integer np(static_cast<unsigned long>(n + h - 1));
  const Integer nn(static_cast<unsigned long>(n));
  Rational t(np * np - np, nn * nn - nn);
  t.canonicalize();
  return t;
}

double reduce_embedding(std::size_t m, double eps) {
  if (m == 0) throw DomainError("reduce_embedding: m must be at least 1");
  if (!(eps > 0 && eps < 1)) throw DomainError("reduce_embedding: eps must lie in (0, 1)");
  return std::ldexp(eps, -static_cast<int>(m - 1));
}

std::size_t reduced_h(std::size_t m, std::size_t h) {
  if (m == 0 || h == 0) throw DomainError("reduced_h: m and h must be at least 1");
  return h + m - 1;
}

std::size_t quantize_eps(double eps) {
  if (!(eps > 0 && eps < 1)) throw DomainError("eps must lie in (0, 1)");
  // eps = f·2^e with f in [0.5, 1), so −log2 eps lies in (−e, 1−e].
  int exponent = 0;
  std::frexp(eps, &exponent);
  return static_cast<std::size_t>(1 - exponent);
}

namespace {

template <class Visit>
void scan_inner_starts(const BitSequence& x, std::size_t n, std::size_t max_len, Visit&& visit) {
  require_prefix(x, n + max_len, "inner_line_starts");
  for (std::size_t d = 1; d < n; ++d) {
    for_each_match_run(x, d, n - d + max_len, [&](std::size_t start, std::size_t len, bool reaches_end) {
      if (reaches_end || start == 0 || start >= n - d || len > max_len) return;
      visit(start, d, len);
    });
  }
}

}  // namespace

std::vector<std::pair<std::size_t, std::size_t>> inner_line_starts(const BitSequence& x, std::size_t ell,
                                                                   std::size_t n) {
  if (ell == 0) throw DomainError("inner_line_starts: length must be positive");
  std::vector<std::pair<std::size_t, std::size_t>> out;
  scan_inner_starts(x, n, ell, [&](std::size_t i, std::size_t d, std::size_t len) {
    if (len != ell) return;
    out.emplace_back(i, i + d);
    out.emplace_back(i + d, i);
  });
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::uint64_t> inner_line_start_counts(const BitSequence& x, std::size_t n, std::size_t max_len) {
  std::vector<std::uint64_t> counts(max_len + 1, 0);
  scan_inner_starts(x, n, max_len, [&](std::size_t, std::size_t, std::size_t len) { counts[len] += 2; });
  return counts;
}

std::string render_ascii(const BitSequence& x, std::size_t n, std::size_t h) {
  require_prefix(x, n + h - 1, "render");
  std::string out;
  out.reserve(n * (n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out.push_back(x.windows_equal(i, j, h) ? '#' : '.');
    out.push_back('\n');
  }
  return out;
}

void render_pgm(std::ostream& out, const BitSequence& x, std::size_t n, std::size_t h) {
  require_prefix(x, n + h - 1, "render");
  out << "P5\n" << n << ' ' << n << "\n255\n";
  std::string row(n, '\0');
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) row[j] = x.windows_equal(i, j, h) ? '\xff' : '\0';
    out.write(row.data(), static_cast<std::streamsize>(n));
  }
}

}  // namespace subrqa
