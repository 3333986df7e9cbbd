#include "subrqa/rqa.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "subrqa/errors.hpp"

namespace subrqa {

namespace {

Rational ratio(const Integer& num, const Integer& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Integer as_integer(std::uint64_t v) { return Integer(static_cast<unsigned long>(v)); }

std::uint64_t counted(const LineCounts& c, BoundaryPolicy policy) {
  return policy == BoundaryPolicy::Include ? c.total() : c.inner + c.zero_boundary;
}

}  // namespace

double entropy_of(const std::map<std::size_t, Rational>& densities, const Rational& total) {
  double ent = 0;
  for (const auto& [len, p] : densities) {
    if (p == 0) continue;
    const double share = to_double(Rational(p / total));
    ent -= share * std::log(share);
  }
  return ent;
}

RQAReport measures_from_histogram(const LineHistogram& hist, std::size_t ell, BoundaryPolicy policy) {
  if (ell == 0) throw DomainError("measures_from_histogram: ℓ must be at least 1");
  if (hist.n < 2) throw DomainError("measures_from_histogram: n must be at least 2");
  const Integer nn = as_integer(hist.n);
  const Integer area = nn * nn - nn;

  RQAReport r;
  r.n = hist.n;
  r.h = hist.h;
  r.l_min = ell;
  r.provenance = Provenance::Empirical;
  Integer mass_all = 0, mass_tail = 0, lines_tail = 0;
  for (const auto& [len, c] : hist.counts) {
    const Integer k = as_integer(counted(c, policy));
    if (k == 0) continue;
    mass_all += as_integer(len) * k;
    if (len >= ell) {
      mass_tail += as_integer(len) * k;
      lines_tail += k;
      r.linedens[len] = ratio(k, area);
    }
  }
  r.RR = ratio(mass_tail, area);
  r.lineDens = ratio(lines_tail, area);
  r.RR_1 = ratio(mass_all, area);
  if (mass_all != 0) r.DET = ratio(mass_tail, mass_all);
  if (lines_tail != 0) {
    r.Lavg = RationalOrInfinity::finite(ratio(mass_tail, lines_tail));
    r.ENT = entropy_of(r.linedens, r.lineDens);
  }
  if (policy == BoundaryPolicy::ExcludeNBoundary) r.notes.push_back("n-boundary lines excluded");
  return r;
}

Rational correlation_sum(const BitSequence& x, std::size_t n, std::size_t ell, std::size_t h) {
  if (ell == 0 || h == 0) throw DomainError("correlation_sum: ℓ and h must be at least 1");
  if (n == 0) throw DomainError("correlation_sum: n must be positive");
  const std::size_t len = ell + h - 1;
  if (x.size() < n + len - 1) {
    throw DomainError("correlation_sum: prefix of length " + std::to_string(x.size()) + " is too short (need " +
                      std::to_string(n + len - 1) + ")");
  }
  Integer sum = 0;
  auto add_class = [&](std::uint64_t size) { sum += as_integer(size) * as_integer(size); };
  if (len <= 64) {
    std::vector<std::uint64_t> keys(n);
    for (std::size_t i = 0; i < n; ++i) keys[i] = x.window(i, static_cast<unsigned>(len));
    std::sort(keys.begin(), keys.end());
    for (std::size_t i = 0; i < n;) {
      std::size_t j = i;
      while (j < n && keys[j] == keys[i]) ++j;
      add_class(j - i);
      i = j;
    }
  } else {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return x.compare_windows(a, b, len) < 0; });
    for (std::size_t i = 0; i < n;) {
      std::size_t j = i;
      while (j < n && x.windows_equal(idx[i], idx[j], len)) ++j;
      add_class(j - i);
      i = j;
    }
  }
  const Integer nn = as_integer(n);
  return ratio(sum, nn * nn);
}

Rational corsum_main_term(const LineHistogram& hist, std::size_t ell, BoundaryPolicy policy) {
  if (ell == 0) throw DomainError("corsum_main_term: ℓ must be at least 1");
  Integer acc = as_integer(hist.n);
  for (const auto& [len, c] : hist.counts) {
    if (len >= ell) acc += as_integer(len - ell + 1) * as_integer(counted(c, policy));
  }
  const Integer nn = as_integer(hist.n);
  return ratio(acc, nn * nn);
}

CorsumDecomposition corsum_from_histogram(const LineHistogram& hist, std::size_t ell, const Rational& corsum) {
  CorsumDecomposition d;
  d.main_term = corsum_main_term(hist, ell);
  const Integer nn = as_integer(hist.n);
  d.triangle = Rational(nn * nn) * (corsum - d.main_term);
  return d;
}

bool Estimate::admits(const Rational& actual) const {
  const Rational delta = actual - main_term;
  if (delta < residual_low) return false;
  return high_inclusive ? delta <= residual_high : delta < residual_high;
}

namespace {

void require_n(std::size_t n, const char* who) {
  if (n < 2) throw DomainError(std::string(who) + ": n must be at least 2");
}

}  // namespace

Estimate rqa_from_corsum(const Rational& c_ell, const Rational& c_next, std::size_t n, std::size_t ell) {
  require_n(n, "rqa_from_corsum");
  const Rational nr(as_integer(n));
  const Rational l(as_integer(ell));
  Estimate e;
  e.main_term = nr / (nr - 1) * (l * c_ell - (l - 1) * c_next) - 1 / (nr - 1);
  e.residual_high = 2 * l * (l - 1) / nr;
  e.residual_low = -e.residual_high;
  return e;
}

Estimate linedens_from_corsum(const Rational& c_ell, const Rational& c_next, std::size_t n, std::size_t ell) {
  require_n(n, "linedens_from_corsum");
  const Rational nr(as_integer(n));
  Estimate e;
  e.main_term = nr / (nr - 1) * (c_ell - c_next);
  e.residual_high = 2 * Rational(as_integer(ell)) / nr;
  e.residual_low = -e.residual_high;
  return e;
}

std::optional<Rational> lavg_from_corsum(const Rational& c_ell, const Rational& c_next, std::size_t n,
                                         std::size_t ell) {
  const Rational den = linedens_from_corsum(c_ell, c_next, n, ell).main_term;
  if (den == 0) return std::nullopt;
  return Rational(rqa_from_corsum(c_ell, c_next, n, ell).main_term / den);
}

Estimate corsum_from_rqa(const Rational& rr, const Rational& line_dens, std::size_t n, std::size_t ell) {
  require_n(n, "corsum_from_rqa");
  const Rational nr(as_integer(n));
  const Rational l(as_integer(ell));
  Estimate e;
  e.main_term = (nr - 1) / nr * (rr - (l - 1) * line_dens);
  e.residual_low = 1 / nr;
  e.residual_high = 2 * l / nr;
  e.high_inclusive = false;
  return e;
}

AsymptoticFromCorsum asymptotic_from_corsum(const Rational& c1, const Rational& c_ell, const Rational& c_next,
                                            std::size_t ell) {
  if (ell == 0) throw DomainError("asymptotic_from_corsum: ℓ must be at least 1");
  const Rational l(as_integer(ell));
  AsymptoticFromCorsum a;
  a.RR = l * c_ell - (l - 1) * c_next;
  if (c1 != 0) a.DET = Rational(a.RR / c1);
  const Rational p = c_ell - c_next;
  if (p != 0) {
    a.Lavg = RationalOrInfinity::finite(l + c_next / p);
  } else if (c_ell != 0) {
    a.Lavg = RationalOrInfinity::infinity();
  }
  a.C = a.RR - (l - 1) * p;
  return a;
}

RQAReport analyze_prefix(const BitSequence& x, std::size_t n, std::size_t m, std::size_t ell, std::size_t h,
                         BoundaryPolicy policy) {
  const std::size_t hp = reduced_h(m, h);
  const LineHistogram hist = histogram(x, n, hp);
  RQAReport r = measures_from_histogram(hist, ell, policy);
  r.m = m;
  r.h = h;
  r.C = policy == BoundaryPolicy::Include ? correlation_sum(x, n, ell, hp) : corsum_main_term(hist, ell, policy);
  return r;
}

std::string to_string(Provenance p) { return p == Provenance::Empirical ? "empirical" : "asymptotic"; }

}  // namespace subrqa
