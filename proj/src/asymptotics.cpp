#include "subrqa/asymptotics.hpp"

#include <cmath>

#include "subrqa/errors.hpp"
#include "subrqa/recplot.hpp"

namespace subrqa {

namespace {

Rational rat(std::size_t v) { return Rational(Integer(static_cast<unsigned long>(v))); }

Rational inv_pow(std::size_t q, std::size_t k) { return Rational(1) / Rational(ipow(q, static_cast<unsigned>(k))); }

double log_of(const Rational& r) {
  // Logs of numerator and denominator separately keep tiny densities exact
  // to double precision.
  long e_num = 0, e_den = 0;
  const double num = mpz_get_d_2exp(&e_num, r.get_num_mpz_t());
  const double den = mpz_get_d_2exp(&e_den, r.get_den_mpz_t());
  return std::log(num) - std::log(den) + static_cast<double>(e_num - e_den) * std::log(2.0);
}

double neg_d_log_d(const Rational& d) { return d == 0 ? 0.0 : -to_double(d) * log_of(d); }

void require_params(std::size_t m, std::size_t ell, std::size_t h) {
  if (m == 0 || ell == 0 || h == 0) throw DomainError("m, ℓ and h must all be at least 1");
}

// Σ d_l, Σ l·d_l and −Σ d_l log d_l over l >= ell_prime.
struct Tail {
  Rational P;
  Rational LD;
  double E = 0;
};

Tail tail_sums(const DensityTable& table, std::size_t ell_prime) {
  const RecogConstants& rc = table.constants;
  const std::size_t q = rc.q;
  const Rational x = inv_pow(q, 2);
  const Rational qr = rat(q);
  const double log_q = std::log(static_cast<double>(q));
  Tail t;
  for (const auto& [l, d] : table.base) {
    if (d == 0) continue;
    if (l < rc.R0) {
      if (l >= ell_prime) {
        t.P += d;
        t.LD += rat(l) * d;
        t.E += neg_d_log_d(d);
      }
      continue;
    }
    std::size_t J = 0;
    while (orbit_length(rc, l, static_cast<unsigned>(J)) < Integer(static_cast<unsigned long>(ell_prime))) ++J;
    const Rational xJ = inv_pow(q, 2 * J);
    const Rational geo2 = xJ / (1 - x);                   // Σ_{k>=J} q^{−2k}
    const Rational geo1 = inv_pow(q, J) * qr / (qr - 1);  // Σ_{k>=J} q^{−k}
    const Rational Jr = rat(J);
    const Rational arith = (Jr * xJ - (Jr - 1) * xJ * x) / ((1 - x) * (1 - x));  // Σ_{k>=J} k q^{−2k}
    t.P += d * geo2;
    t.LD += d * ((rat(l) + rc.c) * geo1 - rc.c * geo2);
    t.E += to_double(d) * (-log_of(d) * to_double(geo2) + 2 * log_q * to_double(arith));
  }
  return t;
}

// Fills the derived quantities from tails at ℓ' and at ℓ'_1 = m+h−1.
AsymptoticQuantifiers assemble(std::size_t m, std::size_t ell, std::size_t h, const Rational& linedens,
                               const Tail& at, const Tail& at_one) {
  AsymptoticQuantifiers a;
  a.m = m;
  a.ell = ell;
  a.h = h;
  a.ell_prime = ell + m + h - 2;
  const Rational s = rat(m + h - 2);
  a.linedens = linedens;
  a.lineDens = at.P;
  a.RR = at.LD - s * at.P;
  const Rational rr1 = at_one.LD - s * at_one.P;
  a.RR_1 = rr1;
  if (rr1 != 0) a.DET = Rational(a.RR / rr1);
  if (at.P != 0) {
    a.Lavg = RationalOrInfinity::finite(a.RR / at.P);
    a.ENT = log_of(at.P) + at.E / to_double(at.P);
  } else if (a.RR != 0) {
    a.Lavg = RationalOrInfinity::infinity();
  }
  a.C = a.RR - rat(ell - 1) * at.P;
  a.notes.push_back("ENT refers to the fixed point starting with 0");
  return a;
}

}  // namespace

AsymptoticQuantifiers quantifiers_via_sums(const DensityTable& table, std::size_t m, std::size_t ell, std::size_t h) {
  require_params(m, ell, h);
  const std::size_t lp = ell + m + h - 2;
  return assemble(m, ell, h, dens_K(table, lp), tail_sums(table, lp), tail_sums(table, m + h - 1));
}

NuTables nu_tables(const DensityTable& table) {
  const RecogConstants& rc = table.constants;
  NuTables nu;
  nu.R = rc.R;
  Rational n = 0, r = 0;
  double e = 0;
  for (std::size_t l = rc.R0; l <= rc.R; ++l) {
    nu.N[l] = n;
    nu.RR[l] = r;
    nu.ENT[l] = e;
    if (l == rc.R) break;
    const Rational& d = table.base.at(l);
    n += d;
    r += rat(l) * d;
    e += neg_d_log_d(d);
  }
  return nu;
}

namespace {

// Closed form at ℓ' >= R0 expressed as a Tail, plus linedens.
std::pair<Tail, Rational> closed_tail(const DensityTable& table, const NuTables& nu, std::size_t ell_prime) {
  const RecogConstants& rc = table.constants;
  const std::size_t q = rc.q;
  const Rational qr = rat(q), q2 = qr * qr;
  const auto [j, l0] = closed_form_indices(rc, ell_prime);
  const Rational q2j = Rational(ipow(q, static_cast<unsigned>(2 * j)));
  const Rational qj = Rational(ipow(q, static_cast<unsigned>(j)));
  const Rational vN = nu.N.at(l0), tN = nu.tilde_N(l0);
  const Rational vR = nu.RR.at(l0), tR = nu.tilde_RR(l0);

  Tail t;
  t.P = (vN + q2 * tN) / (q2j * (q2 - 1));
  // Σ l·d_l; subtracting (c + m + h − 2)·lineDens afterwards gives RR.
  t.LD = (vR + qr * tR + rc.c * (vN + qr * tN)) / (qj * (qr - 1)) - rc.c * t.P;
  const double jd = static_cast<double>(j), qd = static_cast<double>(q), qd2 = qd * qd;
  const double scale = 1.0 / (to_double(q2j));
  t.E = 2 * std::log(qd) * scale / ((qd2 - 1) * (qd2 - 1)) *
            (((jd + 1) * qd2 - jd) * to_double(vN) + qd2 * (jd * qd2 - jd + 1) * to_double(tN)) +
        scale / (qd2 - 1) * (nu.ENT.at(l0) + qd2 * nu.tilde_ENT(l0));

  Rational linedens = 0;
  if (orbit_length(rc, l0, static_cast<unsigned>(j)) == Integer(static_cast<unsigned long>(ell_prime))) {
    linedens = table.base.at(l0) / q2j;
  }
  return {t, linedens};
}

std::pair<Tail, Rational> closed_or_peeled(const DensityTable& table, const NuTables& nu, std::size_t ell_prime) {
  const RecogConstants& rc = table.constants;
  if (ell_prime >= rc.R0) return closed_tail(table, nu, ell_prime);
  auto [t, linedens] = closed_tail(table, nu, rc.R0);
  for (std::size_t l = rc.R0; l-- > ell_prime;) {
    const Rational& d = table.base.at(l);
    t.P += d;
    t.LD += rat(l) * d;
    t.E += neg_d_log_d(d);
  }
  return {t, table.base.at(ell_prime)};
}

}  // namespace

AsymptoticQuantifiers closed_form_unchecked(const DensityTable& table, std::size_t m, std::size_t ell,
                                            std::size_t h) {
  require_params(m, ell, h);
  const NuTables nu = nu_tables(table);
  const std::size_t lp = ell + m + h - 2;
  const auto [t, linedens] = closed_or_peeled(table, nu, lp);
  const auto [t1, unused] = closed_or_peeled(table, nu, m + h - 1);
  return assemble(m, ell, h, linedens, t, t1);
}

AsymptoticQuantifiers closed_form(const DensityTable& table, std::size_t m, std::size_t ell, std::size_t h) {
  AsymptoticQuantifiers closed = closed_form_unchecked(table, m, ell, h);
  const AsymptoticQuantifiers sums = quantifiers_via_sums(table, m, ell, h);
  auto where = [&](const char* what) {
    return std::string("closed_form: ") + what + " differs from the infinite-sum value at m=" + std::to_string(m) +
           ", ℓ=" + std::to_string(ell) + ", h=" + std::to_string(h);
  };
  if (closed.linedens != sums.linedens) throw DiscrepancyError(where("linedens"));
  if (closed.lineDens != sums.lineDens) throw DiscrepancyError(where("lineDens"));
  if (closed.RR != sums.RR) throw DiscrepancyError(where("RR"));
  if (closed.ENT.has_value() != sums.ENT.has_value() ||
      (closed.ENT && std::abs(*closed.ENT - *sums.ENT) > 1e-9)) {
    throw DiscrepancyError(where("ENT"));
  }
  return closed;
}

AsymptoticQuantifiers nonprimitive_quantifiers(const Classification& cls, std::size_t m, std::size_t ell,
                                               std::size_t h) {
  require_params(m, ell, h);
  if (cls.primitive()) throw DomainError("nonprimitive_quantifiers: substitution is primitive");
  AsymptoticQuantifiers a;
  a.m = m;
  a.ell = ell;
  a.h = h;
  a.ell_prime = ell + m + h - 2;
  a.RR = 1;
  a.RR_1 = 1;
  a.DET = Rational(1);
  a.C = 1;
  a.Lavg = RationalOrInfinity::infinity();
  a.notes.push_back("non-primitive: the plot is asymptotically full; ENT is not defined here");
  return a;
}

std::size_t fixed_point_period(const Substitution& s) {
  constexpr std::size_t kLength = std::size_t{1} << 16;
  const BitSequence x = generating_prefix(s, kLength);
  for (std::size_t p = 1; p <= kLength / 4; ++p) {
    if (x.windows_equal(0, p, kLength - p)) return p;
  }
  throw DomainError("fixed point of " + s.to_string() + " is not periodic within the scanned prefix");
}

AsymptoticQuantifiers periodic_quantifiers(const Substitution& s, const Classification& cls, std::size_t m,
                                           std::size_t ell, std::size_t h) {
  require_params(m, ell, h);
  if (cls.kind != SubstitutionKind::PrimitivePeriodic) throw DomainError("periodic_quantifiers: not periodic");
  const std::size_t p = fixed_point_period(s);
  const BitSequence x = generating_prefix(s, 3 * p);
  const std::size_t shift = reduced_h(m, h) - 1;  // lines at ε0 are longer by this much

  // Density of ε0-lines of each finite length.
  std::map<std::size_t, Rational> dens;
  const Rational weight = Rational(1) / (rat(p) * rat(p));
  for (std::size_t r = 1; r < p; ++r) {
    std::vector<int> match(p);
    std::size_t first_mismatch = p;
    for (std::size_t i = 0; i < p; ++i) {
      match[i] = x.bit(i) == x.bit(i + r);
      if (!match[i] && first_mismatch == p) first_mismatch = i;
    }
    if (first_mismatch == p) throw DiscrepancyError("periodic_quantifiers: period is not minimal");
    std::size_t run = 0;
    for (std::size_t k = 1; k <= p; ++k) {
      if (match[(first_mismatch + k) % p]) {
        ++run;
      } else if (run > 0) {
        dens[run] += weight;
        run = 0;
      }
    }
  }

  auto tail = [&](std::size_t lp) {
    Tail t;
    t.LD = Rational(1) / rat(p);  // infinite lines carry 1/p of all pairs
    for (const auto& [len, d] : dens) {
      if (len < lp) continue;
      t.P += d;
      t.LD += rat(len) * d;
    }
    return t;
  };
  const std::size_t lp = ell + shift;
  const Rational linedens = dens.count(lp) ? dens.at(lp) : Rational(0);
  AsymptoticQuantifiers a = assemble(m, ell, h, linedens, tail(lp), tail(1 + shift));
  if (a.lineDens == 0) a.Lavg = RationalOrInfinity::infinity();
  a.ENT.reset();
  a.notes.clear();
  a.notes.push_back("periodic fixed point of period " + std::to_string(p) +
                    ": diagonals j-i = 0 mod p are infinite lines; ENT not reported");
  return a;
}

AsymptoticQuantifiers asymptotic_quantifiers(const Substitution& s, std::size_t m, std::size_t ell, std::size_t h,
                                             const AsymptoticOptions& options) {
  const Classification cls = classify(s);
  switch (cls.kind) {
    case SubstitutionKind::NonPrimitiveProximal:
    case SubstitutionKind::NonPrimitiveTrivial:
      return nonprimitive_quantifiers(cls, m, ell, h);
    case SubstitutionKind::PrimitivePeriodic:
      return periodic_quantifiers(s, cls, m, ell, h);
    case SubstitutionKind::PrimitiveAperiodic:
      break;
  }
  const NormalizedSubstitution ns = normalize(s);
  const DensityTable table = load_or_reconstruct(ns.substitution, options.reconstruction, options.use_cache);
  AsymptoticQuantifiers a = closed_form(table, m, ell, h);
  if (ns.tag != Normalization::Identity) a.notes.push_back("computed on the " + to_string(ns.tag) + " normalization");
  return a;
}

std::vector<DetScanRow> determinism_limit_scan(const Substitution& s, std::size_t m, std::size_t ell,
                                               std::size_t h_first, std::size_t h_last,
                                               const AsymptoticOptions& options) {
  if (h_first == 0 || h_last < h_first) throw DomainError("determinism_limit_scan: bad h range");
  const Classification cls = classify(s);
  std::optional<DensityTable> table;
  if (cls.kind == SubstitutionKind::PrimitiveAperiodic) {
    table = load_or_reconstruct(normalize(s).substitution, options.reconstruction, options.use_cache);
  }
  const double q2 = static_cast<double>(s.q() * s.q());
  std::vector<DetScanRow> rows;
  for (std::size_t h = h_first; h <= h_last; ++h) {
    const AsymptoticQuantifiers a =
        table ? closed_form(*table, m, ell, h) : asymptotic_quantifiers(s, m, ell, h, options);
    DetScanRow row;
    row.h = h;
    row.DET = a.DET.value_or(Rational(0));
    row.envelope = static_cast<double>(ell * (ell - 1)) * q2 / static_cast<double>(h);
    rows.push_back(std::move(row));
  }
  return rows;
}

RQAReport to_report(const AsymptoticQuantifiers& a) {
  RQAReport r;
  r.n.reset();
  r.m = a.m;
  r.h = a.h;
  r.l_min = a.ell;
  r.linedens[a.ell] = a.linedens;
  r.lineDens = a.lineDens;
  r.RR = a.RR;
  r.RR_1 = a.RR_1;
  r.DET = a.DET;
  r.Lavg = a.Lavg;
  r.ENT = a.ENT;
  r.C = a.C;
  r.provenance = Provenance::Asymptotic;
  r.notes = a.notes;
  return r;
}

}  // namespace subrqa
