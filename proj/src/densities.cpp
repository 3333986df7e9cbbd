#include "subrqa/densities.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "subrqa/errors.hpp"
#include "subrqa/json_io.hpp"
#include "subrqa/recplot.hpp"

namespace subrqa {

Rational empirical_delta(const BitSequence& x, std::size_t ell, std::size_t n) {
  if (n < 2) throw DomainError("empirical_delta: n must be at least 2");
  const auto counts = inner_line_start_counts(x, n, ell);
  const Integer nn(static_cast<unsigned long>(n));
  Rational r(Integer(static_cast<unsigned long>(counts[ell])), nn * nn - nn);
  r.canonicalize();
  return r;
}

Rational exact_density(WordStatistics& stats, std::size_t ell) {
  if (ell == 0) throw DomainError("exact_density: length must be positive");
  const auto& table = stats.words(ell + 2);
  Rational d = 0;
  for (const auto& [w, e] : table) {
    Word partner = w;
    partner.set(0, 1 - w.bit(0));
    partner.set(ell + 1, 1 - w.bit(ell + 1));
    const auto it = table.find(partner);
    if (it != table.end()) d += e.frequency * it->second.frequency;
  }
  return d;
}

namespace {

std::size_t child_length(const RecogConstants& rc, std::size_t ell0) { return rc.q * ell0 + rc.alpha_plus_beta(); }

Rational rational_of(std::uint64_t count, std::size_t n) {
  const Integer nn(static_cast<unsigned long>(n));
  Rational r(Integer(static_cast<unsigned long>(count)), nn * nn - nn);
  r.canonicalize();
  return r;
}

bool within(const Rational& a, const Rational& b, double tol) { return std::abs(to_double(Rational(a - b))) <= tol; }

}  // namespace

DensityTable reconstruct_base(const Substitution& s, const ReconstructionOptions& options) {
  if (options.n1 < 2 || options.n2 < options.n1) throw DomainError("reconstruct_base: need 2 <= n1 <= n2");
  DensityTable table{s, recognizability_constants(s), options.method, options.n1, options.n2, {}, {}};
  const RecogConstants& rc = table.constants;
  const std::size_t max_len = child_length(rc, rc.R - 1);

  const BitSequence x = fixed_point_prefix(s, options.n2 + max_len);
  const auto counts1 = inner_line_start_counts(x, options.n1, max_len);
  const auto counts2 = inner_line_start_counts(x, options.n2, max_len);
  const double tol1 = options.tolerance_factor / static_cast<double>(options.n1);
  const double tol2 = options.tolerance_factor / static_cast<double>(options.n2);
  const Integer max_den = Integer(options.max_den_factor) * ipow(rc.q, 6);
  WordStatistics stats(s);

  for (std::size_t ell0 = 1; ell0 < rc.R; ++ell0) {
    DensityEvidence ev;
    ev.ell0 = ell0;
    ev.scales = {options.n1, options.n2};
    ev.empirical = {rational_of(counts1[ell0], options.n1), rational_of(counts2[ell0], options.n2)};
    ev.tolerances = {tol1, tol2};
    auto fail = [&](const std::string& why) {
      throw ReconstructionError("reconstruct_base: base length " + std::to_string(ell0) + ": " + why, ell0);
    };

    Rational value;
    if (options.method == DensityMethod::Exact) {
      value = exact_density(stats, ell0);
      if ((value == 0) != (counts2[ell0] == 0)) {
        fail(value == 0 ? "inner lines found although the exact density is 0"
                        : "no inner line found up to n = " + std::to_string(options.n2));
      }
      if (!within(ev.empirical[0], value, tol1) || !within(ev.empirical[1], value, tol2)) {
        fail("empirical densities " + to_string(ev.empirical[0]) + ", " + to_string(ev.empirical[1]) +
             " are not within tolerance of " + to_string(value));
      }
    } else if (counts2[ell0] == 0) {
      value = 0;
    } else {
      const auto a = snap_rational(to_double(ev.empirical[0]), tol1, max_den);
      const auto b = snap_rational(to_double(ev.empirical[1]), tol2, max_den);
      if (!a || !b) fail("no rational with denominator <= " + max_den.get_str() + " within tolerance");
      if (*a != *b) fail("snapped values disagree across scales (" + to_string(*a) + " vs " + to_string(*b) + ")");
      value = *a;
    }

    if (value != 0 && ell0 >= rc.R0) {
      const std::size_t child = child_length(rc, ell0);
      ev.child = child;
      ev.child_empirical = rational_of(counts2[child], options.n2);
      const Rational q2(static_cast<long>(rc.q * rc.q));
      if (!within(*ev.child_empirical, value / q2, tol2)) {
        fail("scaling cross-check failed at length " + std::to_string(child) + ": empirical " +
             to_string(*ev.child_empirical) + " vs " + to_string(Rational(value / q2)));
      }
    }
    table.base[ell0] = value;
    table.evidence.push_back(std::move(ev));
  }
  return table;
}

Decomposition decompose(const RecogConstants& rc, std::size_t ell) {
  if (ell < rc.R) throw DomainError("decompose: length " + std::to_string(ell) + " is below R");
  Decomposition d;
  d.ell = ell;
  std::size_t cur = ell;
  const std::size_t ab = rc.alpha_plus_beta();
  while (cur >= rc.R) {
    if (cur < ab || (cur - ab) % rc.q != 0) return d;
    cur = (cur - ab) / rc.q;
    ++d.k;
  }
  if (cur == 0 || cur < rc.R0) return d;
  d.ell0 = cur;
  d.valid = true;
  return d;
}

Integer orbit_length(const RecogConstants& rc, std::size_t ell0, unsigned k) {
  const Rational v = Rational(ipow(rc.q, k)) * (Rational(static_cast<long>(ell0)) + rc.c) - rc.c;
  if (v.get_den() != 1) throw DiscrepancyError("orbit length is not an integer");
  return v.get_num();
}

Rational dens_K(const DensityTable& table, std::size_t ell) {
  if (ell == 0) throw DomainError("dens_K: length must be positive");
  const RecogConstants& rc = table.constants;
  if (ell < rc.R) return table.base.at(ell);
  const Decomposition d = decompose(rc, ell);
  if (!d.valid) return 0;
  const Rational& base = table.base.at(d.ell0);
  if (base == 0) return 0;
  Rational scaled = base / Rational(ipow(rc.q, static_cast<unsigned>(2 * d.k)));
  const Rational ratio = (Rational(static_cast<long>(d.ell0)) + rc.c) / (Rational(static_cast<long>(ell)) + rc.c);
  if (ratio * ratio * base != scaled) {
    throw DiscrepancyError("dens_K: the two forms of the scaling law disagree at length " + std::to_string(ell));
  }
  return scaled;
}

std::pair<std::size_t, std::size_t> closed_form_indices(const RecogConstants& rc, std::size_t ell_prime) {
  if (ell_prime < rc.R0) throw DomainError("closed_form_indices: ℓ' below R0");
  const Rational target(static_cast<long>(ell_prime));
  auto reach = [&](std::size_t l0, std::size_t j) -> Rational {
    const Rational qj(ipow(rc.q, static_cast<unsigned>(j)));
    return Rational(static_cast<long>(l0)) * qj + rc.c * (qj - 1);
  };
  std::size_t j = 0;
  while (reach(rc.R - 1, j) < target) ++j;
  std::size_t ell0 = rc.R0;
  while (reach(ell0, j) < target) ++ell0;
  return {j, ell0};
}

std::string to_string(DensityMethod m) { return m == DensityMethod::Exact ? "exact" : "snap"; }

DensityMethod density_method_from_string(const std::string& s) {
  if (s == "exact") return DensityMethod::Exact;
  if (s == "snap") return DensityMethod::Snap;
  throw ParseError("unknown density method '" + s + "'", 0);
}

std::string describe(const DensityTable& table, std::size_t ell_max) {
  const RecogConstants& rc = table.constants;
  std::ostringstream out;
  out << "substitution " << table.subst.to_string() << "\n"
      << "q=" << rc.q << " alpha=" << rc.alpha << " beta=" << rc.beta << " c=" << rc.c << " K=" << rc.K
      << " R=" << rc.R << " R0=" << rc.R0 << "\n"
      << "method " << to_string(table.method) << ", scales " << table.n1 << ", " << table.n2 << "\n";
  for (const auto& ev : table.evidence) {
    out << "  dens(K_" << ev.ell0 << ") = " << table.base.at(ev.ell0) << "   empirical";
    for (const auto& e : ev.empirical) out << ' ' << e << " (" << to_double(e) << ")";
    if (ev.child) out << "   child " << *ev.child << ": " << to_double(*ev.child_empirical);
    out << "\n";
  }
  for (std::size_t l = rc.R; l <= ell_max; ++l) {
    const Rational d = dens_K(table, l);
    if (d != 0) out << "  dens(K_" << l << ") = " << d << "\n";
  }
  return out.str();
}

std::filesystem::path default_cache_dir() {
  if (const char* dir = std::getenv("SUBRQA_CACHE_DIR"); dir && *dir) return dir;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return std::filesystem::path(xdg) / "subrqa";
  if (const char* home = std::getenv("HOME"); home && *home) return std::filesystem::path(home) / ".cache" / "subrqa";
  return std::filesystem::temp_directory_path() / "subrqa";
}

DensityTable load_or_reconstruct(const Substitution& s, const ReconstructionOptions& options, bool use_cache) {
  if (!use_cache) return reconstruct_base(s, options);
  std::ostringstream key;
  key << s.image0().to_string() << '_' << s.image1().to_string() << '_' << to_string(options.method) << '_'
      << options.n1 << '_' << options.n2 << '_' << options.tolerance_factor << '_' << options.max_den_factor
      << ".json";
  const std::filesystem::path file = default_cache_dir() / key.str();
  std::error_code ec;
  if (std::filesystem::exists(file, ec)) {
    try {
      std::ifstream in(file);
      DensityTable t = density_table_from_json(Json::parse(in));
      if (t.subst == s) return t;
    } catch (const std::exception&) {
      // Fall through and rebuild the entry.
    }
  }
  DensityTable t = reconstruct_base(s, options);
  std::filesystem::create_directories(file.parent_path(), ec);
  if (!ec) {
    std::ofstream out(file);
    if (out) out << to_json(t).dump(2) << "\n";
  }
  return t;
}

}  // namespace subrqa
