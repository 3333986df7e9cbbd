// Acceptance run: one PASS/FAIL line per criterion.
//
// Exit status is 0 when every criterion passes. With --expect-fail N[,M...]
// the listed criteria are expected to fail; the run then succeeds only if
// exactly those fail, so an unexpected pass or failure is still reported.

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "subrqa/asymptotics.hpp"
#include "subrqa/densities.hpp"
#include "subrqa/recplot.hpp"
#include "subrqa/rqa.hpp"
#include "subrqa/verification.hpp"

using namespace subrqa;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "first failure: " << what << "; ";
      pass = false;
    }
  }
};

Rational frac(long a, long b) { return make_rational(a, b); }

const char* const kGolden[] = {"0->01,1->10", "0->01,1->00", "0->01110,1->01010"};

std::map<std::string, DensityTable> g_tables;

const DensityTable& table(const std::string& spec) { return g_tables.at(spec); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void golden_densities(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::map<std::string, std::map<std::size_t, Rational>> expected{
      {"0->01,1->10", {{1, frac(1, 9)}, {2, frac(1, 18)}, {3, frac(1, 36)}}},
      {"0->01,1->00", {{1, frac(1, 9)}, {2, frac(1, 18)}}},
      {"0->01110,1->01010", {{1, frac(7, 50)}, {2, frac(3, 50)}, {3, frac(1, 50)}, {4, frac(13, 1250)}}}};
  for (const char* spec : kGolden) {
    g_tables.emplace(spec, reconstruct_base(Substitution::parse(spec)));
    o.require(table(spec).base == expected.at(spec), std::string("base densities of ") + spec);
  }
  const double t = seconds_since(t0);
  o.require(t <= 60, "runtime");
  o.detail << "3 tables exact, " << std::setprecision(3) << t << " s";
}

void scaling_law(Outcome& o) {
  std::size_t exact = 0, empirical = 0;
  double worst = 0;
  for (const char* spec : kGolden) {
    const DensityTable& t = table(spec);
    const RecogConstants& rc = t.constants;
    const Rational q2(static_cast<long>(rc.q * rc.q));
    for (std::size_t l = rc.R; l <= 200; ++l) {
      const Rational d = dens_K(t, l);
      if (d == 0) continue;
      ++exact;
      o.require(dens_K(t, rc.q * l + rc.alpha_plus_beta()) == d / q2, std::string(spec) + " l=" + std::to_string(l));
    }
    const BitSequence x = fixed_point_prefix(t.subst, (1 << 12) + 32);
    for (std::size_t l = 1; l <= 16; ++l) {
      const Rational d = dens_K(t, l);
      if (d == 0) continue;
      ++empirical;
      const double gap = std::abs(to_double(empirical_delta(x, l, 1 << 12)) - to_double(d));
      worst = std::max(worst, gap);
      o.require(gap <= 5e-3, std::string(spec) + " empirical l=" + std::to_string(l));
    }
  }
  o.detail << exact << " exact scalings, " << empirical << " empirical lengths, max gap " << worst;
}

void example(Outcome& o) {
  const BitSequence x = BitSequence::from_string("010111010");
  const auto lines = extract_lines(x, 6, 1);
  auto has = [&](LineTriple l) { return std::find(lines.begin(), lines.end(), l) != lines.end(); };
  o.require(has({0, 2, 2, kZeroBoundary}), "0-boundary line (0,2,2)");
  o.require(has({3, 4, 2, kNBoundary}), "n-boundary line (3,4,2)");
  const LineHistogram hist = histogram(x, 6, 1);
  o.require(hist.counts.count(2) && hist.counts.at(2).total() == 4, "N_2 = 4");
  o.require(measures_from_histogram(hist, 2).RR == frac(8, 30), "RR_2");
  o.require(correlation_sum(x, 6, 2, 1) == frac(12, 36), "C_2");
  o.require(correlation_sum(x, 6, 3, 1) == frac(8, 36), "C_3");

  const auto ex = BoundaryPolicy::ExcludeNBoundary;
  const RQAReport r = measures_from_histogram(hist, 2, ex);
  const Rational c2 = corsum_main_term(hist, 2, ex), c3 = corsum_main_term(hist, 3, ex);
  o.require(r.RR == frac(4, 30), "excluded RR_2");
  o.require(c2 == frac(8, 36) && c3 == frac(6, 36), "excluded C_2, C_3");
  o.require(rqa_from_corsum(c2, c3, 6, 2).main_term == r.RR, "RR identity");
  o.require(linedens_from_corsum(c2, c3, 6, 2).main_term == r.lineDens, "line density identity");
  o.detail << "RR_2=" << r.RR << " C_2=" << c2 << " C_3=" << c3 << " without n-boundary lines";
}

void residual_bounds(Outcome& o) {
  std::mt19937_64 rng(1001);
  std::size_t violations = 0, boundary_instances = 0;
  const int kInstances = 1200;
  for (int trial = 0; trial < kInstances; ++trial) {
    const std::size_t n = 2 + rng() % 511, ell = 1 + rng() % 6, h = 1 + rng() % 3;
    const BitSequence x = oracle::random_sequence(rng, n + ell + h + 1);
    const LineHistogram hist = histogram(x, n, h);
    const Rational c = correlation_sum(x, n, ell, h), c_next = correlation_sum(x, n, ell + 1, h);
    const RQAReport r = measures_from_histogram(hist, ell);
    const Rational delta = corsum_from_histogram(hist, ell, c).triangle;
    const Rational nr(static_cast<long>(n));
    bool ok = delta >= 0 && delta <= Rational(static_cast<long>(2 * (ell - 1) * (n - 1)));
    const Rational d_rr = r.RR - rqa_from_corsum(c, c_next, n, ell).main_term;
    ok &= abs(d_rr) <= Rational(static_cast<long>(2 * ell * (ell - 1))) / nr;
    const Rational d_n = r.lineDens - linedens_from_corsum(c, c_next, n, ell).main_term;
    ok &= abs(d_n) <= Rational(static_cast<long>(2 * ell)) / nr;
    const Rational d_c = c - corsum_from_rqa(r.RR, r.lineDens, n, ell).main_term;
    ok &= d_c >= 1 / nr && d_c < Rational(static_cast<long>(2 * ell)) / nr;
    violations += !ok;
    boundary_instances += delta != 0;
  }
  o.require(violations == 0, std::to_string(violations) + " violations");
  o.detail << kInstances << " instances (" << boundary_instances << " with boundary residual), " << violations
           << " violations";
}

void reductions(Outcome& o) {
  std::mt19937_64 rng(2002);
  std::uniform_real_distribution<double> unit(0.02, 0.98);
  std::size_t rp_violations = 0, line_violations = 0;
  const int kInstances = 300;
  for (int trial = 0; trial < kInstances; ++trial) {
    const std::size_t n = 2 + rng() % 255, m = 1 + rng() % 4, h = 1 + rng() % 4;
    // Half dyadic thresholds, half arbitrary ones.
    const double eps = trial % 2 ? std::ldexp(1.0, -static_cast<int>(h)) : unit(rng);
    const std::size_t hr = quantize_eps(reduce_embedding(m, eps));
    const BitSequence x = oracle::random_sequence(rng, n + hr + m + 8);
    const auto embedded = oracle::embedded_matrix(x, n, m, eps);
    bool same = true;
    for (std::size_t i = 0; i < n && same; ++i)
      for (std::size_t j = 0; j < n && same; ++j) same = embedded[i][j] == rp_entry(x, i, j, hr);
    rp_violations += !same;

    std::vector<LineTriple> lifted, coarse;
    for (auto l : extract_lines(x, n, h)) {
      l.length += h - 1;
      lifted.push_back(l);
    }
    const auto [ell_shift, n_shift] = reduce_eps(1, n, h);
    for (const auto& l : extract_lines(x, n_shift, 1)) {
      if (l.length >= ell_shift) coarse.push_back(l);
    }
    line_violations += lifted != coarse;
  }
  o.require(rp_violations == 0, "embedding reduction");
  o.require(line_violations == 0, "line bijection");
  o.detail << kInstances << " instances, " << rp_violations << " plot mismatches, " << line_violations
           << " bijection mismatches";
}

void oracle_equivalence(Outcome& o) {
  std::mt19937_64 rng(3003);
  std::size_t mismatches = 0, lines = 0;
  const int kInstances = 500;
  for (int trial = 0; trial < kInstances; ++trial) {
    const std::size_t n = 1 + rng() % 256, h = 1 + rng() % 3;
    const BitSequence x = oracle::random_sequence(rng, n + h);
    const auto fast = extract_lines(x, n, h);
    lines += fast.size();
    mismatches += fast != oracle::lines(oracle::matrix(x, n, h));
  }
  o.require(mismatches == 0, std::to_string(mismatches) + " mismatches");
  o.detail << kInstances << " instances, " << lines << " lines, " << mismatches << " mismatches";
}

void ground_truth(Outcome& o) {
  const AsymptoticQuantifiers tm = quantifiers_via_sums(table("0->01,1->10"), 1, 1, 1);
  const AsymptoticQuantifiers pd = quantifiers_via_sums(table("0->01,1->00"), 1, 1, 1);
  const double two_log_two = 2 * std::log(2.0);
  o.require(tm.RR == frac(1, 2) && tm.C == frac(1, 2), "TM RR_1 = C_1 = 1/2");
  o.require(tm.lineDens == frac(2, 9), "TM lineDens_1 = 2/9");
  o.require(tm.ENT && std::abs(*tm.ENT - two_log_two) <= 1e-12, "TM ENT");
  o.require(pd.ENT && std::abs(*pd.ENT - two_log_two) <= 1e-12, "PD ENT");
  o.detail << "TM RR=" << tm.RR << " C=" << tm.C << " lineDens=" << tm.lineDens << " |ENT-2log2|="
           << std::abs(*tm.ENT - two_log_two) << "; PD |ENT-2log2|=" << std::abs(*pd.ENT - two_log_two);
}

void convergence(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = 1 << 14;
  for (const char* spec : kGolden) {
    const BitSequence x = fixed_point_prefix(Substitution::parse(spec), n + 8);
    const Rational emp = analyze_prefix(x, n, 1, 1, 1).RR;
    const Rational asy = quantifiers_via_sums(table(spec), 1, 1, 1).RR;
    const double gap = std::abs(to_double(Rational(emp - asy)));
    o.require(gap <= 0.01, spec);
    o.detail << spec << " gap " << std::setprecision(3) << gap << "; ";
  }
  const double t = seconds_since(t0);
  o.require(t <= 120, "runtime");
  o.detail << std::setprecision(3) << t << " s";
}

void non_primitive(Outcome& o) {
  const Substitution s = Substitution::parse("0->010,1->111");
  const AsymptoticQuantifiers a = asymptotic_quantifiers(s, 1, 1, 1);
  o.require(a.RR == 1 && a.C == 1 && a.DET && *a.DET == 1, "asymptotic RR = C = DET = 1");
  o.require(a.Lavg && a.Lavg->infinite, "Lavg = inf");
  const BitSequence x = fixed_point_prefix(s, (1 << 14) + 8);
  Rational previous = 0;
  for (unsigned t : {10u, 12u, 14u}) {
    const RQAReport r = analyze_prefix(x, std::size_t{1} << t, 1, 1, 3);
    o.require(r.DET && *r.DET >= previous, "DET_1 non-decreasing");
    previous = r.DET.value_or(Rational(0));
    o.detail << "DET_1(2^" << t << ")=" << std::setprecision(6) << to_double(previous) << " ";
  }
  o.require(to_double(previous) > 0.95, "DET_1 at 2^14");
  // DET_1 counts every recurrence point, so it is 1 for any plot; DET_2 is the informative value.
  o.detail << "DET_2(2^14)=" << to_double(*analyze_prefix(x, 1 << 14, 1, 2, 3).DET);
}

void determinism_limit(Outcome& o) {
  for (const char* spec : {"0->01,1->10", "0->01110,1->01010"}) {
    const auto rows = determinism_limit_scan(Substitution::parse(spec), 1, 3, 1, 24);
    std::size_t envelope_breaks = 0;
    std::string zeros;
    for (const auto& r : rows) {
      const double gap = 1 - to_double(r.DET);
      if (r.h >= 8 && gap > r.envelope) ++envelope_breaks;
      if (gap == 0) zeros += (zeros.empty() ? "" : ",") + std::to_string(r.h);
    }
    const double last = to_double(rows.back().DET);
    o.require(envelope_breaks == 0, std::string(spec) + " envelope");
    o.require(last >= 0.999, std::string(spec) + " DET(h=24) = " + std::to_string(last) + " < 0.999");
    // Independent check of the exact value on a finite plot.
    const std::size_t n = 1 << 14;
    const BitSequence x = fixed_point_prefix(Substitution::parse(spec), n + 32);
    const double finite = to_double(*analyze_prefix(x, n, 1, 3, 24).DET);
    o.detail << spec << ": envelope holds for h>=8, DET(24)=" << rows.back().DET << " (1-DET=" << 1 - last
             << ", finite plot n=2^14 gives " << finite << "), DET=1 at h in {" << zeros << "}; ";
  }
}

void reconciliation(Outcome& o) {
  std::size_t points = 0;
  for (const char* spec : kGolden) {
    const DensityTable& t = table(spec);
    for (std::size_t m = 1; m <= 3; ++m) {
      for (std::size_t ell = 1; ell <= 12; ++ell) {
        for (std::size_t h = 1; h <= 8; ++h) {
          const AsymptoticQuantifiers c = closed_form_unchecked(t, m, ell, h);
          const AsymptoticQuantifiers s = quantifiers_via_sums(t, m, ell, h);
          o.require(c.RR == s.RR && c.lineDens == s.lineDens && c.linedens == s.linedens,
                    std::string(spec) + " m=" + std::to_string(m) + " l=" + std::to_string(ell) +
                        " h=" + std::to_string(h));
          ++points;
        }
      }
    }
  }
  const auto report = verify_reference();
  o.require(all_passed(report), "verification report has failures");
  std::string deviations;
  for (const auto& c : report) {
    if (c.informational) deviations += c.family + " " + c.name + ": " + c.detail + "; ";
  }
  o.require(!deviations.empty(), "verification report lists no table deviations");
  o.detail << points << " exact agreements; " << deviations;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> expected_failures;
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--expect-fail" && i + 1 < argc) {
      std::stringstream list(argv[++i]);
      for (std::string item; std::getline(list, item, ',');) expected_failures.insert(std::stoi(item));
    } else {
      std::cerr << "usage: acceptance [--expect-fail N[,M...]]\n";
      return 2;
    }
  }

  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"golden densities", golden_densities},
      {"scaling law", scaling_law},
      {"example reproduction", example},
      {"residual bounds", residual_bounds},
      {"reduction identities", reductions},
      {"extractor vs matrix walk", oracle_equivalence},
      {"asymptotic ground truth", ground_truth},
      {"finite-to-asymptotic convergence", convergence},
      {"non-primitive trivialization", non_primitive},
      {"DET -> 1 as h grows", determinism_limit},
      {"closed-form reconciliation", reconciliation},
  };

  std::set<int> failed;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      criteria[k].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    const int id = static_cast<int>(k + 1);
    if (!o.pass) failed.insert(id);
    std::cout << "criterion " << std::setw(2) << id << ": " << (o.pass ? "PASS" : "FAIL") << "  "
              << criteria[k].first << "  [" << o.detail.str() << "]" << std::endl;
  }
  std::cout << criteria.size() - failed.size() << "/" << criteria.size() << " criteria passed";
  if (!expected_failures.empty()) {
    std::cout << " (expected failures:";
    for (int id : expected_failures) std::cout << " " << id;
    std::cout << ")";
  }
  std::cout << std::endl;
  return failed == expected_failures ? 0 : 1;
}
