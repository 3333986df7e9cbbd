#include <gtest/gtest.h>

#include <cmath>

#include "subrqa/asymptotics.hpp"
#include "subrqa/errors.hpp"
#include "subrqa/rqa.hpp"

using namespace subrqa;

namespace {

Rational frac(long a, long b) { return make_rational(a, b); }

const DensityTable& table(const std::string& spec) {
  static std::map<std::string, DensityTable> cache;
  auto it = cache.find(spec);
  if (it == cache.end()) it = cache.emplace(spec, reconstruct_base(Substitution::parse(spec))).first;
  return it->second;
}

const char* const kGolden[] = {"0->01,1->10", "0->01,1->00", "0->01110,1->01010"};

}  // namespace

TEST(Asymptotics, ThueMorseAtUnitScale) {
  const AsymptoticQuantifiers a = quantifiers_via_sums(table("0->01,1->10"), 1, 1, 1);
  EXPECT_EQ(a.RR, frac(1, 2));
  EXPECT_EQ(a.C, frac(1, 2));
  EXPECT_EQ(a.lineDens, frac(2, 9));
  EXPECT_EQ(a.Lavg->value, frac(9, 4));
  EXPECT_EQ(*a.DET, 1);
  EXPECT_NEAR(*a.ENT, 2 * std::log(2.0), 1e-12);
}

TEST(Asymptotics, PeriodDoublingAtUnitScale) {
  const AsymptoticQuantifiers a = quantifiers_via_sums(table("0->01,1->00"), 1, 1, 1);
  EXPECT_EQ(a.RR, frac(5, 9));
  EXPECT_EQ(a.lineDens, frac(2, 9));
  EXPECT_NEAR(*a.ENT, 2 * std::log(2.0), 1e-12);
}

TEST(Asymptotics, ClosedFormEqualsSums) {
  for (const char* spec : kGolden) {
    const DensityTable& t = table(spec);
    for (std::size_t m = 1; m <= 3; ++m) {
      for (std::size_t ell = 1; ell <= 12; ++ell) {
        for (std::size_t h = 1; h <= 8; ++h) {
          const AsymptoticQuantifiers c = closed_form_unchecked(t, m, ell, h);
          const AsymptoticQuantifiers s = quantifiers_via_sums(t, m, ell, h);
          ASSERT_EQ(c.RR, s.RR) << spec << " m=" << m << " l=" << ell << " h=" << h;
          ASSERT_EQ(c.lineDens, s.lineDens);
          ASSERT_EQ(c.linedens, s.linedens);
          ASSERT_NEAR(*c.ENT, *s.ENT, 1e-9);
        }
      }
    }
  }
}

// RR_ℓ = ℓC_ℓ − (ℓ−1)C_{ℓ+1} and C_ℓ = RR_ℓ − (ℓ−1)P_ℓ for the n = ∞ values.
TEST(Asymptotics, CorrelationSumIdentities) {
  for (const char* spec : kGolden) {
    const DensityTable& t = table(spec);
    for (std::size_t m = 1; m <= 2; ++m) {
      for (std::size_t h = 1; h <= 4; ++h) {
        const Rational c1 = quantifiers_via_sums(t, m, 1, h).C;
        for (std::size_t ell = 1; ell <= 10; ++ell) {
          const AsymptoticQuantifiers a = quantifiers_via_sums(t, m, ell, h);
          const AsymptoticQuantifiers b = quantifiers_via_sums(t, m, ell + 1, h);
          const AsymptoticFromCorsum f = asymptotic_from_corsum(c1, a.C, b.C, ell);
          EXPECT_EQ(f.RR, a.RR) << spec;
          EXPECT_EQ(a.C, a.RR - Rational(static_cast<long>(ell - 1)) * a.lineDens);
          EXPECT_EQ(*f.DET, *a.DET);
          EXPECT_GT(*a.ENT, 0);
        }
      }
    }
  }
}

TEST(Asymptotics, ConvergesFromFinitePlots) {
  for (const char* spec : kGolden) {
    const Substitution s = Substitution::parse(spec);
    const BitSequence x = fixed_point_prefix(s, (1 << 12) + 16);
    for (std::size_t h = 1; h <= 2; ++h) {
      const RQAReport emp = analyze_prefix(x, 1 << 12, 1, 2, h);
      const AsymptoticQuantifiers a = quantifiers_via_sums(table(spec), 1, 2, h);
      EXPECT_NEAR(to_double(emp.RR), to_double(a.RR), 2e-3) << spec;
      EXPECT_NEAR(to_double(*emp.C), to_double(a.C), 2e-3) << spec;
      EXPECT_NEAR(*emp.ENT, *a.ENT, 5e-2) << spec;
    }
  }
}

TEST(Asymptotics, NonPrimitiveIsFull) {
  const AsymptoticQuantifiers a = asymptotic_quantifiers(Substitution::parse("0->010,1->111"), 1, 1, 1);
  EXPECT_EQ(a.RR, 1);
  EXPECT_EQ(a.C, 1);
  EXPECT_EQ(*a.DET, 1);
  EXPECT_TRUE(a.Lavg->infinite);
  EXPECT_FALSE(a.ENT);
  EXPECT_EQ(asymptotic_quantifiers(Substitution::parse("0->00,1->11"), 2, 3, 2).RR, 1);
}

TEST(Asymptotics, PeriodicFixedPoint) {
  const Substitution s = Substitution::parse("0->010,1->101");
  EXPECT_EQ(fixed_point_period(s), 2u);
  const AsymptoticQuantifiers a = asymptotic_quantifiers(s, 1, 1, 1);
  EXPECT_EQ(a.RR, frac(1, 2));
  EXPECT_EQ(*a.DET, 1);
  EXPECT_TRUE(a.Lavg->infinite);
  EXPECT_FALSE(a.ENT);
  // Agreement with a long finite plot.
  const BitSequence x = generating_prefix(s, 2048 + 8);
  const RQAReport emp = analyze_prefix(x, 2048, 1, 1, 1);
  EXPECT_NEAR(to_double(emp.RR), 0.5, 1e-3);

  const Substitution p3 = Substitution::parse("0->001,1->001");
  EXPECT_EQ(fixed_point_period(p3), 3u);
  const AsymptoticQuantifiers b = asymptotic_quantifiers(p3, 1, 1, 1);
  const RQAReport emp3 = analyze_prefix(generating_prefix(p3, 3000 + 8), 3000, 1, 1, 1);
  EXPECT_NEAR(to_double(emp3.RR), to_double(b.RR), 1e-3);
  EXPECT_NEAR(to_double(*emp3.DET), to_double(*b.DET), 1e-3);
}

TEST(Asymptotics, DeterminismScan) {
  const auto rows = determinism_limit_scan(Substitution::parse("0->01,1->10"), 1, 3, 1, 24);
  ASSERT_EQ(rows.size(), 24u);
  for (const auto& r : rows) {
    EXPECT_LE(r.DET, 1);
    if (r.h >= 8) EXPECT_LE(1 - to_double(r.DET), r.envelope);
  }
  for (const auto& r : determinism_limit_scan(Substitution::parse("0->010,1->111"), 1, 3, 1, 5)) {
    EXPECT_EQ(r.DET, 1);
  }
}

TEST(Asymptotics, NormalizesBeforeLookup) {
  // Letter swap of Thue–Morse generates the same language.
  const AsymptoticQuantifiers a = asymptotic_quantifiers(Substitution::parse("0->10,1->01"), 1, 2, 1);
  const AsymptoticQuantifiers b = quantifiers_via_sums(table("0->01,1->10"), 1, 2, 1);
  EXPECT_EQ(a.RR, b.RR);
}

TEST(Asymptotics, RejectsBadParameters) {
  EXPECT_THROW(quantifiers_via_sums(table("0->01,1->10"), 0, 1, 1), DomainError);
  EXPECT_THROW(quantifiers_via_sums(table("0->01,1->10"), 1, 0, 1), DomainError);
}
