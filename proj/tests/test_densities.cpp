#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <random>

#include "oracles.hpp"
#include "subrqa/densities.hpp"
#include "subrqa/errors.hpp"
#include "subrqa/json_io.hpp"

using namespace subrqa;

namespace {

Rational frac(long a, long b) { return make_rational(a, b); }

const DensityTable& table(const std::string& spec) {
  static std::map<std::string, DensityTable> cache;
  auto it = cache.find(spec);
  if (it == cache.end()) it = cache.emplace(spec, reconstruct_base(Substitution::parse(spec))).first;
  return it->second;
}

}  // namespace

TEST(Densities, GoldenBases) {
  EXPECT_EQ(table("0->01,1->10").base,
            (std::map<std::size_t, Rational>{{1, frac(1, 9)}, {2, frac(1, 18)}, {3, frac(1, 36)}}));
  EXPECT_EQ(table("0->01,1->00").base, (std::map<std::size_t, Rational>{{1, frac(1, 9)}, {2, frac(1, 18)}}));
  EXPECT_EQ(table("0->01110,1->01010").base,
            (std::map<std::size_t, Rational>{
                {1, frac(7, 50)}, {2, frac(3, 50)}, {3, frac(1, 50)}, {4, frac(13, 1250)}}));
}

TEST(Densities, ScalingLaw) {
  for (const char* spec : {"0->01,1->10", "0->01,1->00", "0->01110,1->01010"}) {
    const DensityTable& t = table(spec);
    const RecogConstants& rc = t.constants;
    const Rational q2(static_cast<long>(rc.q * rc.q));
    for (std::size_t l = rc.R; l <= 200; ++l) {
      EXPECT_EQ(dens_K(t, rc.q * l + rc.alpha_plus_beta()), dens_K(t, l) / q2) << spec << " l=" << l;
    }
  }
}

TEST(Densities, ThueMorseFamilies) {
  const DensityTable& t = table("0->01,1->10");
  EXPECT_EQ(dens_K(t, 1), frac(1, 9));
  for (unsigned k = 1; k <= 8; ++k) {
    EXPECT_EQ(dens_K(t, std::size_t{1} << k), Rational(1) / (9 * ipow(2, 2 * k - 1)));
    EXPECT_EQ(dens_K(t, 3 * (std::size_t{1} << (k - 1))), Rational(1) / (9 * ipow(2, 2 * k)));
  }
  EXPECT_EQ(dens_K(t, 5), 0);
  EXPECT_EQ(dens_K(t, 7), 0);
}

TEST(Densities, EmpiricalDeltaTracksDensity) {
  for (const char* spec : {"0->01,1->10", "0->01,1->00", "0->01110,1->01010"}) {
    const DensityTable& t = table(spec);
    const BitSequence x = fixed_point_prefix(t.subst, 4096 + 32);
    for (std::size_t l = 1; l <= 16; ++l) {
      const Rational d = dens_K(t, l);
      if (d == 0) continue;
      EXPECT_NEAR(to_double(empirical_delta(x, l, 4096)), to_double(d), 5e-3) << spec << " l=" << l;
    }
  }
}

TEST(Densities, ExactDensityMatchesTable) {
  WordStatistics stats(Substitution::parse("0->01110,1->01010"));
  EXPECT_EQ(exact_density(stats, 1), frac(7, 50));
  EXPECT_EQ(exact_density(stats, 5), 0);
  EXPECT_EQ(exact_density(stats, 9), frac(7, 1250));
}

TEST(Densities, Decomposition) {
  const RecogConstants& rc = table("0->01110,1->01010").constants;
  const Decomposition d = decompose(rc, 49);  // 49 = 5·9 + 4 = 25·1 + 24·1
  EXPECT_TRUE(d.valid);
  EXPECT_EQ(d.k, 2u);
  EXPECT_EQ(d.ell0, 1u);
  EXPECT_FALSE(decompose(rc, 50).valid);
  EXPECT_THROW(decompose(rc, 3), DomainError);
  EXPECT_EQ(orbit_length(rc, 2, 2), Integer(74));
}

TEST(Densities, ClosedFormIndices) {
  const RecogConstants& tm = table("0->01,1->10").constants;
  EXPECT_EQ(closed_form_indices(tm, 2), std::make_pair(std::size_t{0}, std::size_t{2}));
  EXPECT_EQ(closed_form_indices(tm, 4), std::make_pair(std::size_t{1}, std::size_t{2}));
  EXPECT_EQ(closed_form_indices(tm, 5), std::make_pair(std::size_t{1}, std::size_t{3}));
  const RecogConstants& q5 = table("0->01110,1->01010").constants;
  EXPECT_EQ(closed_form_indices(q5, 9), std::make_pair(std::size_t{1}, std::size_t{1}));
}

TEST(Densities, SnapMethodFailsLoudly) {
  ReconstructionOptions o;
  o.method = DensityMethod::Snap;
  try {
    reconstruct_base(Substitution::parse("0->01,1->10"), o);
    FAIL() << "snapping should not settle on 1/18";
  } catch (const ReconstructionError& e) {
    EXPECT_EQ(e.base_length(), 2u);
  }
}

TEST(Densities, RejectsUnsupportedSubstitutions) {
  EXPECT_THROW(reconstruct_base(Substitution::parse("0->010,1->111")), DomainError);
  EXPECT_THROW(reconstruct_base(Substitution::parse("0->010,1->101")), DomainError);
}

TEST(Densities, JsonRoundTripAndCache) {
  const DensityTable& t = table("0->01110,1->01010");
  const DensityTable back = density_table_from_json(Json::parse(to_json(t).dump()));
  EXPECT_EQ(back.subst, t.subst);
  EXPECT_EQ(back.constants, t.constants);
  EXPECT_EQ(back.base, t.base);

  Json broken = to_json(t);
  broken["base"].erase("2");
  EXPECT_THROW(density_table_from_json(broken), ParseError);

  const auto dir = std::filesystem::temp_directory_path() / ("subrqa-test-cache-" + std::to_string(::getpid()));
  ::setenv("SUBRQA_CACHE_DIR", dir.c_str(), 1);
  EXPECT_EQ(default_cache_dir(), dir);
  const DensityTable first = load_or_reconstruct(t.subst);
  EXPECT_FALSE(std::filesystem::is_empty(dir));
  EXPECT_EQ(load_or_reconstruct(t.subst).base, first.base);
  std::filesystem::remove_all(dir);
  ::unsetenv("SUBRQA_CACHE_DIR");
}

TEST(Densities, DescribeListsBase) {
  const std::string text = describe(table("0->01,1->10"), 8);
  EXPECT_NE(text.find("dens(K_2) = 1/18"), std::string::npos);
  EXPECT_NE(text.find("dens(K_8)"), std::string::npos);
}
