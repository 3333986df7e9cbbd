#include <gtest/gtest.h>

#include <random>

#include "subrqa/errors.hpp"
#include "subrqa/substitution.hpp"

using namespace subrqa;

namespace {

Word word(const std::string& s) { return BitSequence::from_string(s); }

}  // namespace

TEST(Substitution, ParsesCanonicalAndLooseText) {
  const Substitution tm = Substitution::parse("0->01,1->10");
  EXPECT_EQ(tm.q(), 2u);
  EXPECT_EQ(tm.to_string(), "0->01,1->10");
  EXPECT_EQ(Substitution::parse(" 1 -> 10 ,\t0->01 "), tm);
}

TEST(Substitution, RejectsMalformedText) {
  EXPECT_THROW(Substitution::parse("0->0,1->1"), Error);
  EXPECT_THROW(Substitution::parse("0->01,1->1"), Error);
  EXPECT_THROW(Substitution::parse("0->01"), ParseError);
  EXPECT_THROW(Substitution::parse("0->02,1->10"), ParseError);
  EXPECT_THROW(Substitution::parse("0=>01,1->10"), ParseError);
  try {
    Substitution::parse("0->01,1->1x");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 10u);
  }
}

TEST(Substitution, IteratesAndBuildsFixedPoint) {
  const Substitution tm = Substitution::parse("0->01,1->10");
  EXPECT_EQ(iterate(tm, Letter::Zero, 3).to_string(), "01101001");
  EXPECT_EQ(fixed_point_prefix(tm, 16).to_string(), "0110100110010110");
  EXPECT_EQ(fixed_point_prefix(Substitution::parse("0->010,1->111"), 9).to_string(), "010111010");
  EXPECT_THROW(iterate(tm, Letter::Zero, 40, 1 << 10), ResourceError);
  EXPECT_THROW(fixed_point_prefix(Substitution::parse("0->10,1->01"), 4), DomainError);
}

TEST(Substitution, GeneratingPrefixFallsBackToNormalization) {
  // ζ(0) starts with 1: swapping letters gives a fixed point starting with 0.
  const Substitution s = Substitution::parse("0->10,1->01");
  const BitSequence x = generating_prefix(s, 32);
  EXPECT_EQ(x.size(), 32u);
  EXPECT_EQ(x.bit(0), 0);
  EXPECT_EQ(s.letter_swapped().letter_swapped(), s);
}

TEST(Substitution, Classification) {
  EXPECT_EQ(classify(Substitution::parse("0->01,1->10")).kind, SubstitutionKind::PrimitiveAperiodic);
  EXPECT_EQ(classify(Substitution::parse("0->01,1->00")).kind, SubstitutionKind::PrimitiveAperiodic);
  EXPECT_EQ(classify(Substitution::parse("0->01110,1->01010")).kind, SubstitutionKind::PrimitiveAperiodic);
  EXPECT_EQ(classify(Substitution::parse("0->010,1->101")).kind, SubstitutionKind::PrimitivePeriodic);
  EXPECT_EQ(classify(Substitution::parse("0->01,1->01")).kind, SubstitutionKind::PrimitivePeriodic);

  const Classification prox = classify(Substitution::parse("0->010,1->111"));
  EXPECT_EQ(prox.kind, SubstitutionKind::NonPrimitiveProximal);
  ASSERT_TRUE(prox.absorbing_letter);
  EXPECT_EQ(*prox.absorbing_letter, Letter::One);
  EXPECT_EQ(classify(Substitution::parse("0->00,1->11")).kind, SubstitutionKind::NonPrimitiveTrivial);
}

// Matrix criterion: primitive iff the square of the incidence matrix is positive.
TEST(Substitution, PrimitivityMatchesIncidenceMatrix) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t q = 2 + rng() % 4;
    std::string a, b;
    for (std::size_t k = 0; k < q; ++k) {
      a.push_back('0' + static_cast<char>(rng() & 1));
      b.push_back('0' + static_cast<char>(rng() & 1));
    }
    const Substitution s(word(a), word(b));
    long m[2][2] = {};
    for (char c : a) ++m[c - '0'][0];
    for (char c : b) ++m[c - '0'][1];
    bool positive = true;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) positive &= m[r][0] * m[0][c] + m[r][1] * m[1][c] > 0;
    EXPECT_EQ(is_primitive(s), positive) << s.to_string();
  }
}
