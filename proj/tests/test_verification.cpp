#include <gtest/gtest.h>

#include "subrqa/verification.hpp"

using namespace subrqa;

TEST(Verification, AllGoldenChecksPass) {
  const auto results = verify_reference();
  EXPECT_TRUE(all_passed(results)) << format_results(results);
  std::size_t notes = 0;
  for (const auto& c : results) notes += c.informational;
  EXPECT_EQ(notes, 2u);
}

TEST(Verification, FilterSelectsFamily) {
  VerifyOptions o;
  o.filter = "thue-morse";
  const auto results = verify_reference(o);
  ASSERT_FALSE(results.empty());
  for (const auto& c : results) EXPECT_EQ(c.family, "thue-morse");
}
