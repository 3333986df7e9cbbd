#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "subrqa/densities.hpp"

namespace subrqa {

struct CheckResult {
  std::string family;
  std::string name;
  bool passed = false;
  /// Informational rows (documented deviations of printed constants) never
  /// fail the run.
  bool informational = false;
  std::string detail;
};

struct VerifyOptions {
  /// Substring filter on family names: example, thue-morse,
  /// period-doubling, q5.
  std::string filter;
  /// Use this density table (JSON) for every family it matches instead of
  /// reconstructing.
  std::optional<std::filesystem::path> table_file;
  ReconstructionOptions reconstruction;
  bool use_cache = true;
  /// Prefix length for the empirical ℓ' convention oracle.
  std::size_t oracle_n = std::size_t{1} << 12;
};

std::vector<CheckResult> verify_reference(const VerifyOptions& options = {});

bool all_passed(const std::vector<CheckResult>& results);

std::string format_results(const std::vector<CheckResult>& results);

}  // namespace subrqa
