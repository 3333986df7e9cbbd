#pragma once

#include <json.hpp>

#include "subrqa/densities.hpp"
#include "subrqa/rational.hpp"
#include "subrqa/rqa.hpp"

namespace subrqa {

using Json = nlohmann::ordered_json;

/// {"num": .., "den": .., "approx": ..}; num/den are JSON integers when they
/// fit in 64 bits and decimal strings otherwise.
Json rational_to_json(const Rational& r);
Rational rational_from_json(const Json& j);

Json to_json(const RationalOrInfinity& r);
RationalOrInfinity rational_or_infinity_from_json(const Json& j);

Json to_json(const RecogConstants& rc);
Json to_json(const RQAReport& r);
Json to_json(const DensityTable& t);
DensityTable density_table_from_json(const Json& j);

/// Header and one row per report, columns fixed.
std::string reports_to_csv(const std::vector<RQAReport>& reports);

}  // namespace subrqa
