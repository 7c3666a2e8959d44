#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "fracpq/constants.hpp"
#include "fracpq/regularity.hpp"
#include "fracpq/solver.hpp"

namespace fracpq {

nlohmann::json to_json(const FiberingProfile& prof);
nlohmann::json to_json(const ConstantsReport& rep);
nlohmann::json to_json(const SolutionRecord& rec, bool include_values = true);
nlohmann::json to_json(const TwoSolutionsResult& res, bool include_values = true);
nlohmann::json to_json(const RegularityReport& rep);
nlohmann::json to_json(const DeGiorgiTrace& tr);
nlohmann::json to_json(const HarnackReport& rep);
nlohmann::json to_json(const CriticalProbe& probe);

/// Fixed "%.17g" formatting so CSV output is reproducible bit for bit.
std::string csv_number(double x);

std::string solution_csv(const GridFunction& u);
std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string ray_scan_csv(const FiberingMap& map, int points = 400);
std::string osc_csv(const RegularityReport& rep);

}  // namespace fracpq
