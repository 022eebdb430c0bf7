#pragma once

#include <string>
#include <vector>

#include "maxlip/config.hpp"
#include "maxlip/report.hpp"

namespace maxlip {

// Runs one scenario (or "all") and returns the checks ordered by check_id.
// Throws ConfigError for unknown scenarios or invalid configs.
Report run_scenario(const ScenarioConfig& cfg, const std::string& scenario);

// Same checks, no timestamp or config echo.
std::vector<Check> scenario_checks(const ScenarioConfig& cfg, const std::string& scenario);

// Sup over containing family cubes of the mean oscillation of chi_Q, for a
// unit cube Q: max over family sides m >= 2 of 2a(1-a) with a = m^-dim.
double unit_cube_sharp_of_indicator(const Grid& g, CubeFamily mode);

// Closed forms for b = -1: lambda_star = 2 h^-beta and
// lambda_sharp = (1 + 2 s) h^-beta with s as above.
double lambda_star_of_minus_one(const Grid& g, double beta);
double lambda_sharp_of_minus_one(const Grid& g, double beta, CubeFamily mode);

// Constant c with |b_Q| <= c M-sharp(b chi_Q) on Q, from the smallest family
// side m >= k with (m/k)^dim >= 2: c = t^2 / (2(t-1)), t = (m/k)^dim.
// Returns 0 when no such side fits in the grid.
double doubling_constant(const Grid& g, int side, CubeFamily mode);

}  // namespace maxlip
