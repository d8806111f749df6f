#pragma once

// All benchmark scenarios known to grwsim.

#include <string>
#include <vector>

#include "grw/bench/mms_runs.hpp"
#include "grw/bench/numdiff.hpp"
#include "grw/bench/regional.hpp"
#include "grw/bench/registry_types.hpp"
#include "grw/bench/richards1d.hpp"
#include "grw/bench/trench.hpp"

namespace grw::bench {

inline const std::vector<Scenario>& scenarios() {
  static const std::vector<Scenario> all = {
      {"mms-flow-2d", "Richards flow with a manufactured solution on the unit square; EOC study", mms_flow_2d_params(),
       run_mms_flow_2d},
      {"mms-coupled-2d", "coupled flow and transport with a manufactured solution in 2D; EOC study",
       coupled_mms_params("100", "forward", "1000000", "true"),
       [](const RunContext& c) { return run_coupled_study(c, "2d"); }},
      {"mms-coupled-1d", "coupled flow and transport with a manufactured solution in 1D; EOC study",
       coupled_mms_params("50", "all", "1000000", "true"),
       [](const RunContext& c) { return run_coupled_study(c, "1d"); }},
      {"mms-degenerate-1d", "coupled 1D problem with a degenerate (saturated) branch; EOC study",
       coupled_mms_params("100", "all", "20000", "false"),
       [](const RunContext& c) { return run_coupled_study(c, "degenerate"); }},
      {"scenario1d", "layered column under a ramped surface flux: iterations and profiles", scenario1d_params(),
       run_scenario1d},
      {"drainage-lysimeter", "free drainage of an initially saturated lysimeter", drainage_lysimeter_params(),
       run_drainage_lysimeter},
      {"warrick-infiltration", "constant-head infiltration; wetting front depths", warrick_params(), run_warrick},
      {"sander-flux", "constant-flux infiltration with Fujita diffusivity in Theta form", sander_params(), run_sander},
      {"trench-flow", "recharge from a trench into loam or clay", trench_flow_params(), run_trench_flow},
      {"trench-coupled", "trench recharge coupled to surfactant transport over random conductivity",
       trench_coupled_params(), run_trench_coupled},
      {"trench-coupled-1d", "column version of the coupled trench problem", trench_coupled_1d_params(),
       run_trench_coupled_1d},
      {"numdiff", "numerical diffusion of the biased and unbiased transport walks", numdiff_params(), run_numdiff},
      {"regional-flow", "steady regional aquifer: scaled against unscaled solve", regional_flow_params(),
       run_regional_flow},
      {"regional-recharge", "steady aquifer with random recharge: Monte Carlo head statistics",
       regional_recharge_params(), run_regional_recharge},
      {"aquifer-dispersion", "plume dispersion: full flow ensemble against first-order velocities",
       aquifer_dispersion_params(), run_aquifer_dispersion},
  };
  return all;
}

inline const Scenario* find_scenario(const std::string& id) {
  for (const auto& s : scenarios())
    if (s.id == id) return &s;
  return nullptr;
}

}  // namespace grw::bench
