#pragma once

#include <string>
#include <vector>

#include "reopen/economy.hpp"

namespace reopen {

enum class ScenarioId {
  PreLockdown,
  Lockdown,
  ManufConstruction,
  AllExceptConsumerFacing,
  AllExceptConsumerFacingSchools,
  Open,
  Custom
};

std::string to_string(ScenarioId id);
ScenarioId scenario_from_string(const std::string& s);
const std::vector<ScenarioId>& named_scenarios();
std::string scenario_description(ScenarioId id);

struct PolicyLambda {
  Vec delta_w, delta_c;
  double delta_s = 1.0;
  double delta_h = 1.0;
  ScenarioId id = ScenarioId::Custom;

  void validate() const;
};

PolicyLambda policy_lambda(ScenarioId id, const PandemicCalibration& calib);

// Economic reopening plus the matching epidemic policy.
struct Scenario {
  ScenarioId id = ScenarioId::Lockdown;
  std::vector<bool> open;  // industries whose supply shock is lifted at t_end_lockdown
  PolicyLambda lambda;
};

extern const std::vector<std::string> kConsumerFacing;

Scenario make_scenario(ScenarioId id, const PandemicCalibration& calib);
// Opens the listed industries; schools and on-site consumption set delta_s and delta_c.
Scenario custom_scenario(const std::vector<std::string>& open_codes, bool schools,
                         bool consumption, const PandemicCalibration& calib);

double consumption_shock_path(double eps_D, bool onsite, int t, const EconParams& p);
double permanent_income_factor(int t, double l_tilde_lockdown, double l0_tilde, const EconParams& p);
Vec lockdown_labor_supply(const PandemicCalibration& calib, const Scenario& s, int t,
                          const EconParams& p);
Vec other_final_demand_path(const Vec& f0, const Vec& f_shock, int t, const EconParams& p);

struct ShockSchedule {
  int horizon = 0;
  std::vector<Vec> eps_S, eps, f_d;
  std::vector<double> xi, nu;
  std::vector<bool> lockdown;
};

ShockSchedule build_schedule(const Economy& econ, const PandemicCalibration& calib,
                             const Scenario& s, const EconParams& p, int horizon);
ShockSchedule zero_schedule(const Economy& econ, int horizon);

}  // namespace reopen
