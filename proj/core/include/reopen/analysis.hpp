#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "reopen/economy.hpp"
#include "reopen/engine.hpp"
#include "reopen/epi.hpp"
#include "reopen/shocks.hpp"

namespace reopen {

// Everything needed to run one simulation; shared read-only across runs.
struct ModelInputs {
  Economy economy;
  CriticalityMatrix criticality;
  PandemicCalibration calibration;
  InventoryTargets targets;
  EconParams params;
};

struct ShockDecomposition {
  Vec os_direct, os_indirect, os_total;
  Vec cs_direct, cs_indirect, cs_total;  // NaN where c0 + f0 = 0
};

ShockDecomposition shock_decomposition(const SimSeries& series, const PandemicCalibration& calib,
                                       const Economy& econ, int t);

Vec leontief_solve(const Economy& econ, const Vec& c_shocked, const Vec& f_shocked);
// Primary inputs default to everything that is not an intermediate purchase: e0 + pi0.
Vec ghosh_solve(const Economy& econ, const Vec& l_shocked, const Vec& other_primary);
Vec ghosh_solve(const Economy& econ, const Vec& l_shocked);
double spectral_radius(const Mat& M);

// Employment-weighted lockdown workforce composition.
struct WorkforceShares {
  double onsite = 0;     // still working on site under lockdown
  double remote = 0;     // able to work from home
  double essential = 0;  // in essential jobs
};

WorkforceShares workforce_shares(const PandemicCalibration& calib, const Vec& employment);

enum class PerturbMode { both, supply_only, demand_only };
PerturbMode perturb_mode_from_string(const std::string& s);

struct EnsembleSummary {
  int n_runs = 0;
  double sigma = 0.0;
  std::vector<double> base;
  std::vector<double> q025, q25, median, q75, q975;
};

EnsembleSummary perturbation_ensemble(const ModelInputs& in, const Scenario& scenario, int horizon,
                                      double sigma, int n_runs, std::uint64_t seed,
                                      PerturbMode mode = PerturbMode::both, int threads = 0);

struct ScenarioRow {
  ScenarioId id = ScenarioId::Lockdown;
  std::string name;
  BetaBreakdown beta;
  R0Estimate r0;
  double va_change_pp = 0.0;  // mean value added vs continued lockdown, pp of pre-lockdown
  double gdp_pct = 0.0;       // mean value added as % of pre-lockdown
  SimSeries series;
};

struct ScenarioReport {
  int window = 30;
  std::vector<ScenarioRow> rows;
};

ScenarioReport scenario_report(const std::vector<Scenario>& scenarios, const ModelInputs& in,
                               const EpiCalibration& epi, int window = 30);

}  // namespace reopen
