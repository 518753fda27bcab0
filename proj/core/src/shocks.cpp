#include "reopen/shocks.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "reopen/error.hpp"

namespace reopen {

const std::vector<std::string> kConsumerFacing = {"G47", "I", "R_S"};

namespace {

std::string squash(const std::string& s) {
  std::string out;
  for (unsigned char c : s)
    if (std::isalnum(c)) out.push_back(static_cast<char>(std::tolower(c)));
  return out;
}

bool manuf_construction(const std::string& code) {
  return !code.empty() && code[0] >= 'A' && code[0] <= 'F';
}

bool consumer_facing(const std::string& code) {
  return std::find(kConsumerFacing.begin(), kConsumerFacing.end(), code) != kConsumerFacing.end();
}

}  // namespace

std::string to_string(ScenarioId id) {
  switch (id) {
    case ScenarioId::PreLockdown: return "PreLockdown";
    case ScenarioId::Lockdown: return "Lockdown";
    case ScenarioId::ManufConstruction: return "ManufConstruction";
    case ScenarioId::AllExceptConsumerFacing: return "AllExceptConsumerFacing";
    case ScenarioId::AllExceptConsumerFacingSchools: return "AllExceptConsumerFacingSchools";
    case ScenarioId::Open: return "Open";
    case ScenarioId::Custom: return "Custom";
  }
  return "?";
}

const std::vector<ScenarioId>& named_scenarios() {
  static const std::vector<ScenarioId> ids = {
      ScenarioId::PreLockdown, ScenarioId::Lockdown, ScenarioId::ManufConstruction,
      ScenarioId::AllExceptConsumerFacing, ScenarioId::AllExceptConsumerFacingSchools,
      ScenarioId::Open};
  return ids;
}

ScenarioId scenario_from_string(const std::string& s) {
  const std::string key = squash(s);
  for (auto id : named_scenarios())
    if (squash(to_string(id)) == key) return id;
  if (key == "custom") return ScenarioId::Custom;
  throw config_error("unknown scenario '" + s + "'");
}

std::string scenario_description(ScenarioId id) {
  switch (id) {
    case ScenarioId::PreLockdown: return "no restrictions; everyone works and consumes on site";
    case ScenarioId::Lockdown: return "only essential workers who cannot work remotely go to work";
    case ScenarioId::ManufConstruction: return "lockdown plus reopening of industries A to F";
    case ScenarioId::AllExceptConsumerFacing:
      return "all industries reopen except retail, accommodation-food and other services";
    case ScenarioId::AllExceptConsumerFacingSchools:
      return "all industries except consumer-facing ones reopen, schools reopen";
    case ScenarioId::Open: return "all industries, on-site consumption and schools reopen";
    case ScenarioId::Custom: return "user-defined reopening";
  }
  return "";
}

void PolicyLambda::validate() const {
  auto unit = [](const Vec& v) {
    return v.allFinite() && (v.array() >= 0.0).all() && (v.array() <= 1.0).all();
  };
  if (!unit(delta_w)) throw data_error("delta_w outside [0,1]");
  if (!unit(delta_c)) throw data_error("delta_c outside [0,1]");
  if (!(delta_s >= 0 && delta_s <= 1)) throw data_error("delta_s outside [0,1]");
  if (!(delta_h >= 0 && delta_h <= 1)) throw data_error("delta_h outside [0,1]");
}

PolicyLambda policy_lambda(ScenarioId id, const PandemicCalibration& calib) {
  const auto n = static_cast<Eigen::Index>(calib.codes.size());
  PolicyLambda L;
  L.id = id;
  if (id == ScenarioId::PreLockdown) {
    L.delta_w = Vec::Ones(n);
    L.delta_c = Vec::Ones(n);
    L.delta_s = L.delta_h = 1.0;
    return L;
  }
  Vec remote = Vec::Ones(n) - calib.rli;
  Vec locked = calib.ess_w.cwiseProduct(remote);
  L.delta_w = locked;
  L.delta_c = calib.ess_c;
  L.delta_s = 0.0;
  L.delta_h = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::string& code = calib.codes[i];
    switch (id) {
      case ScenarioId::ManufConstruction:
        if (manuf_construction(code)) L.delta_w(i) = remote(i);
        break;
      case ScenarioId::AllExceptConsumerFacing:
      case ScenarioId::AllExceptConsumerFacingSchools:
        if (!consumer_facing(code)) L.delta_w(i) = remote(i);
        break;
      case ScenarioId::Open:
        L.delta_w(i) = remote(i);
        L.delta_c(i) = 1.0;
        break;
      case ScenarioId::Lockdown:
      case ScenarioId::Custom:
      case ScenarioId::PreLockdown:
        break;
    }
  }
  if (id == ScenarioId::AllExceptConsumerFacingSchools || id == ScenarioId::Open) L.delta_s = 1.0;
  return L;
}

Scenario make_scenario(ScenarioId id, const PandemicCalibration& calib) {
  if (id == ScenarioId::Custom) throw config_error("custom scenarios need an open-industry list");
  Scenario s;
  s.id = id;
  s.lambda = policy_lambda(id, calib);
  const auto n = calib.codes.size();
  s.open.assign(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string& code = calib.codes[i];
    switch (id) {
      case ScenarioId::PreLockdown:
      case ScenarioId::Open: s.open[i] = true; break;
      case ScenarioId::ManufConstruction: s.open[i] = manuf_construction(code); break;
      case ScenarioId::AllExceptConsumerFacing:
      case ScenarioId::AllExceptConsumerFacingSchools: s.open[i] = !consumer_facing(code); break;
      default: break;
    }
  }
  return s;
}

Scenario custom_scenario(const std::vector<std::string>& open_codes, bool schools,
                         bool consumption, const PandemicCalibration& calib) {
  Scenario s;
  s.id = ScenarioId::Custom;
  s.lambda = policy_lambda(ScenarioId::Lockdown, calib);
  s.lambda.id = ScenarioId::Custom;
  s.open.assign(calib.codes.size(), false);
  for (const auto& code : open_codes) {
    auto it = std::find(calib.codes.begin(), calib.codes.end(), code);
    if (it == calib.codes.end()) throw data_error("unknown industry code " + code);
    auto i = it - calib.codes.begin();
    s.open[i] = true;
    s.lambda.delta_w(i) = 1.0 - calib.rli(i);
    if (consumption) s.lambda.delta_c(i) = 1.0;
  }
  s.lambda.delta_s = schools ? 1.0 : 0.0;
  return s;
}

double consumption_shock_path(double eps_D, bool onsite, int t, const EconParams& p) {
  if (t < p.t_start_lockdown) return 0.0;
  if (t < p.t_end_lockdown) return eps_D;
  if (!onsite || t >= p.t_end_pandemic) return 0.0;
  const int origin =
      p.recovery_origin == RecoveryOrigin::lockdown_start ? p.t_start_lockdown : p.t_end_lockdown;
  const double span = p.t_end_pandemic - origin;
  if (span <= 0) throw config_error("t_end_pandemic must lie after the recovery origin");
  return eps_D / std::log(100.0) * std::log(100.0 - 99.0 * (t - origin) / span);
}

double permanent_income_factor(int t, double l_tilde_lockdown, double l0_tilde, const EconParams& p) {
  if (t < p.t_start_lockdown) return 1.0;
  const double xiL = 1.0 - 0.5 * (l0_tilde - l_tilde_lockdown) / l0_tilde;
  if (t < p.t_end_lockdown) return xiL;
  const double nu = -(1.0 - p.rho) * (1.0 - xiL) * p.belief_L_share;
  double xi = xiL;
  for (int s = p.t_end_lockdown; s <= t; ++s) xi = 1.0 - p.rho + p.rho * xi + nu;
  return xi;
}

Vec lockdown_labor_supply(const PandemicCalibration& calib, const Scenario& s, int t,
                          const EconParams& p) {
  const auto n = calib.eps_S.size();
  if (t < p.t_start_lockdown) return Vec::Zero(n);
  Vec eps = calib.eps_S;
  if (t >= p.t_end_lockdown)
    for (Eigen::Index i = 0; i < n; ++i)
      if (s.open[i]) eps(i) = 0.0;
  return eps;
}

Vec other_final_demand_path(const Vec& f0, const Vec& f_shock, int t, const EconParams& p) {
  if (t < p.t_start_lockdown) return f0;
  return (Vec::Ones(f0.size()) - f_shock).cwiseProduct(f0);
}

ShockSchedule build_schedule(const Economy& econ, const PandemicCalibration& calib,
                             const Scenario& s, const EconParams& p, int horizon) {
  if (horizon < 0) throw config_error("horizon must be >= 0");
  const auto n = static_cast<Eigen::Index>(econ.n());
  if (calib.codes != econ.codes) throw data_error("calibration codes do not match the economy");
  if (s.open.size() != econ.n()) throw data_error("scenario size does not match the economy");
  const double l0 = econ.l0.sum();
  const double l_lock = (Vec::Ones(n) - calib.eps_S).cwiseProduct(econ.l0).sum();
  const bool reopens = std::any_of(s.open.begin(), s.open.end(), [](bool b) { return b; });
  const double xiL = permanent_income_factor(p.t_start_lockdown, l_lock, l0, p);
  const double nu = -(1.0 - p.rho) * (1.0 - xiL) * p.belief_L_share;

  ShockSchedule sc;
  sc.horizon = horizon;
  double xi = 1.0;
  for (int t = 0; t <= horizon; ++t) {
    sc.eps_S.push_back(lockdown_labor_supply(calib, s, t, p));
    Vec eps(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (s.open[i] || t < p.t_end_lockdown)
        eps(i) = consumption_shock_path(calib.eps_D(i), calib.onsite[i], t, p);
      else
        eps(i) = calib.eps_D(i);
    }
    sc.eps.push_back(eps);
    sc.f_d.push_back(other_final_demand_path(econ.f0, calib.f_shock, t, p));
    double nu_t = 0.0;
    if (t < p.t_start_lockdown) {
      xi = 1.0;
    } else if (t < p.t_end_lockdown || !reopens) {
      xi = xiL;
    } else {
      nu_t = nu;
      xi = 1.0 - p.rho + p.rho * xi + nu;
    }
    sc.xi.push_back(xi);
    sc.nu.push_back(nu_t);
    sc.lockdown.push_back(t >= p.t_start_lockdown && t < p.t_end_lockdown);
  }
  return sc;
}

ShockSchedule zero_schedule(const Economy& econ, int horizon) {
  const auto n = static_cast<Eigen::Index>(econ.n());
  ShockSchedule sc;
  sc.horizon = horizon;
  for (int t = 0; t <= horizon; ++t) {
    sc.eps_S.push_back(Vec::Zero(n));
    sc.eps.push_back(Vec::Zero(n));
    sc.f_d.push_back(econ.f0);
    sc.xi.push_back(1.0);
    sc.nu.push_back(0.0);
    sc.lockdown.push_back(false);
  }
  return sc;
}

}  // namespace reopen
