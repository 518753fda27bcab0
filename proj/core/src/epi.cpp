#include "reopen/epi.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "csv.hpp"
#include "reopen/error.hpp"

namespace reopen {

using detail::parse_double;

std::string to_string(Channel c) {
  switch (c) {
    case Channel::work: return "work";
    case Channel::school: return "school";
    case Channel::consume: return "consume";
    case Channel::transport: return "transport";
    case Channel::home: return "home";
  }
  return "?";
}

Channel channel_from_string(const std::string& s) {
  for (int k = 0; k < kChannels; ++k)
    if (detail::lower(s) == to_string(static_cast<Channel>(k))) return static_cast<Channel>(k);
  throw data_error("unknown contact category '" + s + "'");
}

PlaceContactTable load_places(const std::string& path) {
  auto rows = detail::read_csv(path);
  PlaceContactTable t;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const auto& r = rows[k];
    if (r.size() < 6) throw data_error("short row in " + path);
    PlaceRow p;
    p.place = r[0];
    p.category = channel_from_string(r[1]);
    p.visit = parse_double(r[2], path);
    p.duration = parse_double(r[3], path);
    p.crowd = parse_double(r[4], path);
    p.physical = parse_double(r[5], path);
    if (r.size() > 6) p.industry = r[6];
    if (p.visit < 0 || p.duration < 0 || p.crowd < 0 || p.physical < 0)
      throw data_error("negative contact entry for " + p.place);
    t.push_back(p);
  }
  return t;
}

namespace {

double intensity(const PlaceRow& p) { return p.visit * p.duration * p.crowd; }

}  // namespace

std::array<double, kChannels> intensity_weights(const PlaceContactTable& table) {
  double total = 0.0;
  for (const auto& p : table) total += intensity(p);
  if (!(total > 0)) throw data_error("contact table has zero total intensity");
  std::array<double, kChannels> w{};
  for (const auto& p : table) w[static_cast<int>(p.category)] += intensity(p) / total;
  return w;
}

Vec industry_work_risk(const Vec& exposure, const Vec& proximity) {
  if (exposure.size() != proximity.size()) throw data_error("exposure/proximity size mismatch");
  auto ok = [](const Vec& v) { return v.allFinite() && (v.array() >= 0).all() && (v.array() <= 100).all(); };
  if (!ok(exposure) || !ok(proximity)) throw data_error("risk index outside [0,100]");
  return 0.5 * (exposure + proximity);
}

Vec consumption_weights(const PlaceContactTable& table, const Codes& codes) {
  Vec b = Vec::Zero(codes.size());
  for (const auto& p : table) {
    if (p.category != Channel::consume || p.industry.empty()) continue;
    auto it = std::find(codes.begin(), codes.end(), p.industry);
    if (it == codes.end()) throw data_error("unknown industry code " + p.industry + " for " + p.place);
    b(it - codes.begin()) += intensity(p);
  }
  const double s = b.sum();
  if (!(s > 0)) throw data_error("no consumption places mapped to industries");
  return b / s;
}

void EpiCalibration::validate() const {
  double s = 0.0;
  for (double v : beta0) {
    if (!(v >= 0)) throw data_error("negative beta share");
    s += v;
  }
  if (std::abs(s - 1.0) > 1e-9) throw data_error("beta shares do not sum to 1");
  if ((b_w.array() < 0).any() || (b_c.array() < 0).any() || (eta.array() < 0).any())
    throw data_error("negative epidemic weight");
  if (std::abs(b_c.sum() - 1.0) > 1e-9) throw data_error("consumption weights do not sum to 1");
  if (std::abs(eta_s + eta_u + eta.sum() - 1.0) > 1e-9)
    throw data_error("population shares do not sum to 1");
  if (!(eta_s > 0 || eta.sum() > 0)) throw data_error("no workers or students in calibration");
}

EpiCalibration load_epi_calibration(const std::string& places_csv, const std::string& industry_csv,
                                    const std::string& params_file, const Codes& codes) {
  EpiCalibration c;
  auto places = load_places(places_csv);
  c.beta0 = intensity_weights(places);
  c.b_c = consumption_weights(places, codes);

  auto rows = detail::read_csv(industry_csv);
  const auto n = codes.size();
  Vec ex = Vec::Constant(n, std::nan("")), pr = ex, eta = ex;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const auto& r = rows[k];
    if (r.size() < 4) throw data_error("short row in " + industry_csv);
    auto it = std::find(codes.begin(), codes.end(), r[0]);
    if (it == codes.end()) throw data_error("unknown industry code " + r[0] + " in " + industry_csv);
    auto i = it - codes.begin();
    ex(i) = parse_double(r[1], industry_csv);
    pr(i) = parse_double(r[2], industry_csv);
    eta(i) = parse_double(r[3], industry_csv);
  }
  if (!eta.allFinite()) throw data_error("epi industry file misses industries: " + industry_csv);
  c.b_w = industry_work_risk(ex, pr);
  c.eta = eta;

  auto kv = read_kv_file(params_file);
  std::map<std::string, int> beta_keys = {
      {"beta_w", 0}, {"beta_s", 1}, {"beta_c", 2}, {"beta_T", 3}, {"beta_h", 4}};
  int beta_given = 0;
  std::array<double, kChannels> beta{};
  for (const auto& [k, v] : kv) {
    double d;
    try {
      d = parse_double(v, params_file);
    } catch (const Error&) {
      throw config_error("bad value for " + k + ": '" + v + "'");
    }
    if (beta_keys.count(k)) {
      beta[beta_keys[k]] = d;
      ++beta_given;
    } else if (k == "R0_pre") c.R0_pre = d;
    else if (k == "R0_pre_sd") c.R0_pre_sd = d;
    else if (k == "R0_lockdown_anchor") c.R0_lockdown_anchor = d;
    else if (k == "gamma_rec") c.gamma_rec = d;
    else if (k == "g") c.g = d;
    else if (k == "kappa") c.kappa = d;
    else if (k == "eta_s") c.eta_s = d;
    else if (k == "eta_u") c.eta_u = d;
    else if (k == "mu_s_adult_normalized") c.mu_s_adult_normalized = d != 0.0;
    else throw config_error("unknown epidemic parameter '" + k + "'");
  }
  if (beta_given == kChannels) c.beta0 = beta;
  else if (beta_given != 0) throw config_error("give all five beta shares or none");
  c.validate();
  return c;
}

double school_attendance(const PolicyLambda& lambda, const EpiCalibration& calib) {
  double working = lambda.delta_w.dot(calib.eta);
  if (calib.mu_s_adult_normalized) {
    const double adults = calib.eta.sum();
    working = adults > 0 ? working / adults : 0.0;
  }
  return lambda.delta_s + (1.0 - lambda.delta_s) * calib.g * working;
}

BetaBreakdown beta_total(const PolicyLambda& lambda, const EpiCalibration& calib) {
  lambda.validate();
  if (lambda.delta_w.size() != calib.eta.size()) throw data_error("policy size does not match calibration");
  const double wnorm = calib.eta.dot(calib.b_w);
  const double pop = calib.eta_s + calib.eta.sum();
  if (!(wnorm > 0) || !(pop > 0)) throw numerical_error("zero normalisation in beta decomposition");
  const double mu = school_attendance(lambda, calib);
  const double commuting = (mu * calib.eta_s + lambda.delta_w.dot(calib.eta)) / pop;
  BetaBreakdown b;
  b.work = calib.beta0[0] * lambda.delta_w.cwiseProduct(calib.eta).dot(calib.b_w) / wnorm;
  b.school = calib.beta0[1] * mu;
  b.consumption = calib.beta0[2] * lambda.delta_c.dot(calib.b_c);
  b.transport = calib.beta0[3] * commuting * commuting;
  b.home = calib.beta0[4] * ((1.0 - lambda.delta_h) * calib.kappa + lambda.delta_h);
  b.total = b.work + b.school + b.consumption + b.transport + b.home;
  b.r0 = calib.R0_pre * b.total;
  b.r0_sd = 0.2 * b.r0;
  return b;
}

R0Estimate r0_estimate(const PolicyLambda& lambda, const PolicyLambda& lockdown,
                       const EpiCalibration& calib) {
  const double tot = beta_total(lambda, calib).total;
  const double lock = beta_total(lockdown, calib).total;
  if (!(lock > 0)) throw numerical_error("lockdown transmission is zero");
  R0Estimate r;
  r.r0 = calib.R0_lockdown_anchor * (tot / lock);
  r.r0_sd = 0.2 * r.r0;
  r.r0_unscaled = calib.R0_pre * tot;
  r.r0_unscaled_sd = 0.2 * r.r0_unscaled;
  return r;
}

std::vector<SirPoint> sir_integrate(double beta, double gamma_rec, double s0, double i0,
                                    double r0_init, double horizon, double dt) {
  if (s0 < 0 || i0 < 0 || r0_init < 0) throw data_error("negative population");
  const double M = s0 + i0 + r0_init;
  if (!(M > 0)) throw data_error("empty population");
  if (!(dt > 0) || horizon < 0) throw config_error("need dt > 0 and horizon >= 0");
  const auto steps = static_cast<long>(std::llround(horizon / dt));
  std::vector<SirPoint> out;
  out.reserve(steps + 1);
  double S = s0, I = i0, R = r0_init;
  out.push_back({0.0, S, I, R});
  for (long k = 1; k <= steps; ++k) {
    const double inf = beta * S * I / M * dt;
    const double rec = gamma_rec * I * dt;
    S -= inf;
    I += inf - rec;
    R += rec;
    out.push_back({k * dt, S, I, R});
  }
  return out;
}

}  // namespace reopen
