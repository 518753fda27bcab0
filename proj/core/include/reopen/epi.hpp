#pragma once

#include <array>
#include <string>
#include <vector>

#include "reopen/economy.hpp"
#include "reopen/shocks.hpp"

namespace reopen {

enum class Channel { work = 0, school, consume, transport, home };
inline constexpr int kChannels = 5;
std::string to_string(Channel c);
Channel channel_from_string(const std::string& s);

struct PlaceRow {
  std::string place;
  Channel category = Channel::home;
  double visit = 0, duration = 0, crowd = 0, physical = 0;
  std::string industry;  // consumption places only
};

using PlaceContactTable = std::vector<PlaceRow>;

struct EpiCalibration {
  std::array<double, kChannels> beta0{};
  Vec b_w, b_c, eta;
  double eta_s = 0.23;
  double eta_u = 0.15;
  double g = 17.0 / 23.0;
  double kappa = 0.76;
  double R0_pre = 2.6;
  double R0_pre_sd = 0.54;
  double R0_lockdown_anchor = 0.62;
  double gamma_rec = 1.0 / 7.0;
  bool mu_s_adult_normalized = false;

  void validate() const;
};

struct BetaBreakdown {
  double work = 0, school = 0, consumption = 0, transport = 0, home = 0, total = 0;
  double r0 = 0, r0_sd = 0;
};

struct R0Estimate {
  double r0 = 0, r0_sd = 0;                    // anchored to the lockdown estimate
  double r0_unscaled = 0, r0_unscaled_sd = 0;  // R0_pre times total
};

PlaceContactTable load_places(const std::string& path);
std::array<double, kChannels> intensity_weights(const PlaceContactTable& table);
Vec industry_work_risk(const Vec& exposure, const Vec& proximity);
Vec consumption_weights(const PlaceContactTable& table, const Codes& codes);

// Reads epi_places.csv, epi_industry.csv and the epi parameter file.
EpiCalibration load_epi_calibration(const std::string& places_csv, const std::string& industry_csv,
                                    const std::string& params_file, const Codes& codes);

double school_attendance(const PolicyLambda& lambda, const EpiCalibration& calib);
BetaBreakdown beta_total(const PolicyLambda& lambda, const EpiCalibration& calib);
R0Estimate r0_estimate(const PolicyLambda& lambda, const PolicyLambda& lockdown,
                       const EpiCalibration& calib);

struct SirPoint {
  double t, S, I, R;
};
std::vector<SirPoint> sir_integrate(double beta, double gamma_rec, double s0, double i0,
                                    double r0_init, double horizon, double dt = 0.1);

}  // namespace reopen
