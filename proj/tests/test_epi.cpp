#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

using namespace reopen;
using namespace reopen::test;

namespace {

const nlohmann::json& F() { return oracle()["formulas"]; }

// Two industries with equal worker shares; eta sums to 0.62 so schools get eta_s = 0.23.
EpiCalibration two_industry() {
  EpiCalibration c;
  c.beta0 = {0.3, 0.2, 0.2, 0.09, 0.21};
  c.b_w = vec({70, 30});
  c.b_c = vec({1, 0});
  c.eta = vec({0.31, 0.31});
  return c;
}

PolicyLambda uniform_policy(double w, double c, double s, double h) {
  PolicyLambda L;
  L.delta_w = Vec::Constant(2, w);
  L.delta_c = Vec::Constant(2, c);
  L.delta_s = s;
  L.delta_h = h;
  return L;
}

}  // namespace

TEST(Epi, WorkRiskIsMeanOfIndices) {
  const Vec b = industry_work_risk(vec({80, 20}), vec({60, 40}));
  EXPECT_DOUBLE_EQ(b(0), F()["b_w"][0].get<double>());
  EXPECT_DOUBLE_EQ(b(1), F()["b_w"][1].get<double>());
  EXPECT_NEAR(b(0) / b.sum(), F()["b_w_normalized"][0].get<double>(), 1e-15);
  EXPECT_THROW(industry_work_risk(vec({120}), vec({0})), Error);
}

TEST(Epi, SchoolAttendanceUnderLockdown) {
  const EpiCalibration c = two_industry();
  const auto L = uniform_policy(0.37, 0, 0, 0);
  EXPECT_NEAR(school_attendance(L, c), F()["mu_s_lockdown"].get<double>(), 1e-12);
  EXPECT_DOUBLE_EQ(school_attendance(uniform_policy(0.37, 0, 1, 0), c), 1.0);
}

TEST(Epi, HomeChannelUnderLockdown) {
  const EpiCalibration c = two_industry();
  EXPECT_NEAR(beta_total(uniform_policy(0, 0, 0, 0), c).home, F()["home_lockdown"].get<double>(), 1e-15);
  EXPECT_NEAR(beta_total(uniform_policy(0, 0, 0, 1), c).home, 0.21, 1e-15);
}

TEST(Epi, FullyOpenRecoversBaseline) {
  const EpiCalibration c = two_industry();
  const auto b = beta_total(uniform_policy(1, 1, 1, 1), c);
  EXPECT_NEAR(b.total, 1.0, 1e-12);
  EXPECT_NEAR(b.r0, c.R0_pre, 1e-12);
  EXPECT_NEAR(b.r0_sd, 0.2 * b.r0, 1e-15);
}

TEST(Epi, PartsSumToTotal) {
  const EpiCalibration c = two_industry();
  const auto b = beta_total(uniform_policy(0.4, 0.3, 0.2, 0.1), c);
  EXPECT_NEAR(b.work + b.school + b.consumption + b.transport + b.home, b.total, 1e-15);
}

TEST(Epi, WorkRiskScaleInvariant) {
  EpiCalibration c = two_industry();
  PolicyLambda L = uniform_policy(0.4, 0.3, 0.2, 0.1);
  L.delta_w(1) = 0.9;
  const double before = beta_total(L, c).total;
  c.b_w *= 7.5;
  EXPECT_NEAR(beta_total(L, c).total, before, 1e-14);
}

TEST(Epi, BundledContactWeightsMatchOracle) {
  const auto& epi = bundled().epi;
  const auto& want = oracle()["bundled"]["beta0"];
  for (int k = 0; k < kChannels; ++k) EXPECT_NEAR(epi.beta0[k], want[k].get<double>(), 1e-14);
}

TEST(Epi, BundledScenarioBreakdownsMatchOracle) {
  const auto& d = bundled();
  const auto& calib = d.inputs.calibration;
  const auto lockdown = policy_lambda(ScenarioId::Lockdown, calib);
  for (auto id : named_scenarios()) {
    const auto& want = oracle()["bundled"]["scenarios"][to_string(id)];
    const auto L = policy_lambda(id, calib);
    const auto b = beta_total(L, d.epi);
    const double parts[] = {b.work, b.school, b.consumption, b.transport, b.home};
    for (int k = 0; k < kChannels; ++k)
      EXPECT_NEAR(parts[k], want["parts"][k].get<double>(), 1e-12) << to_string(id) << " channel " << k;
    EXPECT_NEAR(b.total, want["total"].get<double>(), 1e-12);
    const auto r = r0_estimate(L, lockdown, d.epi);
    EXPECT_NEAR(r.r0, want["r0"].get<double>(), 1e-12) << to_string(id);
    EXPECT_NEAR(r.r0_unscaled, want["r0_unscaled"].get<double>(), 1e-12);
    EXPECT_NEAR(r.r0_sd, 0.2 * r.r0, 1e-15);
  }
}

TEST(Epi, LockdownAnchoredAndOpenAboveOne) {
  const auto& d = bundled();
  const auto& calib = d.inputs.calibration;
  const auto lockdown = policy_lambda(ScenarioId::Lockdown, calib);
  EXPECT_NEAR(r0_estimate(lockdown, lockdown, d.epi).r0, d.epi.R0_lockdown_anchor, 1e-15);
  EXPECT_GT(r0_estimate(policy_lambda(ScenarioId::Open, calib), lockdown, d.epi).r0, 1.0);
}

TEST(Epi, MonotoneInEveryPolicyLever) {
  const auto& d = bundled();
  const auto base = policy_lambda(ScenarioId::Lockdown, d.inputs.calibration);
  const double t0 = beta_total(base, d.epi).total;
  for (Eigen::Index i = 0; i < base.delta_w.size(); ++i) {
    auto L = base;
    L.delta_w(i) = 1.0;
    ASSERT_GE(beta_total(L, d.epi).total, t0);
    L = base;
    L.delta_c(i) = 1.0;
    ASSERT_GE(beta_total(L, d.epi).total, t0);
  }
  auto L = base;
  L.delta_s = 1.0;
  EXPECT_GT(beta_total(L, d.epi).total, t0);
  L = base;
  L.delta_h = 1.0;
  EXPECT_GT(beta_total(L, d.epi).total, t0);
}

TEST(Epi, ShapeMismatchIsDataError) {
  const EpiCalibration c = two_industry();
  PolicyLambda L;
  L.delta_w = Vec::Ones(3);
  L.delta_c = Vec::Ones(3);
  EXPECT_THROW(beta_total(L, c), Error);
}

TEST(Epi, CalibrationValidation) {
  EpiCalibration c = two_industry();
  EXPECT_NO_THROW(c.validate());
  c.beta0[0] = 0.5;
  EXPECT_THROW(c.validate(), Error);
}

TEST(Sir, EarlyGrowthRate) {
  const double beta = 0.38, gamma = 1.0 / 7;
  const auto path = sir_integrate(beta, gamma, 1e8, 1, 0, 40, 0.01);
  const double t1 = 20, t2 = 40;
  const double I1 = path[static_cast<std::size_t>(t1 / 0.01)].I;
  const double I2 = path[static_cast<std::size_t>(t2 / 0.01)].I;
  const double growth = std::log(I2 / I1) / (t2 - t1);
  const double want = F()["sir_growth"].get<double>();
  EXPECT_NEAR(growth, want, 0.02 * want);
  EXPECT_NEAR(beta / gamma, F()["sir_r0"].get<double>(), 1e-12);
}

TEST(Sir, PopulationConserved) {
  const auto path = sir_integrate(0.5, 0.2, 990, 10, 0, 200, 0.1);
  for (const auto& p : path) {
    ASSERT_NEAR(p.S + p.I + p.R, 1000.0, 1e-9);
    ASSERT_GE(p.S, 0.0);
  }
  EXPECT_THROW(sir_integrate(0.5, 0.2, -1, 10, 0, 10), Error);
}
