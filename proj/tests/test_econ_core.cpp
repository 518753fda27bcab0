#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "support.hpp"

using namespace reopen;
using namespace reopen::test;

namespace {

const nlohmann::json& F() { return oracle()["formulas"]; }

// Industry 2 buys from 0 and 1; input 1 is critical and input 0 important for it.
struct ThreeSector {
  Economy econ;
  CriticalityMatrix crit;
  ThreeSector() {
    Mat Z = Mat::Zero(3, 3);
    Z(0, 2) = 10;
    Z(1, 2) = 30;
    econ = make_economy({"a", "b", "c"}, Z, Vec::Constant(3, 100), vec({90, 70, 100}), Vec::Zero(3),
                        vec({50, 50, 30}), Vec::Constant(3, 10));
    Mat r = Mat::Zero(3, 3);
    r(1, 2) = 1.0;
    r(0, 2) = 0.5;
    crit = aggregate_criticality({r});
  }
  Mat stock(double s0, double s1) const {
    Mat S = Mat::Zero(3, 3);
    S(0, 2) = s0;
    S(1, 2) = s1;
    return S;
  }
};

}  // namespace

TEST(InputLimit, ProductionFunctionsOnHandExample) {
  ThreeSector t;
  const Mat S = t.stock(5, 12);
  auto limit = [&](ProdFn f) { return input_limit(S, t.econ, t.crit, f)(2); };
  EXPECT_DOUBLE_EQ(limit(ProdFn::critical_baseline), F()["x_inp_critical"].get<double>());
  EXPECT_DOUBLE_EQ(limit(ProdFn::leontief), 40.0);
  EXPECT_DOUBLE_EQ(limit(ProdFn::important_critical), 40.0);
  EXPECT_DOUBLE_EQ(limit(ProdFn::important_half), 40.0);
  EXPECT_DOUBLE_EQ(limit(ProdFn::linear), F()["x_inp_linear"].get<double>());
}

TEST(InputLimit, HalfCriticalUsesBaselineOutput) {
  ThreeSector t;
  const Mat S = t.stock(0, 1000);
  EXPECT_DOUBLE_EQ(input_limit(S, t.econ, t.crit, ProdFn::important_half)(2), F()["x_inp_half"].get<double>());
  EXPECT_DOUBLE_EQ(input_limit(S, t.econ, t.crit, ProdFn::important_critical)(2), 0.0);
  EXPECT_DOUBLE_EQ(input_limit(S, t.econ, t.crit, ProdFn::critical_baseline)(2), 1000 / 0.3);
}

TEST(InputLimit, UnconstrainedWithoutInputs) {
  ThreeSector t;
  const Vec v = input_limit(t.stock(5, 12), t.econ, t.crit, ProdFn::leontief);
  EXPECT_TRUE(std::isinf(v(0)));
  EXPECT_TRUE(std::isinf(v(1)));
}

TEST(InputLimit, CriticalityShapeMismatchIsDataError) {
  ThreeSector t;
  EXPECT_THROW(input_limit(t.stock(1, 1), t.econ, all_critical(2), ProdFn::leontief), Error);
}

TEST(Formulas, CapacityLimit) {
  Economy e = toy_economy();
  EXPECT_DOUBLE_EQ(capacity_limit(vec({15, 40}), e)(0), F()["x_cap"].get<double>());
  EXPECT_DOUBLE_EQ(capacity_limit(vec({15, 20}), e)(1), 50.0);
}

TEST(Formulas, PreferenceShares) {
  auto [theta, eps_tilde] = preference_shares(vec({0.5, 0.5}), vec({1.0, 0.0}), 0.5, 0.987);
  EXPECT_DOUBLE_EQ(theta(0), F()["theta"][0].get<double>());
  EXPECT_DOUBLE_EQ(theta(1), F()["theta"][1].get<double>());
  EXPECT_NEAR(eps_tilde, F()["eps_tilde"].get<double>(), 1e-15);
  EXPECT_THROW(preference_shares(vec({0.5, 0.5}), vec({1.0, 1.0}), 0.5, 0.987), Error);
}

TEST(Formulas, IntermediateOrders) {
  Mat S(1, 1), A(1, 1), Z0(1, 1);
  A << 0.2;
  Z0 << 20;
  S << 150;
  EXPECT_DOUBLE_EQ(intermediate_orders(S, A, Z0, vec({10}), vec({100}), 10)(0, 0),
                   F()["order"].get<double>());
  S << 400;
  EXPECT_DOUBLE_EQ(intermediate_orders(S, A, Z0, vec({10}), vec({100}), 10)(0, 0),
                   F()["order_overfull"].get<double>());
}

TEST(Formulas, ProportionalRationing) {
  Mat O(1, 1);
  O << 30;
  const Rationed r = realize_and_ration(vec({50}), vec({40}), O, vec({20}), vec({10}));
  EXPECT_DOUBLE_EQ(r.x(0), F()["rationed_x"].get<double>());
  EXPECT_DOUBLE_EQ(r.d(0), 60);
  const double share = F()["rationed_share"].get<double>();
  EXPECT_DOUBLE_EQ(r.Z(0, 0), 30 * share);
  EXPECT_DOUBLE_EQ(r.c(0), 20 * share);
  EXPECT_DOUBLE_EQ(r.f(0), 10 * share);
  EXPECT_THROW(realize_and_ration(vec({50}), vec({40}), -O, vec({20}), vec({10})), Error);
}

TEST(Formulas, ZeroDemandGivesZeroOutput) {
  Mat O = Mat::Zero(1, 1);
  const Rationed r = realize_and_ration(vec({50}), vec({40}), O, vec({0}), vec({0}));
  EXPECT_EQ(r.x(0), 0.0);
}

TEST(Formulas, LabourAdjustment) {
  Economy e = make_economy({"a"}, Mat::Zero(1, 1), vec({100}), vec({100}), vec({0}), vec({30}), vec({0}));
  EconParams p;
  p.gamma_H = 1.0 / 30;
  p.gamma_F = 1.0 / 15;
  const double dl = F()["delta_l"].get<double>();
  EXPECT_DOUBLE_EQ(0.3 * (80 - 100), dl);
  const Vec down = labor_adjustment(vec({30}), e, vec({100}), vec({90}), vec({80}), p, vec({30}));
  EXPECT_NEAR(30 - down(0), F()["labour_fall"].get<double>(), 1e-12);
  const Vec up = labor_adjustment(vec({15}), e, vec({50}), vec({90}), vec({80}), p, vec({30}));
  EXPECT_NEAR(up(0), 15 + 9.0 / 30, 1e-12);
  const Vec capped = labor_adjustment(vec({29.9}), e, vec({50}), vec({90}), vec({80}), p, vec({30}));
  EXPECT_DOUBLE_EQ(capped(0), 30);
}

TEST(Formulas, HouseholdIncome) {
  EXPECT_DOUBLE_EQ(household_income(80, 100, 0.8), F()["l_star"].get<double>());
}

TEST(Formulas, ConsumptionFunctionsAgreeAtSteadyState) {
  EconParams p;
  const double m = 0.6, l0 = 200;
  for (ConsFn f : {ConsFn::muellbauer, ConsFn::keynesian, ConsFn::fixed}) {
    p.cons_fn = f;
    EXPECT_NEAR(total_consumption_demand(m * l0, l0, 1.0, 0.0, l0, m, p), m * l0, 1e-12);
  }
  p.cons_fn = ConsFn::keynesian;
  EXPECT_DOUBLE_EQ(total_consumption_demand(1, 150, 0.5, 0.1, l0, m, p), m * 150);
  p.cons_fn = ConsFn::muellbauer;
  EXPECT_THROW(total_consumption_demand(0.0, 150, 1, 0, l0, m, p), Error);
}

TEST(Formulas, CriticalInputsAreUsedInFull) {
  ThreeSector t;
  EconParams p;
  InventoryTargets tg = inventory_targets_from_ratios(Vec::Constant(3, 1.0 / 3));
  const Model model = make_model(t.econ, t.crit, tg, p);
  const Mat S = t.stock(1, 1);
  const Mat Z = Mat::Zero(3, 3);
  const Mat out = consume_inputs_and_update_inventories(S, Z, vec({0, 0, 100}), model);
  EXPECT_EQ(out(1, 2), 0.0);
  EXPECT_EQ(out(0, 2), 0.0);
  const Mat out2 = consume_inputs_and_update_inventories(t.stock(50, 50), Z, vec({0, 0, 10}), model);
  EXPECT_DOUBLE_EQ(out2(0, 2), 49);
  EXPECT_DOUBLE_EQ(out2(1, 2), 47);
}

TEST(Engine, SteadyStateIsFixedPoint) {
  const auto& in = bundled().inputs;
  const auto s = run_simulation(in.economy, in.criticality, in.targets, in.params,
                                zero_schedule(in.economy, 200), 200);
  ASSERT_EQ(s.size(), 201u);
  for (std::size_t t = 0; t < s.size(); ++t) {
    const double err = (s.x_ind[t] - in.economy.x0).cwiseAbs().maxCoeff() / in.economy.x0.maxCoeff();
    ASSERT_LE(err, 1e-9) << "day " << t;
  }
}

TEST(Engine, SteadyStateForEveryProductionFunction) {
  const auto& in = bundled().inputs;
  for (ProdFn f : {ProdFn::leontief, ProdFn::linear, ProdFn::critical_baseline, ProdFn::important_critical,
                   ProdFn::important_half}) {
    EconParams p = in.params;
    p.prod_fn = f;
    const auto s = run_simulation(in.economy, in.criticality, in.targets, p, zero_schedule(in.economy, 30), 30);
    EXPECT_NEAR(s.x.back(), s.x.front(), 1e-9 * s.x.front()) << to_string(f);
  }
}

TEST(Engine, DailyAccountingAndBounds) {
  const auto& d = bundled();
  const auto& in = d.inputs;
  const Model model = make_model(in.economy, in.criticality, in.targets, in.params);
  const Scenario s = make_scenario(ScenarioId::Lockdown, in.calibration);
  const auto sched = build_schedule(in.economy, in.calibration, s, in.params, 120);
  SimState st = init_steady_state(in.economy, in.targets, in.params);
  for (int t = 1; t <= 120; ++t) {
    step(st, model, sched);
    const Vec rhs = st.Z.rowwise().sum() + st.c + st.f;
    ASSERT_LE((st.x - rhs).cwiseAbs().maxCoeff(), 1e-12 * in.economy.x0.maxCoeff()) << "day " << t;
    ASSERT_GE(st.S.minCoeff(), 0.0);
    ASSERT_NEAR(st.theta.sum(), 1.0, 1e-12);
    for (Eigen::Index i = 0; i < st.x.size(); ++i) {
      ASSERT_LE(st.x(i), st.x_cap(i) * (1 + 1e-12) + 1e-12);
      ASSERT_LE(st.x(i), st.x_inp(i) * (1 + 1e-12) + 1e-12);
      ASSERT_LE(st.l(i), st.l_max(i) + 1e-12);
      ASSERT_GE(st.l(i), 0.0);
    }
    const Vec va = st.l + st.pi;
    ASSERT_NEAR(va.sum(), st.l.sum() + st.pi.sum(), 1e-9);
  }
}

TEST(Engine, FrozenLabourFollowsSupplyCap) {
  const auto& in = bundled().inputs;
  EconParams p = in.params;
  p.gamma_H = p.gamma_F = 0.0;
  const Scenario s = make_scenario(ScenarioId::Lockdown, in.calibration);
  const auto series = run_simulation(in.economy, in.criticality, in.targets, p,
                                     build_schedule(in.economy, in.calibration, s, p, 40), 40);
  const Vec cap = (Vec::Ones(in.economy.n()) - in.calibration.eps_S).cwiseProduct(in.economy.l0);
  for (int t = p.t_start_lockdown; t <= 40; ++t)
    ASSERT_LE((series.l_ind[t] - cap).cwiseAbs().maxCoeff(), 1e-12) << "day " << t;
  EXPECT_LE((series.l_ind[1] - in.economy.l0).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Engine, LockdownReducesOutput) {
  const auto& in = bundled().inputs;
  const Scenario s = make_scenario(ScenarioId::Lockdown, in.calibration);
  const auto series = run_simulation(in.economy, in.criticality, in.targets, in.params,
                                     build_schedule(in.economy, in.calibration, s, in.params, 60), 60);
  EXPECT_LT(series.x[60], 0.9 * series.x[0]);
  EXPECT_GT(series.x[60], 0.3 * series.x[0]);
}

TEST(Engine, ScheduleTooShortIsConfigError) {
  const auto& in = bundled().inputs;
  EXPECT_THROW(run_simulation(in.economy, in.criticality, in.targets, in.params, zero_schedule(in.economy, 5), 10),
               Error);
}

TEST(Engine, ObserverSeesEveryDay) {
  const auto& in = bundled().inputs;
  const Model m = make_model(in.economy, in.criticality, in.targets, in.params);
  int calls = 0;
  run_simulation(m, zero_schedule(in.economy, 12), 12, [&](const SimState&) { ++calls; });
  EXPECT_EQ(calls, 13);
}

TEST(Engine, CsvHasOneRowPerDay) {
  const auto& in = bundled().inputs;
  const auto s = run_simulation(in.economy, in.criticality, in.targets, in.params, zero_schedule(in.economy, 3), 3);
  std::ostringstream os;
  s.write_csv(os);
  const std::string text = os.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 5);
  EXPECT_EQ(text.rfind("day,x,l,pi,c,va,x_A01", 0), 0u);
}
