#pragma once

#include <functional>
#include <iosfwd>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "reopen/economy.hpp"
#include "reopen/shocks.hpp"

namespace reopen {

inline constexpr double kUnconstrained = std::numeric_limits<double>::infinity();

struct SimState {
  int t = 0;
  Mat S;
  Vec l, l_max;
  Vec d_prev;        // total demand of the previous day
  Vec x_cap, x_inp;  // constraints of the previous day, used for hiring
  Mat O;
  Vec c_d, f_d;
  double c_tilde_d = 0.0;
  double xi = 1.0;
  Vec theta;
  Vec x, c, f;
  Mat Z;
  Vec pi;
  double l_star = 0.0;
};

// Calibration bundle shared read-only by every step; the referenced objects must outlive it.
struct Model {
  const Economy* econ = nullptr;
  const CriticalityMatrix* crit = nullptr;
  const InventoryTargets* targets = nullptr;
  EconParams params;
  double m = 0.0;
  double l0_tilde = 0.0;
  Vec theta0;
  std::vector<std::vector<int>> binding;    // per industry, inputs that cap output
  std::vector<std::vector<int>> half;       // per industry, half-critical inputs
  std::vector<std::vector<bool>> critical;  // critical(i)[j]: input i must be fully used by j
};

Model make_model(const Economy& econ, const CriticalityMatrix& crit,
                 const InventoryTargets& targets, const EconParams& params);

SimState init_steady_state(const Economy& econ, const InventoryTargets& targets,
                           const EconParams& params);

double total_consumption_demand(double prev, double l_star, double xi, double eps_tilde,
                                double l0_tilde, double m, const EconParams& p);
std::pair<Vec, double> preference_shares(const Vec& theta0, const Vec& eps, double delta_s_save,
                                         double rho);
Mat intermediate_orders(const Mat& S, const Mat& A, const Mat& Z0, const Vec& n_days,
                        const Vec& d_prev, double tau);
Vec capacity_limit(const Vec& l, const Economy& econ);
Vec input_limit(const Mat& S, const Model& model);
Vec input_limit(const Mat& S, const Economy& econ, const CriticalityMatrix& crit, ProdFn mode);

struct Rationed {
  Vec x, c, f, d;
  Mat Z;
};
Rationed realize_and_ration(const Vec& x_cap, const Vec& x_inp, const Mat& O, const Vec& c_d,
                            const Vec& f_d);
Mat consume_inputs_and_update_inventories(const Mat& S, const Mat& Z, const Vec& x,
                                          const Model& model);
Vec labor_adjustment(const Vec& l, const Economy& econ, const Vec& x_cap, const Vec& x_inp,
                     const Vec& d, const EconParams& p, const Vec& l_max);
double household_income(double l_tilde, double l0_tilde, double b);

void step(SimState& s, const Model& model, const ShockSchedule& schedule);

struct SimSeries {
  Codes codes;
  std::vector<double> x, l, pi, c, va;
  std::vector<Vec> x_ind, l_ind, c_ind, f_ind;

  std::size_t size() const { return x.size(); }
  void record(const SimState& s);
  void write_csv(std::ostream& out) const;
};

using StepObserver = std::function<void(const SimState&)>;

SimSeries run_simulation(const Model& model, const ShockSchedule& schedule, int horizon,
                         const StepObserver& observer = {});
SimSeries run_simulation(const Economy& econ, const CriticalityMatrix& crit,
                         const InventoryTargets& targets, const EconParams& params,
                         const ShockSchedule& schedule, int horizon);

}  // namespace reopen
