#include "reopen/engine.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "csv.hpp"
#include "reopen/error.hpp"

namespace reopen {

namespace {

struct Sets {
  std::vector<std::vector<int>> binding, half;
};

Sets constraint_sets(const Economy& econ, const CriticalityMatrix& crit, ProdFn mode) {
  const auto n = static_cast<int>(econ.n());
  Sets s;
  s.binding.assign(n, {});
  s.half.assign(n, {});
  for (int j = 0; j < n; ++j) {
    auto add = [&](std::vector<int>& dst, const std::vector<int>& src) {
      for (int i : src)
        if (econ.A(i, j) > 0) dst.push_back(i);
    };
    switch (mode) {
      case ProdFn::leontief:
        for (int i = 0; i < n; ++i)
          if (econ.A(i, j) > 0) s.binding[j].push_back(i);
        break;
      case ProdFn::linear: break;
      case ProdFn::critical_baseline: add(s.binding[j], crit.critical[j]); break;
      case ProdFn::important_critical:
        add(s.binding[j], crit.critical[j]);
        add(s.binding[j], crit.important[j]);
        std::sort(s.binding[j].begin(), s.binding[j].end());
        break;
      case ProdFn::important_half:
        add(s.binding[j], crit.critical[j]);
        add(s.half[j], crit.important[j]);
        break;
    }
  }
  return s;
}

Vec input_limit_sets(const Mat& S, const Economy& econ, const Sets& sets, ProdFn mode) {
  const auto n = static_cast<Eigen::Index>(econ.n());
  Vec inp = Vec::Constant(n, kUnconstrained);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (mode == ProdFn::linear) {
      double a = econ.A.col(j).sum();
      if (a > 0) inp(j) = S.col(j).sum() / a;
      continue;
    }
    for (int i : sets.binding[j]) inp(j) = std::min(inp(j), S(i, j) / econ.A(i, j));
    for (int k : sets.half[j]) inp(j) = std::min(inp(j), 0.5 * (S(k, j) / econ.A(k, j) + econ.x0(j)));
  }
  return inp;
}

void check_crit(const Economy& econ, const CriticalityMatrix& crit) {
  if (crit.ratings.rows() != static_cast<Eigen::Index>(econ.n()) ||
      crit.critical.size() != econ.n() || crit.important.size() != econ.n())
    throw data_error("criticality matrix does not match the economy");
}

}  // namespace

Model make_model(const Economy& econ, const CriticalityMatrix& crit,
                 const InventoryTargets& targets, const EconParams& params) {
  params.validate();
  check_crit(econ, crit);
  const auto n = econ.n();
  if (static_cast<std::size_t>(targets.n_days.size()) != n)
    throw data_error("inventory targets do not match the economy");
  Model m;
  m.econ = &econ;
  m.crit = &crit;
  m.targets = &targets;
  m.params = params;
  m.l0_tilde = econ.l0.sum();
  m.m = params.m ? *params.m : econ.c0.sum() / m.l0_tilde;
  const double c0 = econ.c0.sum();
  m.theta0 = c0 > 0 ? Vec(econ.c0 / c0) : Vec::Constant(n, 1.0 / n);
  Sets s = constraint_sets(econ, crit, params.prod_fn);
  m.binding = std::move(s.binding);
  m.half = std::move(s.half);
  m.critical.assign(n, std::vector<bool>(n, false));
  for (std::size_t j = 0; j < n; ++j)
    for (int i : m.binding[j]) m.critical[i][j] = true;
  return m;
}

SimState init_steady_state(const Economy& econ, const InventoryTargets& targets,
                           const EconParams& params) {
  params.validate();
  const auto n = static_cast<Eigen::Index>(econ.n());
  if (targets.n_days.size() != n) throw data_error("inventory targets do not match the economy");
  const double l0 = econ.l0.sum();
  const double m = params.m ? *params.m : econ.c0.sum() / l0;
  const double c0 = econ.c0.sum();
  SimState s;
  s.t = 0;
  s.S = econ.Z0 * targets.n_days.asDiagonal();
  s.l = econ.l0;
  s.l_max = econ.l0;
  s.d_prev = econ.x0;
  s.x_cap = econ.x0;
  s.x_inp = Vec::Constant(n, kUnconstrained);
  s.O = econ.Z0;
  s.c_d = econ.c0;
  s.f_d = econ.f0;
  s.c_tilde_d = m * l0;
  s.xi = 1.0;
  s.theta = c0 > 0 ? Vec(econ.c0 / c0) : Vec::Constant(n, 1.0 / n);
  s.x = econ.x0;
  s.c = econ.c0;
  s.f = econ.f0;
  s.Z = econ.Z0;
  s.pi = econ.pi0;
  s.l_star = l0;
  return s;
}

double total_consumption_demand(double prev, double l_star, double xi, double eps_tilde,
                                double l0_tilde, double m, const EconParams& p) {
  switch (p.cons_fn) {
    case ConsFn::fixed: return m * l0_tilde;
    case ConsFn::keynesian: return m * l_star;
    case ConsFn::muellbauer: break;
  }
  if (!(prev > 0) || !(l_star > 0) || !(xi > 0) || !(l0_tilde > 0) || !(m > 0))
    throw numerical_error("non-positive income in consumption function");
  const double h = 0.5 * (1.0 - p.rho);
  return std::exp(p.rho * std::log(prev) + h * std::log(m * l_star) +
                  h * std::log(m * xi * l0_tilde) - eps_tilde);
}

std::pair<Vec, double> preference_shares(const Vec& theta0, const Vec& eps, double delta_s_save,
                                         double rho) {
  Vec bar = theta0.cwiseProduct(Vec::Ones(eps.size()) - eps);
  const double sum = bar.sum();
  if (!(sum > 0)) throw numerical_error("all preference weights are zero");
  return {bar / sum, delta_s_save * (1.0 - sum) * (1.0 - rho)};
}

Mat intermediate_orders(const Mat& S, const Mat& A, const Mat& Z0, const Vec& n_days,
                        const Vec& d_prev, double tau) {
  Mat O = A * d_prev.asDiagonal();
  O += (Z0 * n_days.asDiagonal() - S) / tau;
  return O.cwiseMax(0.0);
}

Vec capacity_limit(const Vec& l, const Economy& econ) {
  Vec cap(l.size());
  for (Eigen::Index i = 0; i < l.size(); ++i) {
    if (econ.l0(i) == 0) {
      if (econ.x0(i) > 0) throw data_error("zero baseline labour with positive output");
      cap(i) = 0.0;
    } else {
      cap(i) = l(i) / econ.l0(i) * econ.x0(i);
    }
  }
  return cap;
}

Vec input_limit(const Mat& S, const Model& model) {
  Sets sets{model.binding, model.half};
  return input_limit_sets(S, *model.econ, sets, model.params.prod_fn);
}

Vec input_limit(const Mat& S, const Economy& econ, const CriticalityMatrix& crit, ProdFn mode) {
  check_crit(econ, crit);
  return input_limit_sets(S, econ, constraint_sets(econ, crit, mode), mode);
}

Rationed realize_and_ration(const Vec& x_cap, const Vec& x_inp, const Mat& O, const Vec& c_d,
                            const Vec& f_d) {
  if ((O.array() < 0).any() || (c_d.array() < 0).any() || (f_d.array() < 0).any())
    throw numerical_error("negative demand component");
  const auto n = x_cap.size();
  Rationed r;
  r.d = O.rowwise().sum() + c_d + f_d;
  r.x = Vec::Zero(n);
  r.c = Vec::Zero(n);
  r.f = Vec::Zero(n);
  r.Z = Mat::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(r.d(i) > 0)) continue;
    const double x = std::min({x_cap(i), x_inp(i), r.d(i)});
    r.x(i) = x;
    if (x == r.d(i)) {
      r.Z.row(i) = O.row(i);
      r.c(i) = c_d(i);
      r.f(i) = f_d(i);
    } else {
      const double ratio = x / r.d(i);
      r.Z.row(i) = O.row(i) * ratio;
      r.c(i) = c_d(i) * ratio;
      r.f(i) = f_d(i) * ratio;
    }
  }
  return r;
}

Mat consume_inputs_and_update_inventories(const Mat& S, const Mat& Z, const Vec& x,
                                          const Model& model) {
  const Mat& A = model.econ->A;
  const auto n = S.rows();
  Mat out(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      double need = A(i, j) * x(j);
      double use = model.critical[i][j] ? need : std::min(need, S(i, j));
      out(i, j) = std::max(S(i, j) + Z(i, j) - use, 0.0);
    }
  return out;
}

Vec labor_adjustment(const Vec& l, const Economy& econ, const Vec& x_cap, const Vec& x_inp,
                     const Vec& d, const EconParams& p, const Vec& l_max) {
  Vec out(l.size());
  for (Eigen::Index i = 0; i < l.size(); ++i) {
    double dl = econ.x0(i) > 0 ? econ.l0(i) / econ.x0(i) * (std::min(x_inp(i), d(i)) - x_cap(i)) : 0.0;
    double v = l(i) + (dl >= 0 ? p.gamma_H : p.gamma_F) * dl;
    out(i) = std::clamp(v, 0.0, l_max(i));
  }
  return out;
}

double household_income(double l_tilde, double l0_tilde, double b) {
  return l_tilde + b * (l0_tilde - l_tilde);
}

void step(SimState& s, const Model& model, const ShockSchedule& schedule) {
  const Economy& econ = *model.econ;
  const EconParams& p = model.params;
  const int t = s.t + 1;
  if (t > schedule.horizon) throw config_error("shock schedule shorter than the simulation");

  s.l_max = (Vec::Ones(econ.n()) - schedule.eps_S[t]).cwiseProduct(econ.l0);
  s.l = labor_adjustment(s.l, econ, s.x_cap, s.x_inp, s.d_prev, p, s.l_max);

  s.l_star = household_income(s.l.sum(), model.l0_tilde, p.b);
  s.xi = schedule.xi[t];
  auto [theta, eps_tilde] = preference_shares(model.theta0, schedule.eps[t], p.delta_s_save, p.rho);
  s.theta = std::move(theta);
  s.c_tilde_d = total_consumption_demand(s.c_tilde_d, s.l_star, s.xi, eps_tilde, model.l0_tilde,
                                         model.m, p);
  s.c_d = s.theta * s.c_tilde_d;
  s.O = intermediate_orders(s.S, econ.A, econ.Z0, model.targets->n_days, s.d_prev, p.tau);
  s.f_d = schedule.f_d[t];

  s.x_cap = capacity_limit(s.l, econ);
  s.x_inp = input_limit(s.S, model);

  Rationed r = realize_and_ration(s.x_cap, s.x_inp, s.O, s.c_d, s.f_d);
  if (!r.x.allFinite()) throw numerical_error("non-finite output on day " + std::to_string(t));

  s.S = consume_inputs_and_update_inventories(s.S, r.Z, r.x, model);
  Vec e(econ.n());
  for (Eigen::Index i = 0; i < e.size(); ++i)
    e(i) = econ.x0(i) > 0 ? econ.e0(i) * r.x(i) / econ.x0(i) : 0.0;
  s.pi = r.x - r.Z.colwise().sum().transpose() - s.l - e;
  s.x = std::move(r.x);
  s.c = std::move(r.c);
  s.f = std::move(r.f);
  s.Z = std::move(r.Z);
  s.d_prev = std::move(r.d);
  s.t = t;
}

void SimSeries::record(const SimState& s) {
  x.push_back(s.x.sum());
  l.push_back(s.l.sum());
  pi.push_back(s.pi.sum());
  c.push_back(s.c.sum());
  va.push_back(s.pi.sum() + s.l.sum());
  x_ind.push_back(s.x);
  l_ind.push_back(s.l);
  c_ind.push_back(s.c);
  f_ind.push_back(s.f);
}

void SimSeries::write_csv(std::ostream& out) const {
  out << "day,x,l,pi,c,va";
  for (const auto& code : codes) out << ",x_" << code;
  out << '\n';
  for (std::size_t t = 0; t < size(); ++t) {
    out << t << ',' << detail::fmt_double(x[t]) << ',' << detail::fmt_double(l[t]) << ','
        << detail::fmt_double(pi[t]) << ',' << detail::fmt_double(c[t]) << ','
        << detail::fmt_double(va[t]);
    for (Eigen::Index i = 0; i < x_ind[t].size(); ++i) out << ',' << detail::fmt_double(x_ind[t](i));
    out << '\n';
  }
}

SimSeries run_simulation(const Model& model, const ShockSchedule& schedule, int horizon,
                         const StepObserver& observer) {
  if (horizon < 0) throw config_error("horizon must be >= 0");
  if (schedule.horizon < horizon) throw config_error("shock schedule shorter than the horizon");
  SimSeries out;
  out.codes = model.econ->codes;
  SimState s = init_steady_state(*model.econ, *model.targets, model.params);
  out.record(s);
  if (observer) observer(s);
  for (int t = 1; t <= horizon; ++t) {
    step(s, model, schedule);
    out.record(s);
    if (observer) observer(s);
  }
  return out;
}

SimSeries run_simulation(const Economy& econ, const CriticalityMatrix& crit,
                         const InventoryTargets& targets, const EconParams& params,
                         const ShockSchedule& schedule, int horizon) {
  Model m = make_model(econ, crit, targets, params);
  return run_simulation(m, schedule, horizon);
}

}  // namespace reopen
