#include "reopen/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <random>
#include <thread>

#include "reopen/error.hpp"

namespace reopen {

ShockDecomposition shock_decomposition(const SimSeries& series, const PandemicCalibration& calib,
                                       const Economy& econ, int t) {
  if (t < 0 || static_cast<std::size_t>(t) >= series.size()) throw config_error("day outside series");
  const auto n = static_cast<Eigen::Index>(econ.n());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  ShockDecomposition d;
  d.os_direct = -calib.eps_S;
  d.os_total = Vec(n);
  d.cs_direct = Vec(n);
  d.cs_total = Vec(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d.os_total(i) = econ.x0(i) > 0 ? series.x_ind[t](i) / econ.x0(i) - 1.0 : nan;
    const double base = econ.c0(i) + econ.f0(i);
    if (base > 0) {
      const double shocked = econ.c0(i) * (1.0 - calib.eps_D(i)) + econ.f0(i) * (1.0 - calib.f_shock(i));
      d.cs_direct(i) = (shocked - base) / base;
      d.cs_total(i) = (series.c_ind[t](i) + series.f_ind[t](i)) / base - 1.0;
    } else {
      d.cs_direct(i) = d.cs_total(i) = nan;
    }
  }
  d.os_indirect = d.os_total - d.os_direct;
  d.cs_indirect = d.cs_total - d.cs_direct;
  return d;
}

double spectral_radius(const Mat& M) {
  Eigen::EigenSolver<Mat> es(M, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

namespace {

Vec solve_io(const Mat& M, const Vec& rhs, const char* what) {
  const auto n = M.rows();
  if (rhs.size() != n) throw data_error(std::string(what) + ": vector size mismatch");
  if (spectral_radius(M) >= 1.0) throw numerical_error(std::string(what) + ": spectral radius >= 1");
  Eigen::FullPivLU<Mat> lu(Mat::Identity(n, n) - M);
  if (!lu.isInvertible()) throw numerical_error(std::string(what) + ": singular system");
  Vec x = lu.solve(rhs);
  if (!x.allFinite()) throw numerical_error(std::string(what) + ": non-finite solution");
  return x;
}

}  // namespace

Vec leontief_solve(const Economy& econ, const Vec& c_shocked, const Vec& f_shocked) {
  return solve_io(econ.A, c_shocked + f_shocked, "leontief");
}

Vec ghosh_solve(const Economy& econ, const Vec& l_shocked, const Vec& other_primary) {
  return solve_io(econ.B.transpose(), l_shocked + other_primary, "ghosh");
}

Vec ghosh_solve(const Economy& econ, const Vec& l_shocked) {
  return ghosh_solve(econ, l_shocked, econ.e0 + econ.pi0);
}

WorkforceShares workforce_shares(const PandemicCalibration& calib, const Vec& employment) {
  if (employment.size() != calib.rli.size()) throw data_error("employment size does not match calibration");
  const double total = employment.sum();
  if (!(total > 0)) throw data_error("employment weights sum to zero");
  const Vec onsite = policy_lambda(ScenarioId::Lockdown, calib).delta_w;
  WorkforceShares w;
  w.onsite = onsite.dot(employment) / total;
  w.remote = calib.rli.dot(employment) / total;
  w.essential = calib.ess_w.dot(employment) / total;
  return w;
}

PerturbMode perturb_mode_from_string(const std::string& s) {
  if (s == "both") return PerturbMode::both;
  if (s == "supply_only") return PerturbMode::supply_only;
  if (s == "demand_only") return PerturbMode::demand_only;
  throw config_error("unknown perturbation mode '" + s + "'");
}

namespace {

double quantile(const std::vector<double>& sorted, double p) {
  const double h = (sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - lo) * (sorted[hi] - sorted[lo]);
}

}  // namespace

EnsembleSummary perturbation_ensemble(const ModelInputs& in, const Scenario& scenario, int horizon,
                                      double sigma, int n_runs, std::uint64_t seed,
                                      PerturbMode mode, int threads) {
  if (!(sigma >= 0)) throw config_error("sigma must be >= 0");
  if (n_runs < 1) throw config_error("n_runs must be >= 1");
  const Model model = make_model(in.economy, in.criticality, in.targets, in.params);
  const auto n = static_cast<Eigen::Index>(in.economy.n());

  std::vector<PandemicCalibration> calibs(n_runs, in.calibration);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N(0.0, sigma > 0 ? sigma : 1.0);
  auto psi = [&]() { return sigma > 0 ? N(rng) : 0.0; };
  for (auto& c : calibs)
    for (Eigen::Index i = 0; i < n; ++i) {
      if (mode != PerturbMode::demand_only)
        c.eps_S(i) = std::clamp(c.eps_S(i) * (1.0 + psi()), 0.0, 1.0);
      if (mode != PerturbMode::supply_only)
        c.eps_D(i) = std::clamp(c.eps_D(i) * (1.0 + psi()), -1.0, 1.0);
    }

  auto run = [&](const PandemicCalibration& c) {
    ShockSchedule sc = build_schedule(in.economy, c, scenario, in.params, horizon);
    return run_simulation(model, sc, horizon).x;
  };

  EnsembleSummary out;
  out.n_runs = n_runs;
  out.sigma = sigma;
  out.base = run(in.calibration);

  std::vector<std::vector<double>> paths(n_runs);
  int workers = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min(workers, n_runs);
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (int r = w; r < n_runs; r += workers) paths[r] = run(calibs[r]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  std::vector<double> day(n_runs);
  for (int t = 0; t <= horizon; ++t) {
    for (int r = 0; r < n_runs; ++r) day[r] = paths[r][t];
    std::sort(day.begin(), day.end());
    out.q025.push_back(quantile(day, 0.025));
    out.q25.push_back(quantile(day, 0.25));
    out.median.push_back(quantile(day, 0.5));
    out.q75.push_back(quantile(day, 0.75));
    out.q975.push_back(quantile(day, 0.975));
  }
  return out;
}

ScenarioReport scenario_report(const std::vector<Scenario>& scenarios, const ModelInputs& in,
                               const EpiCalibration& epi, int window) {
  if (window < 1) throw config_error("window must be >= 1");
  const EconParams& p = in.params;
  const int horizon = p.t_end_lockdown + window - 1;
  const Model model = make_model(in.economy, in.criticality, in.targets, p);
  const PolicyLambda lockdown = policy_lambda(ScenarioId::Lockdown, in.calibration);

  auto simulate = [&](const Scenario& s) {
    return run_simulation(model, build_schedule(in.economy, in.calibration, s, p, horizon), horizon);
  };
  auto window_mean = [&](const SimSeries& s) {
    double sum = 0.0;
    for (int t = p.t_end_lockdown; t <= horizon; ++t) sum += s.va[t];
    return sum / window;
  };

  const SimSeries base = simulate(make_scenario(ScenarioId::Lockdown, in.calibration));
  const double va0 = base.va[0];
  const double base_mean = window_mean(base);

  ScenarioReport rep;
  rep.window = window;
  for (const auto& s : scenarios) {
    ScenarioRow row;
    row.id = s.id;
    row.name = to_string(s.id);
    row.beta = beta_total(s.lambda, epi);
    row.r0 = r0_estimate(s.lambda, lockdown, epi);
    row.series = simulate(s);
    const double mean = window_mean(row.series);
    row.va_change_pp = 100.0 * (mean - base_mean) / va0;
    row.gdp_pct = 100.0 * mean / va0;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

}  // namespace reopen
