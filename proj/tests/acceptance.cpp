// Acceptance report: one PASS/FAIL/SKIP line per primary criterion.
// Usage: reopen_acceptance [--known-failure NAME]...
// Exits non-zero when a criterion fails that is not listed as a known failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "reopen/dataset.hpp"
#include "reopen/error.hpp"

using namespace reopen;

namespace {

enum class Verdict { pass, fail, skip };

struct Outcome {
  Verdict verdict = Verdict::pass;
  std::string detail;
};

// Accumulates the per-step accounting checks over every run made by this binary.
struct ConservationMonitor {
  long steps = 0;
  double worst_identity = 0.0;
  double worst_theta = 0.0;
  double min_stock = 0.0;

  StepObserver observer(const Economy& e) {
    const double scale = e.x0.maxCoeff();
    return [this, scale](const SimState& s) {
      ++steps;
      const Vec rhs = s.Z.rowwise().sum() + s.c + s.f;
      worst_identity = std::max(worst_identity, (s.x - rhs).cwiseAbs().maxCoeff() / scale);
      worst_theta = std::max(worst_theta, std::abs(s.theta.sum() - 1.0));
      min_stock = std::min(min_stock, s.S.minCoeff());
    };
  }
};

ConservationMonitor g_monitor;

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

SimSeries run(const ModelInputs& in, const EconParams& p, const ShockSchedule& sc, int horizon) {
  const Model m = make_model(in.economy, in.criticality, in.targets, p);
  return run_simulation(m, sc, horizon, g_monitor.observer(in.economy));
}

ModelInputs from_bundle(const SyntheticBundle& b) {
  ModelInputs in;
  in.economy = b.economy;
  in.criticality = b.criticality;
  in.calibration = b.calibration;
  in.targets = b.targets;
  return in;
}

double max_step_drift(const std::vector<double>& v) {
  const double scale = std::max(std::abs(v.front()), 1e-300);
  double worst = 0.0;
  for (std::size_t t = 1; t < v.size(); ++t) worst = std::max(worst, std::abs(v[t] - v[t - 1]) / scale);
  return worst;
}

Outcome steady_state(const Dataset& d) {
  double worst = 0.0;
  auto check = [&](const ModelInputs& in) {
    const SimSeries s = run(in, in.params, zero_schedule(in.economy, 180), 180);
    for (const auto* v : {&s.x, &s.c, &s.l, &s.pi}) worst = std::max(worst, max_step_drift(*v));
  };
  check(d.inputs);
  for (int k = 0; k < 20; ++k) check(from_bundle(generate_synthetic_economy(5 + 5 * k, 1000 + k)));
  return {worst <= 1e-9 ? Verdict::pass : Verdict::fail,
          "max relative step drift " + fmt("%.2e", worst) + " over bundled + 20 synthetic"};
}

Outcome leontief_oracle(const Dataset& d) {
  ModelInputs in = d.inputs;
  in.targets.n_days = Vec::Constant(in.economy.n(), 1e4);
  in.calibration.eps_S.setZero();
  EconParams p = in.params;
  p.gamma_H = p.gamma_F = 0.0;
  p.delta_s_save = 1.0;
  p.b = 1.0;
  p.t_end_lockdown = p.t_end_pandemic = 100000;
  const int horizon = 400;
  const Scenario s = make_scenario(ScenarioId::Lockdown, in.calibration);
  const Model m = make_model(in.economy, in.criticality, in.targets, p);
  SimState last;
  auto mon = g_monitor.observer(in.economy);
  run_simulation(m, build_schedule(in.economy, in.calibration, s, p, horizon), horizon, [&](const SimState& st) {
    mon(st);
    last = st;
  });
  const Vec want = leontief_solve(in.economy, last.c, last.f);
  int eligible = 0, ok = 0;
  for (Eigen::Index i = 0; i < want.size(); ++i) {
    if (last.x(i) >= last.x_cap(i) * (1 - 1e-9)) continue;
    ++eligible;
    if (std::abs(last.x(i) - want(i)) <= 0.01 * std::abs(want(i))) ++ok;
  }
  const double share = eligible ? static_cast<double>(ok) / eligible : 0.0;
  return {share >= 0.95 ? Verdict::pass : Verdict::fail,
          std::to_string(ok) + "/" + std::to_string(eligible) + " uncapped industries within 1% on day " +
              std::to_string(horizon)};
}

Outcome production_ordering(const Dataset& d) {
  const ModelInputs& in = d.inputs;
  const int horizon = 180;
  EconParams base = in.params;
  base.t_end_lockdown = base.t_end_pandemic = 100000;
  const Scenario s = make_scenario(ScenarioId::Lockdown, in.calibration);
  const ShockSchedule sc = build_schedule(in.economy, in.calibration, s, base, horizon);
  const ProdFn order[] = {ProdFn::leontief, ProdFn::important_critical, ProdFn::important_half,
                          ProdFn::critical_baseline, ProdFn::linear};
  std::vector<std::vector<double>> paths;
  for (ProdFn f : order) {
    EconParams p = base;
    p.prod_fn = f;
    paths.push_back(run(in, p, sc, horizon).x);
  }
  int violations = 0;
  for (int t = 11; t <= horizon; ++t)
    for (std::size_t k = 1; k < paths.size(); ++k)
      if (paths[k - 1][t] > paths[k][t] * (1 + 1e-12)) ++violations;
  const double drop = 1.0 - paths[0][horizon] / paths[0][0];
  std::ostringstream o;
  o << violations << " ordering violations after day 10; leontief drop at day 180 " << fmt("%.1f%%", 100 * drop)
    << "; day-180 x/x0 ";
  for (const auto& p : paths) o << fmt("%.3f ", p[horizon] / p[0]);
  return {violations == 0 && drop > 0.6 ? Verdict::pass : Verdict::fail, o.str()};
}

Outcome epi_identities(const Dataset& d) {
  const auto& c = d.inputs.calibration;
  const auto& epi = d.epi;
  const auto pre = policy_lambda(ScenarioId::PreLockdown, c);
  const auto lock = policy_lambda(ScenarioId::Lockdown, c);
  const auto b = beta_total(pre, epi);
  const double table[] = {0.29, 0.28, 0.16, 0.06, 0.21};
  const double parts[] = {b.work, b.school, b.consumption, b.transport, b.home};
  bool ok = true;
  double worst_part = 0.0;
  for (int k = 0; k < kChannels; ++k) worst_part = std::max(worst_part, std::abs(parts[k] - table[k]));
  ok &= worst_part <= 0.005;
  ok &= std::abs(b.total - 1.0) <= 1e-12;
  const double r_lock = r0_estimate(lock, lock, epi).r0;
  const double r_pre = r0_estimate(pre, lock, epi).r0_unscaled;
  const double r_open = r0_estimate(policy_lambda(ScenarioId::Open, c), lock, epi).r0;
  ok &= std::abs(r_lock - 0.62) <= 1e-12;
  ok &= std::abs(r_pre - 2.6) <= 1e-12;
  ok &= r_open >= 1.40 && r_open <= 1.70;
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const auto n = lock.delta_w.size();
  int monotone_fail = 0;
  for (int k = 0; k < 1000; ++k) {
    PolicyLambda lo = lock, hi = lock;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double a = U(rng), e = U(rng), f = U(rng), g = U(rng);
      lo.delta_w(i) = std::min(a, e);
      hi.delta_w(i) = std::max(a, e);
      lo.delta_c(i) = std::min(f, g);
      hi.delta_c(i) = std::max(f, g);
    }
    const double s1 = U(rng), s2 = U(rng), h1 = U(rng), h2 = U(rng);
    lo.delta_s = std::min(s1, s2);
    hi.delta_s = std::max(s1, s2);
    lo.delta_h = std::min(h1, h2);
    hi.delta_h = std::max(h1, h2);
    if (r0_estimate(lo, lock, epi).r0 > r0_estimate(hi, lock, epi).r0) ++monotone_fail;
  }
  ok &= monotone_fail == 0;
  std::ostringstream o;
  o << "PreLockdown parts";
  for (double p : parts) o << ' ' << fmt("%.4f", p);
  o << " (max dev " << fmt("%.4f", worst_part) << "); total " << fmt("%.12f", b.total) << "; R0 lockdown "
    << fmt("%.4f", r_lock) << ", pre unscaled " << fmt("%.4f", r_pre) << ", open " << fmt("%.3f", r_open) << "; "
    << monotone_fail << "/1000 monotonicity violations";
  return {ok ? Verdict::pass : Verdict::fail, o.str()};
}

Outcome calibration_shares(const Dataset& d) {
  const auto w = workforce_shares(d.inputs.calibration, d.epi.eta);
  const bool ok = std::abs(w.onsite - 0.37) <= 0.015 && std::abs(w.remote - 0.44) <= 0.015 &&
                  std::abs(w.essential - 0.67) <= 0.015;
  return {ok ? Verdict::pass : Verdict::fail, "on-site " + fmt("%.1f%%", 100 * w.onsite) + ", remote " +
                                                   fmt("%.1f%%", 100 * w.remote) + ", essential " +
                                                   fmt("%.1f%%", 100 * w.essential)};
}

Outcome scenario_economics(const Dataset& d) {
  const std::vector<ScenarioId> ids = {ScenarioId::Lockdown, ScenarioId::ManufConstruction,
                                       ScenarioId::AllExceptConsumerFacing, ScenarioId::Open};
  std::vector<Scenario> s;
  for (auto id : ids) s.push_back(make_scenario(id, d.inputs.calibration));
  const auto rep = scenario_report(s, d.inputs, d.epi);
  const double L = rep.rows[0].va_change_pp, M = rep.rows[1].va_change_pp, A = rep.rows[2].va_change_pp,
               O = rep.rows[3].va_change_pp;
  const bool order = L < M && M < A && A < O;
  const bool m_ok = std::abs(M - 3.0) <= 1.5;
  const bool a_ok = std::abs(A - 8.0) <= 2.0;
  std::ostringstream o;
  o << "pp vs lockdown: Manuf " << fmt("%+.2f", M) << (m_ok ? "" : " (outside 3+-1.5)") << ", AllExcept "
    << fmt("%+.2f", A) << (a_ok ? "" : " (outside 8+-2)") << ", Open " << fmt("%+.2f", O)
    << (order ? "; ordering holds" : "; ordering violated");
  return {order && m_ok && a_ok ? Verdict::pass : Verdict::fail, o.str()};
}

Outcome ensemble_sanity() {
  const ModelInputs in = from_bundle(generate_synthetic_economy(10, 77));
  const Scenario s = make_scenario(ScenarioId::Lockdown, in.calibration);
  const int horizon = 180;
  const auto t0 = std::chrono::steady_clock::now();
  const auto e = perturbation_ensemble(in, s, horizon, 0.2, 1000, 2020, PerturbMode::both);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  int unnested = 0;
  for (std::size_t t = 0; t < e.base.size(); ++t)
    if (!(e.q025[t] <= e.q25[t] && e.q25[t] <= e.median[t] && e.median[t] <= e.q75[t] && e.q75[t] <= e.q975[t]))
      ++unnested;
  const auto zero = perturbation_ensemble(in, s, horizon, 0.0, 16, 2020, PerturbMode::both);
  const SimSeries direct = run(in, in.params, build_schedule(in.economy, in.calibration, s, in.params, horizon),
                               horizon);
  const bool identical = zero.base == direct.x && zero.q025 == direct.x && zero.median == direct.x &&
                         zero.q975 == direct.x;
  const bool ok = secs < 60 && unnested == 0 && identical;
  return {ok ? Verdict::pass : Verdict::fail,
          "n=1000 in " + fmt("%.2f s", secs) + "; " + std::to_string(unnested) + " unnested days; sigma=0 " +
              (identical ? "bit-identical" : "differs")};
}

Outcome sir_validation() {
  const double beta = 0.38, gamma = 1.0 / 7.0, dt = 0.01;
  const auto path = sir_integrate(beta, gamma, 1e8, 1.0, 0.0, 40.0, dt);
  const auto at = [&](double t) { return path[static_cast<std::size_t>(std::llround(t / dt))].I; };
  const double growth = std::log(at(40) / at(20)) / 20.0;
  const double rel = std::abs(growth - (beta - gamma)) / (beta - gamma);
  const double M = path.front().S + path.front().I + path.front().R;
  double worst = 0.0;
  for (std::size_t k = 1000; k < path.size(); k += 1000) {
    const auto& p = path[k];
    const auto& q = path[k - 1000];
    worst = std::max(worst, std::abs((p.S + p.I + p.R) - (q.S + q.I + q.R)) / M);
  }
  return {rel <= 0.02 && worst <= 1e-9 ? Verdict::pass : Verdict::fail,
          "growth " + fmt("%.5f", growth) + " vs " + fmt("%.5f", beta - gamma) + " (" + fmt("%.2f%%", 100 * rel) +
              "); population drift per 1000 steps " + fmt("%.1e", worst)};
}

// Calendar 2020: lockdown from March 23 (day 82), Q1 days 0-90, Q2 days 91-181.
Outcome wiod_quarters() {
  const char* dir = std::getenv("REOPEN_WIOD_DIR");
  if (!dir || !*dir) return {Verdict::skip, "set REOPEN_WIOD_DIR to a WIOD UK 2014 data directory"};
  const Dataset d = load_dataset(dir);
  EconParams p = d.inputs.params;
  p.t_start_lockdown = 82;
  p.t_end_lockdown = p.t_end_pandemic = 100000;
  const int horizon = 181;
  const Scenario s = make_scenario(ScenarioId::Lockdown, d.inputs.calibration);
  const SimSeries series = run(d.inputs, p, build_schedule(d.inputs.economy, d.inputs.calibration, s, p, horizon),
                               horizon);
  auto quarter = [&](int a, int b) {
    double sum = 0.0;
    for (int t = a; t <= b; ++t) sum += series.va[t];
    return 100.0 * (sum / (b - a + 1) / series.va[0] - 1.0);
  };
  const double q1 = quarter(0, 90), q2 = quarter(91, 181);
  const bool ok = std::abs(q1 + 1.7) <= 0.3 && std::abs(q2 + 21.5) <= 2.0;
  return {ok ? Verdict::pass : Verdict::fail, "Q1 " + fmt("%+.2f%%", q1) + ", Q2 " + fmt("%+.2f%%", q2)};
}

// Adds every named scenario under every production function to the monitored runs.
Outcome conservation(const Dataset& d) {
  const ModelInputs& in = d.inputs;
  for (auto id : named_scenarios())
    for (ProdFn f : {ProdFn::leontief, ProdFn::linear, ProdFn::critical_baseline, ProdFn::important_critical,
                     ProdFn::important_half}) {
      EconParams p = in.params;
      p.prod_fn = f;
      const Scenario s = make_scenario(id, in.calibration);
      run(in, p, build_schedule(in.economy, in.calibration, s, p, 180), 180);
    }
  const bool ok = g_monitor.worst_identity <= 1e-12 && g_monitor.worst_theta <= 1e-12 && g_monitor.min_stock >= 0.0;
  return {ok ? Verdict::pass : Verdict::fail,
          std::to_string(g_monitor.steps) + " steps; max identity residual " + fmt("%.1e", g_monitor.worst_identity) +
              ", max |sum theta - 1| " + fmt("%.1e", g_monitor.worst_theta) + ", min inventory " +
              fmt("%.3g", g_monitor.min_stock)};
}

struct Criterion {
  std::string name;
  double budget_s;  // 0: no runtime bound
  std::function<Outcome()> check;
};

}  // namespace

int main(int argc, char** argv) {
  std::set<std::string> known;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--known-failure" && i + 1 < argc) {
      known.insert(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--known-failure NAME]...\n", argv[0]);
      return 2;
    }
  }

  Dataset data;
  try {
    data = load_dataset(REOPEN_TEST_DATA_DIR);
  } catch (const std::exception& e) {
    std::printf("FAIL  dataset load: %s\n", e.what());
    return 1;
  }

  std::vector<Criterion> criteria = {
      {"steady_state", 5, [&] { return steady_state(data); }},
      {"leontief_oracle", 10, [&] { return leontief_oracle(data); }},
      {"production_ordering", 0, [&] { return production_ordering(data); }},
      {"epi_identities", 1, [&] { return epi_identities(data); }},
      {"calibration_shares", 0, [&] { return calibration_shares(data); }},
      {"scenario_economics", 30, [&] { return scenario_economics(data); }},
      {"ensemble", 60, [] { return ensemble_sanity(); }},
      {"sir_validation", 0, [] { return sir_validation(); }},
      {"wiod_quarters", 0, [] { return wiod_quarters(); }},
      {"conservation", 0, [&] { return conservation(data); }},
  };

  int unexpected = 0;
  auto report = [&](const std::string& name, Outcome o, double secs) {
    const char* tag = o.verdict == Verdict::pass ? "PASS" : o.verdict == Verdict::skip ? "SKIP" : "FAIL";
    std::string note;
    if (o.verdict == Verdict::fail) {
      if (known.count(name)) note = " [known failure]";
      else ++unexpected;
    }
    std::printf("%s  %-20s %7.3f s  %s%s\n", tag, name.c_str(), secs, o.detail.c_str(), note.c_str());
    std::fflush(stdout);
  };

  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {Verdict::fail, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0 && secs >= c.budget_s && o.verdict == Verdict::pass) {
      o.verdict = Verdict::fail;
      o.detail += "; exceeded " + fmt("%.0f s", c.budget_s);
    }
    report(c.name, o, secs);
  }

  return unexpected == 0 ? 0 : 1;
}
