#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "manifest.hpp"
#include "reopen/error.hpp"
#include "service.hpp"

#include "CLI11.hpp"
#include "httplib.h"

#ifndef REOPEN_DEFAULT_DATA_DIR
#define REOPEN_DEFAULT_DATA_DIR "data/uk55"
#endif

namespace reopen::service {

namespace fs = std::filesystem;

namespace {

struct Globals {
  std::string data_dir, config, scenario, prod_fn, cons_fn, out;
  int horizon = 180;
  std::uint64_t seed = 0;
  bool strict = false;
};

struct ScenarioFlags {
  std::vector<std::string> open;
  bool schools = false;
  bool consumption = false;
};

std::string resolve_data_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("REOPEN_DATA_DIR"); env && *env) return env;
  return REOPEN_DEFAULT_DATA_DIR;
}

Dataset load(const Globals& g) {
  Dataset d = load_dataset(resolve_data_dir(g.data_dir), g.strict, g.config);
  std::map<std::string, std::string> kv;
  if (!g.prod_fn.empty()) kv["prod_fn"] = g.prod_fn;
  if (!g.cons_fn.empty()) kv["cons_fn"] = g.cons_fn;
  apply_params(d.inputs.params, kv);
  d.inputs.params.validate();
  return d;
}

Scenario pick_scenario(const Globals& g, const ScenarioFlags& f, const PandemicCalibration& calib,
                       ScenarioId fallback) {
  if (!f.open.empty() || (!g.scenario.empty() && scenario_from_string(g.scenario) == ScenarioId::Custom))
    return custom_scenario(f.open, f.schools, f.consumption, calib);
  return make_scenario(g.scenario.empty() ? fallback : scenario_from_string(g.scenario), calib);
}

void add_scenario_flags(CLI::App* cmd, ScenarioFlags& f) {
  cmd->add_option("--open", f.open, "industry codes to reopen (custom scenario)");
  cmd->add_flag("--schools", f.schools, "reopen schools (custom scenario)");
  cmd->add_flag("--consumption", f.consumption, "reopen on-site consumption (custom scenario)");
}

std::string fmt(double v) { return format_double(v); }

std::string scenarios_csv(const ScenarioReport& r) {
  std::ostringstream o;
  o << "scenario,r0,r0_sd,r0_unscaled,beta_work,beta_school,beta_consumption,beta_transport,"
       "beta_home,beta_total,va_change_pp,gdp_pct\n";
  for (const auto& row : r.rows) {
    const auto& b = row.beta;
    o << row.name << ',' << fmt(row.r0.r0) << ',' << fmt(row.r0.r0_sd) << ',' << fmt(row.r0.r0_unscaled)
      << ',' << fmt(b.work) << ',' << fmt(b.school) << ',' << fmt(b.consumption) << ','
      << fmt(b.transport) << ',' << fmt(b.home) << ',' << fmt(b.total) << ','
      << fmt(row.va_change_pp) << ',' << fmt(row.gdp_pct) << '\n';
  }
  return o.str();
}

std::string bands_csv(const EnsembleSummary& e) {
  std::ostringstream o;
  o << "day,base,q025,q25,median,q75,q975\n";
  for (std::size_t t = 0; t < e.base.size(); ++t)
    o << t << ',' << fmt(e.base[t]) << ',' << fmt(e.q025[t]) << ',' << fmt(e.q25[t]) << ','
      << fmt(e.median[t]) << ',' << fmt(e.q75[t]) << ',' << fmt(e.q975[t]) << '\n';
  return o.str();
}

std::string compare_io_csv(const ModelInputs& in, int day) {
  const Economy& e = in.economy;
  const PandemicCalibration& c = in.calibration;
  const Vec ones = Vec::Ones(e.n());
  const Vec xl = leontief_solve(e, e.c0.cwiseProduct(ones - c.eps_D), e.f0.cwiseProduct(ones - c.f_shock));
  const Vec xg = ghosh_solve(e, e.l0.cwiseProduct(ones - c.eps_S));
  const Scenario lock = make_scenario(ScenarioId::Lockdown, c);
  const SimSeries s = run_simulation(e, in.criticality, in.targets, in.params,
                                     build_schedule(e, c, lock, in.params, day), day);
  const Vec& xm = s.x_ind[day];
  std::ostringstream o;
  o << "code,x0,leontief,ghosh,model\n";
  for (std::size_t i = 0; i < e.n(); ++i)
    o << e.codes[i] << ',' << fmt(e.x0(i)) << ',' << fmt(xl(i)) << ',' << fmt(xg(i)) << ',' << fmt(xm(i)) << '\n';
  o << "total," << fmt(e.x0.sum()) << ',' << fmt(xl.sum()) << ',' << fmt(xg.sum()) << ',' << fmt(xm.sum()) << '\n';
  return o.str();
}

// Writes named outputs into --out (with a manifest) or prints them to stdout.
class Sink {
 public:
  Sink(const Globals& g, std::ostream& out) : g_(g), out_(out) {}

  void emit(const std::string& name, const std::string& content) {
    if (g_.out.empty()) {
      out_ << content;
      return;
    }
    std::error_code ec;
    fs::create_directories(g_.out, ec);
    if (ec) throw config_error("cannot create " + g_.out + ": " + ec.message());
    const fs::path p = fs::path(g_.out) / name;
    std::ofstream f(p, std::ios::binary);
    if (!f) throw config_error("cannot write " + p.string());
    f << content;
    f.close();
    written_.push_back(name);
  }

  void adopt(const std::string& name) { written_.push_back(name); }
  const std::vector<std::string>& written() const { return written_; }

 private:
  const Globals& g_;
  std::ostream& out_;
  std::vector<std::string> written_;
};

std::vector<std::string> strip_out(const std::vector<std::string>& args) {
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--out") {
      ++i;
      continue;
    }
    if (args[i].rfind("--out=", 0) == 0) continue;
    kept.push_back(args[i]);
  }
  return kept;
}

bool has_flag(const std::vector<std::string>& args, const std::string& flag) {
  for (const auto& a : args)
    if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
  return false;
}

void record_manifest(const Globals& g, const std::string& command, const std::vector<std::string>& args,
                     const Dataset* d, const Scenario* s, const Sink& sink, double elapsed_ms) {
  if (g.out.empty()) return;
  RunManifest m;
  m.command = command;
  m.args = strip_out(args);
  if (d) {
    if (!has_flag(m.args, "--data-dir")) {
      m.args.push_back("--data-dir");
      m.args.push_back(fs::absolute(d->dir).string());
    }
    for (const auto& [role, path] : d->files) m.inputs[fs::absolute(path).string()] = sha256_file(path);
    m.params = d->inputs.params.to_map();
  }
  if (s) m.scenario = to_string(s->id);
  for (const auto& name : sink.written()) m.outputs[name] = sha256_file((fs::path(g.out) / name).string());
  m.run_id = derive_run_id(m);
  m.elapsed_ms = elapsed_ms;
  write_manifest((fs::path(g.out) / "manifest.json").string(), m);
}

int replay(const std::string& manifest_path, const std::string& out_dir, std::ostream& out,
           std::ostream& err) {
  const RunManifest m = read_manifest(manifest_path);
  for (const auto& [path, digest] : m.inputs)
    if (sha256_file(path) != digest) throw data_error("input changed since the recorded run: " + path);
  const std::string target =
      out_dir.empty() ? (fs::temp_directory_path() / ("reopen-replay-" + m.run_id)).string() : out_dir;
  std::vector<std::string> args = m.args;
  args.push_back("--out");
  args.push_back(target);
  std::ostringstream quiet;
  const int code = run_cli(args, quiet, err);
  if (code != 0) return code;
  const RunManifest again = read_manifest((fs::path(target) / "manifest.json").string());
  for (const auto& [name, digest] : m.outputs) {
    auto it = again.outputs.find(name);
    if (it == again.outputs.end() || it->second != digest)
      throw numerical_error("replay output differs: " + name);
  }
  out << "replay " << m.run_id << ": " << m.outputs.size() << " outputs identical in " << target << '\n';
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Production-network lockdown and reopening simulator"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--data-dir", g.data_dir, "dataset directory (fallback: REOPEN_DATA_DIR)");
  app.add_option("--config", g.config, "parameter override file (key = value)");
  app.add_option("--scenario", g.scenario, "named scenario or 'custom'");
  app.add_option("--prod-fn", g.prod_fn, "leontief|linear|critical_baseline|important_critical|important_half");
  app.add_option("--cons-fn", g.cons_fn, "muellbauer|keynesian|fixed");
  app.add_option("--horizon", g.horizon, "simulated days")->check(CLI::Range(0, 3650));
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--out", g.out, "output directory; a manifest is written alongside");
  app.add_flag("--strict", g.strict, "treat data warnings as errors");

  std::function<int()> action;
  ScenarioFlags sf;
  std::string format = "csv";

  auto* sim = app.add_subcommand("simulate", "run one scenario and emit the aggregate series");
  add_scenario_flags(sim, sf);
  sim->add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  bool per_industry = false;
  sim->add_flag("--per-industry", per_industry, "include per-industry output in JSON");
  sim->callback([&] {
    action = [&] {
      const auto t0 = std::chrono::steady_clock::now();
      const Dataset d = load(g);
      const auto& in = d.inputs;
      const Scenario s = pick_scenario(g, sf, in.calibration, ScenarioId::Lockdown);
      const SimSeries series = run_simulation(in.economy, in.criticality, in.targets, in.params,
                                              build_schedule(in.economy, in.calibration, s, in.params, g.horizon),
                                              g.horizon);
      Sink sink(g, out);
      if (format == "json") {
        sink.emit("series.json", json{{"scenario", to_string(s.id)}, {"series", to_json(series, per_industry)}}.dump() + "\n");
      } else {
        std::ostringstream o;
        series.write_csv(o);
        sink.emit("series.csv", o.str());
      }
      record_manifest(g, "simulate", args, &d, &s, sink,
                      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
      return 0;
    };
  });

  auto* rep = app.add_subcommand("scenarios", "R0 and value-added report for the named scenarios");
  int window = 30;
  rep->add_option("--window", window, "post-reopening averaging window (days)")->check(CLI::Range(1, 3650));
  rep->add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  rep->callback([&] {
    action = [&] {
      const auto t0 = std::chrono::steady_clock::now();
      const Dataset d = load(g);
      std::vector<Scenario> all;
      for (auto id : named_scenarios()) all.push_back(make_scenario(id, d.inputs.calibration));
      const ScenarioReport r = scenario_report(all, d.inputs, d.epi, window);
      Sink sink(g, out);
      if (g.out.empty()) {
        out << (format == "json" ? to_json(r).dump(2) + "\n" : scenarios_csv(r));
      } else {
        sink.emit("scenarios.csv", scenarios_csv(r));
        sink.emit("scenarios.json", to_json(r).dump(2) + "\n");
        sink.emit("plot_data.json", plot_records(r).dump(2) + "\n");
      }
      record_manifest(g, "scenarios", args, &d, nullptr, sink,
                      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
      return 0;
    };
  });

  auto* sens = app.add_subcommand("sensitivity", "perturbation ensemble of shock magnitudes");
  add_scenario_flags(sens, sf);
  double sigma = 0.2;
  int runs = 100, threads = 0;
  std::string mode = "both";
  sens->add_option("--sigma", sigma, "relative shock noise")->check(CLI::NonNegativeNumber);
  sens->add_option("--runs", runs, "ensemble size")->check(CLI::Range(1, 100000));
  sens->add_option("--mode", mode, "both|supply_only|demand_only");
  sens->add_option("--threads", threads, "worker threads (0: all cores)");
  sens->callback([&] {
    action = [&] {
      const auto t0 = std::chrono::steady_clock::now();
      const Dataset d = load(g);
      const Scenario s = pick_scenario(g, sf, d.inputs.calibration, ScenarioId::Lockdown);
      const auto e = perturbation_ensemble(d.inputs, s, g.horizon, sigma, runs, g.seed,
                                           perturb_mode_from_string(mode), threads);
      Sink sink(g, out);
      sink.emit("bands.csv", bands_csv(e));
      record_manifest(g, "sensitivity", args, &d, &s, sink,
                      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
      return 0;
    };
  });

  auto* cmp = app.add_subcommand("compare-io", "Leontief and Ghosh predictions next to the model");
  int day = -1;
  cmp->add_option("--day", day, "model day to compare (default: last lockdown day)");
  cmp->callback([&] {
    action = [&] {
      const auto t0 = std::chrono::steady_clock::now();
      const Dataset d = load(g);
      const int at = day >= 0 ? day : d.inputs.params.t_end_lockdown - 1;
      Sink sink(g, out);
      sink.emit("compare_io.csv", compare_io_csv(d.inputs, at));
      record_manifest(g, "compare-io", args, &d, nullptr, sink,
                      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
      return 0;
    };
  });

  auto* epi = app.add_subcommand("epi-r0", "transmission breakdown and R0 for a policy");
  add_scenario_flags(epi, sf);
  epi->callback([&] {
    action = [&] {
      const auto t0 = std::chrono::steady_clock::now();
      const Dataset d = load(g);
      const Scenario s = pick_scenario(g, sf, d.inputs.calibration, ScenarioId::Lockdown);
      const PolicyLambda lock = policy_lambda(ScenarioId::Lockdown, d.inputs.calibration);
      const json j = {{"scenario", to_string(s.id)},
                      {"beta", to_json(beta_total(s.lambda, d.epi))},
                      {"r0", to_json(r0_estimate(s.lambda, lock, d.epi))}};
      Sink sink(g, out);
      sink.emit("r0.json", j.dump(2) + "\n");
      record_manifest(g, "epi-r0", args, &d, &s, sink,
                      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
      return 0;
    };
  });

  auto* syn = app.add_subcommand("synth", "generate a synthetic dataset directory");
  int n = 10;
  syn->add_option("--n", n, "number of industries")->check(CLI::Range(2, 2000));
  syn->callback([&] {
    action = [&] {
      if (g.out.empty()) throw config_error("synth needs --out");
      const auto t0 = std::chrono::steady_clock::now();
      write_synthetic_dataset(g.out, generate_synthetic_economy(n, g.seed));
      Sink sink(g, out);
      for (const auto& entry : fs::directory_iterator(g.out)) {
        const std::string name = entry.path().filename().string();
        if (name != "manifest.json") sink.adopt(name);
      }
      record_manifest(g, "synth", args, nullptr, nullptr, sink,
                      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
      out << "wrote " << n << "-industry dataset to " << g.out << '\n';
      return 0;
    };
  });

  auto* srv = app.add_subcommand("serve", "start the HTTP service");
  std::string host = "127.0.0.1";
  int port = 8080;
  srv->add_option("--host", host, "bind address");
  srv->add_option("--port", port, "TCP port")->check(CLI::Range(1, 65535));
  srv->callback([&] {
    action = [&] {
      const Dataset d = load(g);
      const Api api(d);
      httplib::Server server;
      mount(server, api);
      out << "serving " << d.dir << " on http://" << host << ':' << port << std::endl;
      if (!server.listen(host, port)) throw config_error("cannot bind " + host + ":" + std::to_string(port));
      return 0;
    };
  });

  auto* rpl = app.add_subcommand("replay", "rerun a recorded manifest and verify identical outputs");
  std::string manifest;
  rpl->add_option("manifest", manifest, "manifest.json of an earlier run")->required();
  rpl->callback([&] { action = [&] { return replay(manifest, g.out, out, err); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code(e.kind());
  }
  try {
    return action ? action() : 1;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error (numerical): " << e.what() << '\n';
    return 3;
  }
}

}  // namespace reopen::service
