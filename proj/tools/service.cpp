#include "service.hpp"

#include <algorithm>

#include "reopen/error.hpp"

#include "httplib.h"

namespace reopen::service {

namespace {

constexpr int kMaxHorizon = 3650;
constexpr int kMaxRuns = 5000;

json by_code(const Vec& v, const Codes& codes) {
  json out = json::object();
  for (std::size_t i = 0; i < codes.size(); ++i) out[codes[i]] = v(static_cast<Eigen::Index>(i));
  return out;
}

int status_for(ErrorKind k) { return k == ErrorKind::Numerical ? 500 : 422; }

json error_body(const std::string& kind, const std::string& msg) {
  return {{"error", kind}, {"message", msg}};
}

void override_deltas(Vec& target, const json& spec, const Codes& codes, const char* name) {
  if (spec.is_array()) {
    if (spec.size() != codes.size()) throw data_error(std::string(name) + " has the wrong length");
    for (std::size_t i = 0; i < codes.size(); ++i) target(i) = spec[i].get<double>();
    return;
  }
  if (!spec.is_object()) throw json::type_error::create(302, std::string(name) + " must be an object", &spec);
  for (const auto& [code, value] : spec.items()) {
    auto it = std::find(codes.begin(), codes.end(), code);
    if (it == codes.end()) throw data_error("unknown industry code " + code);
    target(it - codes.begin()) = value.get<double>();
  }
}

int horizon_from(const json& body, int fallback) {
  const int h = body.value("horizon", fallback);
  if (h < 0 || h > kMaxHorizon) throw config_error("horizon must lie in [0, 3650]");
  return h;
}

ModelInputs inputs_with(const Dataset& d, const json& body) {
  ModelInputs in = d.inputs;
  in.params = params_from_json(body, d.inputs.params);
  return in;
}

}  // namespace

json to_json(const SimSeries& s, bool per_industry) {
  json out = {{"x", s.x}, {"l", s.l}, {"pi", s.pi}, {"c", s.c}, {"va", s.va}};
  if (per_industry) {
    json ind = json::object();
    for (std::size_t i = 0; i < s.codes.size(); ++i) {
      std::vector<double> path;
      path.reserve(s.size());
      for (const auto& xt : s.x_ind) path.push_back(xt(static_cast<Eigen::Index>(i)));
      ind[s.codes[i]] = std::move(path);
    }
    out["x_industry"] = std::move(ind);
  }
  return out;
}

json to_json(const BetaBreakdown& b) {
  return {{"work", b.work},           {"school", b.school}, {"consumption", b.consumption},
          {"transport", b.transport}, {"home", b.home},     {"total", b.total},
          {"r0", b.r0},               {"r0_sd", b.r0_sd}};
}

json to_json(const R0Estimate& r) {
  return {{"r0", r.r0},
          {"sd", r.r0_sd},
          {"r0_unscaled", r.r0_unscaled},
          {"sd_unscaled", r.r0_unscaled_sd}};
}

json to_json(const EnsembleSummary& e) {
  return {{"n_runs", e.n_runs}, {"sigma", e.sigma},   {"base", e.base},     {"q025", e.q025},
          {"q25", e.q25},       {"median", e.median}, {"q75", e.q75},       {"q975", e.q975}};
}

json to_json(const ScenarioReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"scenario", row.name},
                    {"beta", to_json(row.beta)},
                    {"r0", to_json(row.r0)},
                    {"va_change_pp", row.va_change_pp},
                    {"gdp_pct", row.gdp_pct}});
  return {{"window", r.window}, {"rows", rows}};
}

json plot_records(const ScenarioReport& r) {
  json out = json::array();
  for (const auto& row : r.rows) {
    const auto& b = row.beta;
    const double scale = b.total > 0 ? row.r0.r0 / b.total : 0.0;
    out.push_back({{"scenario", row.name},
                   {"work", scale * b.work},
                   {"school", scale * b.school},
                   {"consumption", scale * b.consumption},
                   {"transport", scale * b.transport},
                   {"home", scale * b.home},
                   {"r0", row.r0.r0},
                   {"sd", row.r0.r0_sd},
                   {"va_change", row.va_change_pp}});
  }
  return out;
}

json calibration_summary(const Dataset& d) {
  const auto& in = d.inputs;
  const auto& e = in.economy;
  const auto shares = workforce_shares(in.calibration, d.epi.eta);
  json params = json::object();
  for (const auto& [k, v] : in.params.to_map()) params[k] = v;
  json files = json::array();
  for (const auto& [role, path] : d.files) files.push_back(role);
  return {{"n_industries", e.n()},
          {"codes", e.codes},
          {"params", params},
          {"warnings", d.warnings},
          {"files", files},
          {"totals",
           {{"x0", e.x0.sum()},
            {"c0", e.c0.sum()},
            {"f0", e.f0.sum()},
            {"l0", e.l0.sum()},
            {"va0", e.l0.sum() + e.pi0.sum()}}},
          {"workforce", {{"onsite", shares.onsite}, {"remote", shares.remote}, {"essential", shares.essential}}},
          {"epi",
           {{"beta0",
             {{"work", d.epi.beta0[0]},
              {"school", d.epi.beta0[1]},
              {"consumption", d.epi.beta0[2]},
              {"transport", d.epi.beta0[3]},
              {"home", d.epi.beta0[4]}}},
            {"R0_pre", d.epi.R0_pre},
            {"R0_lockdown_anchor", d.epi.R0_lockdown_anchor},
            {"eta_s", d.epi.eta_s},
            {"eta_u", d.epi.eta_u},
            {"g", d.epi.g},
            {"kappa", d.epi.kappa}}}};
}

Scenario scenario_from_json(const json& body, const PandemicCalibration& calib) {
  if (!body.is_object()) throw json::type_error::create(302, "request body must be an object", &body);
  Scenario s;
  if (body.contains("open")) {
    s = custom_scenario(body.at("open").get<std::vector<std::string>>(), body.value("schools", false),
                        body.value("consumption", false), calib);
  } else {
    const std::string name = body.value("scenario", std::string("Lockdown"));
    s = make_scenario(scenario_from_string(name), calib);
  }
  if (body.contains("delta_w")) override_deltas(s.lambda.delta_w, body.at("delta_w"), calib.codes, "delta_w");
  if (body.contains("delta_c")) override_deltas(s.lambda.delta_c, body.at("delta_c"), calib.codes, "delta_c");
  if (body.contains("delta_s")) s.lambda.delta_s = body.at("delta_s").get<double>();
  if (body.contains("delta_h")) s.lambda.delta_h = body.at("delta_h").get<double>();
  s.lambda.validate();
  return s;
}

EconParams params_from_json(const json& body, const EconParams& base) {
  EconParams p = base;
  std::map<std::string, std::string> kv;
  if (body.contains("params")) {
    const json& j = body.at("params");
    if (!j.is_object()) throw json::type_error::create(302, "params must be an object", &j);
    for (const auto& [k, v] : j.items()) kv[k] = v.is_string() ? v.get<std::string>() : v.dump();
  }
  if (body.contains("prod_fn")) kv["prod_fn"] = body.at("prod_fn").get<std::string>();
  if (body.contains("cons_fn")) kv["cons_fn"] = body.at("cons_fn").get<std::string>();
  apply_params(p, kv);
  p.validate();
  return p;
}

template <class F>
Response Api::guarded(F&& f) const {
  try {
    return {200, f().dump()};
  } catch (const json::exception& e) {
    return {400, error_body("malformed", e.what()).dump()};
  } catch (const Error& e) {
    return {status_for(e.kind()), error_body(to_string(e.kind()), e.what()).dump()};
  } catch (const std::exception& e) {
    return {500, error_body("internal", e.what()).dump()};
  }
}

Response Api::scenarios() const {
  return guarded([&] {
    const auto& calib = data_.inputs.calibration;
    json list = json::array();
    for (auto id : named_scenarios()) {
      const Scenario s = make_scenario(id, calib);
      std::vector<std::string> open;
      for (std::size_t i = 0; i < s.open.size(); ++i)
        if (s.open[i]) open.push_back(calib.codes[i]);
      list.push_back({{"id", to_string(id)},
                      {"description", scenario_description(id)},
                      {"open", open},
                      {"delta_w", by_code(s.lambda.delta_w, calib.codes)},
                      {"delta_c", by_code(s.lambda.delta_c, calib.codes)},
                      {"delta_s", s.lambda.delta_s},
                      {"delta_h", s.lambda.delta_h}});
    }
    return json{{"scenarios", list}};
  });
}

Response Api::simulate(const std::string& body) const {
  return guarded([&] {
    const json req = json::parse(body.empty() ? "{}" : body);
    const ModelInputs in = inputs_with(data_, req);
    const Scenario s = scenario_from_json(req, in.calibration);
    const int horizon = horizon_from(req, 180);
    const Model model = make_model(in.economy, in.criticality, in.targets, in.params);
    const SimSeries series =
        run_simulation(model, build_schedule(in.economy, in.calibration, s, in.params, horizon), horizon);
    const ScenarioReport rep = scenario_report({s}, in, data_.epi);
    const auto& row = rep.rows.front();
    return json{{"scenario", to_string(s.id)},
                {"horizon", horizon},
                {"series", to_json(series, req.value("per_industry", false))},
                {"beta", to_json(row.beta)},
                {"r0", to_json(row.r0)},
                {"va_change_pp", row.va_change_pp},
                {"gdp_pct", row.gdp_pct},
                {"window", rep.window}};
  });
}

Response Api::sensitivity(const std::string& body) const {
  return guarded([&] {
    const json req = json::parse(body.empty() ? "{}" : body);
    const ModelInputs in = inputs_with(data_, req);
    const Scenario s = scenario_from_json(req, in.calibration);
    const int horizon = horizon_from(req, 180);
    const int runs = req.value("n_runs", 100);
    if (runs < 1 || runs > kMaxRuns) throw config_error("n_runs must lie in [1, 5000]");
    const auto mode = perturb_mode_from_string(req.value("mode", std::string("both")));
    const auto e = perturbation_ensemble(in, s, horizon, req.value("sigma", 0.2), runs,
                                         req.value("seed", std::uint64_t{0}), mode);
    json out = to_json(e);
    out["scenario"] = to_string(s.id);
    out["horizon"] = horizon;
    return out;
  });
}

Response Api::calibration() const {
  return guarded([&] { return calibration_summary(data_); });
}

Response Api::plot_data() const {
  return guarded([&] {
    std::vector<Scenario> all;
    for (auto id : named_scenarios()) all.push_back(make_scenario(id, data_.inputs.calibration));
    return plot_records(scenario_report(all, data_.inputs, data_.epi));
  });
}

void mount(httplib::Server& server, const Api& api) {
  auto reply = [](httplib::Response& res, const Response& r) {
    res.status = r.status;
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_content(r.body, "application/json");
  };
  server.Get("/scenarios", [&api, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, api.scenarios());
  });
  server.Get("/calibration", [&api, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, api.calibration());
  });
  server.Get("/plot-data", [&api, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, api.plot_data());
  });
  server.Post("/simulate", [&api, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, api.simulate(req.body));
  });
  server.Post("/sensitivity", [&api, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, api.sensitivity(req.body));
  });
  server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.status = 204;
  });
}

}  // namespace reopen::service
