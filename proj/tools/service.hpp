#pragma once

#include <string>

#include "json.hpp"
#include "reopen/dataset.hpp"

namespace httplib {
class Server;
}

namespace reopen::service {

using json = nlohmann::json;

struct Response {
  int status = 200;
  std::string body;
};

json to_json(const SimSeries& s, bool per_industry = false);
json to_json(const BetaBreakdown& b);
json to_json(const R0Estimate& r);
json to_json(const EnsembleSummary& e);
json to_json(const ScenarioReport& r);
json plot_records(const ScenarioReport& r);
json calibration_summary(const Dataset& d);

// Resolves a request body into a scenario: {"scenario": name} or
// {"open": [codes], "schools": bool, "consumption": bool}, plus optional
// "delta_w"/"delta_c" maps from industry code to value and "delta_s"/"delta_h".
Scenario scenario_from_json(const json& body, const PandemicCalibration& calib);
// Applies {"params": {...}, "prod_fn": ..., "cons_fn": ...} on top of the dataset parameters.
EconParams params_from_json(const json& body, const EconParams& base);

// Stateless request handlers over a read-only dataset.
class Api {
 public:
  explicit Api(const Dataset& data) : data_(data) {}

  Response scenarios() const;
  Response simulate(const std::string& body) const;
  Response sensitivity(const std::string& body) const;
  Response calibration() const;
  Response plot_data() const;

 private:
  template <class F>
  Response guarded(F&& f) const;

  const Dataset& data_;
};

void mount(httplib::Server& server, const Api& api);

}  // namespace reopen::service
