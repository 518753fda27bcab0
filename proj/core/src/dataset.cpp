#include "reopen/dataset.hpp"

#include <filesystem>
#include <fstream>

#include "csv.hpp"
#include "reopen/error.hpp"

namespace reopen {

namespace fs = std::filesystem;

Dataset load_dataset(const std::string& dir, bool strict, const std::string& config) {
  if (!fs::is_directory(dir)) throw data_error("data directory not found: " + dir);
  Dataset d;
  d.dir = dir;
  auto path = [&](const std::string& role, const std::string& name) {
    std::string p = (fs::path(dir) / name).string();
    d.files[role] = p;
    return p;
  };
  auto& in = d.inputs;
  in.economy = load_io_table(path("io_table", "io_table.csv"), IoFormat::native_csv, strict);
  const Codes& codes = in.economy.codes;
  Mat layer = load_criticality_layer(path("criticality", "criticality.csv"), codes);
  in.criticality = aggregate_criticality({layer});
  if (fs::exists(fs::path(dir) / "criticality_counts.csv")) {
    auto counts = load_criticality_counts(path("criticality_counts", "criticality_counts.csv"), codes);
    for (auto& w : check_criticality_counts(layer, counts, codes)) d.warnings.push_back(w);
  }
  in.calibration = load_pandemic_calibration(path("shocks", "shocks.csv"), codes);
  in.targets = load_inventory_ratios(path("inventory_ratios", "inventory_ratios.csv"), codes);
  EconParams p;
  if (fs::exists(fs::path(dir) / "params.cfg")) apply_params(p, read_kv_file(path("params", "params.cfg")));
  if (!config.empty()) {
    d.files["config"] = config;
    apply_params(p, read_kv_file(config));
  }
  in.params = p;
  d.epi = load_epi_calibration(path("epi_places", "epi_places.csv"),
                               path("epi_industry", "epi_industry.csv"),
                               path("epi_params", "epi_params.cfg"), codes);
  for (auto& w : in.economy.warnings) d.warnings.push_back(w);
  for (auto& w : in.criticality.warnings) d.warnings.push_back(w);
  return d;
}

void write_synthetic_dataset(const std::string& dir, const SyntheticBundle& b) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw config_error("cannot create " + dir + ": " + ec.message());
  auto path = [&](const std::string& name) { return (fs::path(dir) / name).string(); };
  auto open = [&](const std::string& name) {
    std::ofstream out(path(name));
    if (!out) throw config_error("cannot write " + path(name));
    return out;
  };
  const Economy& e = b.economy;
  write_io_table(path("io_table.csv"), e);
  write_criticality(path("criticality.csv"), b.criticality, e.codes);
  write_pandemic_calibration(path("shocks.csv"), b.calibration);
  {
    auto out = open("inventory_ratios.csv");
    out << "code,ratio_monthly\n";
    const Vec ratios = b.targets.source_ratios ? *b.targets.source_ratios : b.targets.n_days / 30.0;
    for (std::size_t i = 0; i < e.n(); ++i) out << e.codes[i] << ',' << detail::fmt_double(ratios(i)) << '\n';
  }
  {
    // one place per contact category; on-site consumption happens in the first industry
    auto out = open("epi_places.csv");
    out << "place,category,visit_pct,duration_h,crowd,physical_pct,industry\n"
        << "Workplace,work,60,8,10,20,\n"
        << "School,school,20,6,25,30,\n"
        << "Shop,consume,40,1,20,5," << e.codes.front() << "\n"
        << "Transit,transport,40,1,15,10,\n"
        << "Home,home,100,12,3,60,\n";
  }
  {
    auto out = open("epi_industry.csv");
    out << "code,exposure,proximity,eta\n";
    const double total = e.x0.sum();
    for (std::size_t i = 0; i < e.n(); ++i)
      out << e.codes[i] << ",50,50," << detail::fmt_double(0.62 * e.x0(i) / total) << '\n';
  }
  open("epi_params.cfg") << "R0_pre = 2.6\nR0_lockdown_anchor = 0.62\neta_s = 0.23\neta_u = 0.15\n";
  open("params.cfg") << "# defaults apply\n";
}

}  // namespace reopen
