#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace reopen {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Codes = std::vector<std::string>;

// Shortest decimal that parses back to exactly v.
std::string format_double(double v);

// Flows Z0(i, j): supplier i -> buyer j, currency per day.
struct Economy {
  Codes codes;
  Mat Z0;
  Vec x0, c0, f0, l0, e0, pi0;
  Mat A, B;
  std::vector<std::string> warnings;
  bool accounting_flagged = false;

  std::size_t n() const { return codes.size(); }
  int index(const std::string& code) const;
  double max_accounting_residual() const;
};

// Derives A, B and the profit/expense residual; pi, when given, fixes e0.
Economy make_economy(Codes codes, Mat Z, Vec x, Vec c, Vec f, Vec l, Vec e,
                     std::optional<Vec> pi = std::nullopt, bool strict = false,
                     double tol = 1e-9);

enum class IoFormat { native_csv, wiod_csv };
Economy load_io_table(const std::string& path, IoFormat format = IoFormat::native_csv,
                      bool strict = false);
void write_io_table(const std::string& path, const Economy& e);

// ratings(i, j): input i for consuming industry j. NA is stored as NaN.
struct CriticalityMatrix {
  Mat ratings;
  std::vector<std::vector<int>> critical;   // per consuming industry j
  std::vector<std::vector<int>> important;  // per consuming industry j
  std::vector<std::string> warnings;
};

CriticalityMatrix aggregate_criticality(const std::vector<Mat>& layers);
Mat load_criticality_layer(const std::string& path, const Codes& codes);
void write_criticality(const std::string& path, const CriticalityMatrix& m, const Codes& codes);

// Per-industry counts: critical, important, non-critical, NA, as input (row) and as user (column).
struct CriticalityCounts {
  std::vector<std::array<int, 4>> row, col;
};
CriticalityCounts load_criticality_counts(const std::string& path, const Codes& codes);
std::vector<std::string> check_criticality_counts(const Mat& layer, const CriticalityCounts& counts,
                                                  const Codes& codes);

// All shocks are reduction magnitudes. eps_S is in [0,1]; demand-side shocks are in
// [-1,1] because some industries face higher demand.
struct PandemicCalibration {
  Codes codes;
  Vec eps_S, eps_D, rli, ess_w, ess_c, f_shock;
  std::vector<bool> onsite;
};

extern const std::vector<std::string> kOnsiteIndustries;
extern const std::string kRetailCode;

PandemicCalibration load_pandemic_calibration(const std::string& path, const Codes& codes);
void write_pandemic_calibration(const std::string& path, const PandemicCalibration& p);
void validate(const PandemicCalibration& p);

struct InventoryTargets {
  Vec n_days;
  std::optional<Vec> source_ratios;
};

InventoryTargets inventory_targets_from_ratios(const Vec& ratios);
InventoryTargets load_inventory_ratios(const std::string& path, const Codes& codes);

enum class ProdFn { leontief, linear, critical_baseline, important_critical, important_half };
enum class ConsFn { muellbauer, keynesian, fixed };
enum class RecoveryOrigin { lockdown_start, reopening };

std::string to_string(ProdFn p);
std::string to_string(ConsFn c);
ProdFn prod_fn_from_string(const std::string& s);
ConsFn cons_fn_from_string(const std::string& s);

struct EconParams {
  double tau = 10.0;
  double gamma_H = 1.0 / 30.0;
  double gamma_F = 1.0 / 15.0;
  double rho_bar = 0.6;
  double rho = 1.0 - (1.0 - 0.6) / 90.0;
  std::optional<double> m;  // derived from sum(c0)/sum(l0) when unset
  double b = 0.8;
  double delta_s_save = 0.5;
  double belief_L_share = 0.5;
  int t_start_lockdown = 2;
  int t_end_lockdown = 62;
  int t_end_pandemic = 367;
  RecoveryOrigin recovery_origin = RecoveryOrigin::lockdown_start;
  ProdFn prod_fn = ProdFn::critical_baseline;
  ConsFn cons_fn = ConsFn::muellbauer;

  void validate() const;
  std::map<std::string, std::string> to_map() const;
};

// Applies key = value pairs; rho follows rho_bar unless rho is given explicitly.
void apply_params(EconParams& p, const std::map<std::string, std::string>& kv);
EconParams load_params(const std::string& path);
std::map<std::string, std::string> read_kv_file(const std::string& path);

struct SyntheticBundle {
  Economy economy;
  CriticalityMatrix criticality;
  PandemicCalibration calibration;
  InventoryTargets targets;
};

SyntheticBundle generate_synthetic_economy(int n, std::uint64_t seed);

}  // namespace reopen
