#include "reopen/economy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include "csv.hpp"
#include "reopen/error.hpp"

namespace reopen {

using detail::fmt_double;
using detail::parse_double;
using detail::read_csv;
using detail::Row;

const std::vector<std::string> kOnsiteIndustries = {"G45", "G47", "H49", "H50", "H51",
                                                    "H52", "H53", "I",   "L68", "M69_M70",
                                                    "O84", "P85", "R_S", "T"};
const std::string kRetailCode = "G47";

int Economy::index(const std::string& code) const {
  auto it = std::find(codes.begin(), codes.end(), code);
  return it == codes.end() ? -1 : static_cast<int>(it - codes.begin());
}

double Economy::max_accounting_residual() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < n(); ++i) {
    double r = std::abs(x0(i) - Z0.row(i).sum() - c0(i) - f0(i));
    worst = std::max(worst, x0(i) > 0 ? r / x0(i) : r);
  }
  return worst;
}

Economy make_economy(Codes codes, Mat Z, Vec x, Vec c, Vec f, Vec l, Vec e,
                     std::optional<Vec> pi, bool strict, double tol) {
  const auto n = static_cast<Eigen::Index>(codes.size());
  if (n == 0) throw data_error("economy has no industries");
  if (Z.rows() != n || Z.cols() != n || x.size() != n || c.size() != n || f.size() != n ||
      l.size() != n || e.size() != n || (pi && pi->size() != n))
    throw data_error("dimension mismatch in input-output table");
  if (std::set<std::string>(codes.begin(), codes.end()).size() != codes.size())
    throw data_error("duplicate industry codes");
  if (!Z.allFinite() || !x.allFinite() || !c.allFinite() || !f.allFinite() || !l.allFinite() ||
      !e.allFinite())
    throw data_error("non-finite value in input-output table");
  if ((Z.array() < 0).any()) throw data_error("negative intermediate flow");
  if ((x.array() < 0).any() || (c.array() < 0).any() || (f.array() < 0).any() ||
      (l.array() < 0).any())
    throw data_error("negative output, consumption, final demand or labour");
  for (Eigen::Index i = 0; i < n; ++i)
    if (l(i) == 0 && x(i) > 0) throw data_error("zero labour with positive output: " + codes[i]);

  Economy ec;
  ec.codes = std::move(codes);
  ec.Z0 = std::move(Z);
  ec.x0 = std::move(x);
  ec.c0 = std::move(c);
  ec.f0 = std::move(f);
  ec.l0 = std::move(l);
  ec.A = Mat::Zero(n, n);
  ec.B = Mat::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    if (ec.x0(j) > 0) ec.A.col(j) = ec.Z0.col(j) / ec.x0(j);
  for (Eigen::Index i = 0; i < n; ++i)
    if (ec.x0(i) > 0) ec.B.row(i) = ec.Z0.row(i) / ec.x0(i);
  Vec purchases = ec.Z0.colwise().sum().transpose();
  if (pi) {
    ec.pi0 = *pi;
    ec.e0 = ec.x0 - purchases - ec.l0 - ec.pi0;
  } else {
    ec.e0 = std::move(e);
    ec.pi0 = ec.x0 - purchases - ec.l0 - ec.e0;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    double r = std::abs(ec.x0(i) - ec.Z0.row(i).sum() - ec.c0(i) - ec.f0(i));
    double rel = ec.x0(i) > 0 ? r / ec.x0(i) : r;
    if (rel > tol) {
      std::string msg = "accounting residual " + fmt_double(rel) + " for " + ec.codes[i];
      if (strict) throw data_error(msg);
      ec.warnings.push_back(msg);
      ec.accounting_flagged = true;
    }
  }
  return ec;
}

namespace {

Vec parse_vec(const Row& r, std::size_t first, std::size_t n, const std::string& where) {
  if (r.size() < first + n) throw data_error("short row in " + where);
  Vec v(n);
  for (std::size_t k = 0; k < n; ++k) v(k) = parse_double(r[first + k], where);
  return v;
}

Economy load_native(const std::vector<Row>& rows, bool strict, const std::string& path) {
  if (rows.empty()) throw data_error("empty io table " + path);
  Codes codes(rows[0].begin() + 1, rows[0].end());
  const std::size_t n = codes.size();
  if (rows.size() < n + 5) throw data_error("io table needs N flow rows plus x,c,f,l,e: " + path);
  Mat Z(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[1 + i].size() != n + 1) throw data_error("dimension mismatch in flow row " + rows[1 + i][0]);
    if (rows[1 + i][0] != codes[i]) throw data_error("row label " + rows[1 + i][0] + " != " + codes[i]);
    Z.row(i) = parse_vec(rows[1 + i], 1, n, path).transpose();
  }
  std::map<std::string, Vec> vecs;
  for (std::size_t k = n + 1; k < rows.size(); ++k) {
    if (rows[k].size() != n + 1) throw data_error("dimension mismatch in row " + rows[k][0]);
    vecs[detail::lower(rows[k][0])] = parse_vec(rows[k], 1, n, path);
  }
  for (const char* key : {"x", "c", "f", "l"})
    if (!vecs.count(key)) throw data_error(std::string("io table missing row ") + key);
  std::optional<Vec> pi;
  if (vecs.count("pi")) pi = vecs["pi"];
  Vec e = vecs.count("e") ? vecs["e"] : Vec::Zero(n);
  if (!pi && !vecs.count("e")) throw data_error("io table needs row e or pi");
  return make_economy(codes, Z, vecs["x"], vecs["c"], vecs["f"], vecs["l"], e, pi, strict);
}

// WIOD national table layout: industry rows then value-added rows; columns are
// industries followed by final-use categories.
Economy load_wiod(const std::vector<Row>& rows, bool strict, const std::string& path) {
  if (rows.size() < 2) throw data_error("empty wiod table " + path);
  const Row& head = rows[0];
  std::set<std::string> row_labels;
  for (std::size_t k = 1; k < rows.size(); ++k) row_labels.insert(rows[k][0]);
  std::vector<std::size_t> ind_cols;
  Codes codes;
  std::vector<std::size_t> cons_cols, other_cols;
  for (std::size_t k = 1; k < head.size(); ++k) {
    const std::string& h = head[k];
    if (h == "GO" || h == "TOTAL" || h.empty()) continue;
    if (row_labels.count(h)) {
      ind_cols.push_back(k);
      codes.push_back(h);
    } else if (h == "CONS_h") {
      cons_cols.push_back(k);
    } else {
      other_cols.push_back(k);
    }
  }
  const std::size_t n = codes.size();
  Mat Z(n, n);
  Vec c = Vec::Zero(n), f = Vec::Zero(n), x = Vec::Zero(n), l = Vec::Zero(n), e = Vec::Zero(n);
  std::optional<Vec> pi;
  bool have_x = false;
  std::size_t next = 0;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const Row& r = rows[k];
    if (r.size() < head.size()) throw data_error("dimension mismatch in wiod row " + r[0]);
    auto val = [&](std::size_t col) { return r[col].empty() ? 0.0 : parse_double(r[col], path); };
    if (next < n && r[0] == codes[next]) {
      for (std::size_t j = 0; j < n; ++j) Z(next, j) = val(ind_cols[j]);
      for (auto col : cons_cols) c(next) += val(col);
      for (auto col : other_cols) f(next) += val(col);
      ++next;
      continue;
    }
    Vec v(n);
    for (std::size_t j = 0; j < n; ++j) v(j) = val(ind_cols[j]);
    if (r[0] == "GO") {
      x = v;
      have_x = true;
    } else if (r[0] == "COMP") {
      l += v;
    } else if (r[0] == "GOS") {
      pi = pi ? Vec(*pi + v) : v;
    } else if (r[0] != "II_fob" && r[0] != "VA") {
      e += v;
    }
  }
  if (next != n) throw data_error("wiod table rows do not match industry columns");
  if (!have_x) x = Z.rowwise().sum() + c + f;
  return make_economy(codes, Z, x, c, f, l, e, pi, strict);
}

}  // namespace

Economy load_io_table(const std::string& path, IoFormat format, bool strict) {
  auto rows = read_csv(path);
  return format == IoFormat::native_csv ? load_native(rows, strict, path)
                                        : load_wiod(rows, strict, path);
}

void write_io_table(const std::string& path, const Economy& e) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot write " + path);
  out << "code";
  for (const auto& c : e.codes) out << ',' << c;
  out << '\n';
  for (std::size_t i = 0; i < e.n(); ++i) {
    out << e.codes[i];
    for (std::size_t j = 0; j < e.n(); ++j) out << ',' << fmt_double(e.Z0(i, j));
    out << '\n';
  }
  auto row = [&](const char* label, const Vec& v) {
    out << label;
    for (Eigen::Index i = 0; i < v.size(); ++i) out << ',' << fmt_double(v(i));
    out << '\n';
  };
  row("x", e.x0);
  row("c", e.c0);
  row("f", e.f0);
  row("l", e.l0);
  row("e", e.e0);
}

// ---------------------------------------------------------------- criticality

namespace {

bool legal_rating(double v) { return std::isnan(v) || v == 0.0 || v == 0.5 || v == 1.0; }

}  // namespace

CriticalityMatrix aggregate_criticality(const std::vector<Mat>& layers) {
  if (layers.empty()) throw data_error("no criticality layers");
  const auto n = layers[0].rows();
  for (const auto& L : layers) {
    if (L.rows() != n || L.cols() != n) throw data_error("criticality layer shape mismatch");
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (!legal_rating(L(i, j))) throw data_error("illegal criticality rating " + fmt_double(L(i, j)));
  }
  CriticalityMatrix m;
  m.ratings = Mat::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      double sum = 0.0;
      int k = 0;
      for (const auto& L : layers)
        if (!std::isnan(L(i, j))) {
          sum += L(i, j);
          ++k;
        }
      double r = 0.0;
      if (k == 0) {
        if (i != j)
          m.warnings.push_back("all-NA criticality cell (" + std::to_string(i) + "," +
                               std::to_string(j) + ") set to 0");
      } else {
        double mean = sum / k;
        r = mean >= 2.0 / 3.0 - 1e-12 ? 1.0 : (mean <= 1.0 / 3.0 + 1e-12 ? 0.0 : 0.5);
      }
      m.ratings(i, j) = i == j ? 1.0 : r;
    }
  m.critical.assign(n, {});
  m.important.assign(n, {});
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      if (m.ratings(i, j) == 1.0) m.critical[j].push_back(static_cast<int>(i));
      if (m.ratings(i, j) == 0.5) m.important[j].push_back(static_cast<int>(i));
    }
  return m;
}

Mat load_criticality_layer(const std::string& path, const Codes& codes) {
  auto rows = read_csv(path);
  const auto n = codes.size();
  if (rows.size() != n + 1 || rows[0].size() != n + 1)
    throw data_error("criticality grid must be (N+1)x(N+1): " + path);
  for (std::size_t j = 0; j < n; ++j)
    if (rows[0][j + 1] != codes[j]) throw data_error("criticality column " + rows[0][j + 1] + " != " + codes[j]);
  Mat L(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const Row& r = rows[i + 1];
    if (r.size() != n + 1) throw data_error("dimension mismatch in criticality row " + r[0]);
    if (r[0] != codes[i]) throw data_error("criticality row " + r[0] + " != " + codes[i]);
    for (std::size_t j = 0; j < n; ++j) {
      const std::string& s = r[j + 1];
      L(i, j) = (s == "NA" || s.empty()) ? std::numeric_limits<double>::quiet_NaN()
                                         : parse_double(s, path);
      if (!legal_rating(L(i, j))) throw data_error("illegal criticality rating '" + s + "' in " + path);
    }
  }
  return L;
}

void write_criticality(const std::string& path, const CriticalityMatrix& m, const Codes& codes) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot write " + path);
  out << "input";
  for (const auto& c : codes) out << ',' << c;
  out << '\n';
  for (std::size_t i = 0; i < codes.size(); ++i) {
    out << codes[i];
    for (std::size_t j = 0; j < codes.size(); ++j) {
      double v = m.ratings(i, j);
      out << ',' << (std::isnan(v) ? "NA" : v == 1.0 ? "1" : v == 0.5 ? "0.5" : "0");
    }
    out << '\n';
  }
}

CriticalityCounts load_criticality_counts(const std::string& path, const Codes& codes) {
  auto rows = read_csv(path);
  CriticalityCounts c;
  c.row.assign(codes.size(), {0, 0, 0, 0});
  c.col.assign(codes.size(), {0, 0, 0, 0});
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const Row& r = rows[k];
    if (r.size() != 9) throw data_error("criticality counts need 9 columns: " + path);
    auto it = std::find(codes.begin(), codes.end(), r[0]);
    if (it == codes.end()) throw data_error("unknown industry code " + r[0] + " in " + path);
    auto i = static_cast<std::size_t>(it - codes.begin());
    for (int q = 0; q < 4; ++q) {
      c.row[i][q] = static_cast<int>(parse_double(r[1 + q], path));
      c.col[i][q] = static_cast<int>(parse_double(r[5 + q], path));
    }
  }
  return c;
}

std::vector<std::string> check_criticality_counts(const Mat& layer, const CriticalityCounts& counts,
                                                  const Codes& codes) {
  std::vector<std::string> w;
  const auto n = layer.rows();
  auto category = [](double v) { return std::isnan(v) ? 3 : v == 1.0 ? 0 : v == 0.5 ? 1 : 2; };
  const char* names[] = {"critical", "important"};
  for (Eigen::Index i = 0; i < n; ++i) {
    std::array<int, 4> r{0, 0, 0, 0}, c{0, 0, 0, 0};
    for (Eigen::Index j = 0; j < n; ++j) {
      ++r[category(layer(i, j))];
      ++c[category(layer(j, i))];
    }
    for (int q = 0; q < 2; ++q) {
      if (r[q] != counts.row[i][q])
        w.push_back(codes[i] + " as input: " + std::to_string(r[q]) + " " + names[q] +
                    " ratings, expected " + std::to_string(counts.row[i][q]));
      if (c[q] != counts.col[i][q])
        w.push_back(codes[i] + " as user: " + std::to_string(c[q]) + " " + names[q] +
                    " ratings, expected " + std::to_string(counts.col[i][q]));
    }
  }
  return w;
}

// ---------------------------------------------------------------- shocks

namespace {

double pct_to_reduction(const std::string& s, const std::string& where) {
  return -(parse_double(s, where) / 100.0);
}

double pct_to_fraction(const std::string& s, const std::string& where) {
  return parse_double(s, where) / 100.0;
}

// Decimal percent p with sign * (p / 100) == v exactly, preferring short forms.
std::string pct_string(double v, double sign) {
  const double p = sign * v * 100.0;
  auto ok = [&](double q) { return sign * (q / 100.0) == v; };
  for (double scale : {1e2, 1e6, 1e10}) {
    double q = std::round(p * scale) / scale;
    if (ok(q)) return fmt_double(q);
  }
  double lo = p, hi = p;
  for (int k = 0; k < 16; ++k) {
    if (ok(lo)) return fmt_double(lo);
    if (ok(hi)) return fmt_double(hi);
    lo = std::nextafter(lo, -1e300);
    hi = std::nextafter(hi, 1e300);
  }
  return fmt_double(p);
}

}  // namespace

void validate(const PandemicCalibration& p) {
  auto in = [](const Vec& v, double lo, double hi) {
    return v.allFinite() && (v.array() >= lo).all() && (v.array() <= hi).all();
  };
  if (!in(p.eps_S, 0, 1)) throw data_error("supply shock outside [0,1]");
  if (!in(p.eps_D, -1, 1)) throw data_error("consumption shock outside [-1,1]");
  if (!in(p.f_shock, -1, 1)) throw data_error("other final demand shock outside [-1,1]");
  if (!in(p.rli, 0, 1)) throw data_error("remote labour index outside [0,1]");
  if (!in(p.ess_w, 0, 1) || !in(p.ess_c, 0, 1)) throw data_error("essential share outside [0,1]");
}

PandemicCalibration load_pandemic_calibration(const std::string& path, const Codes& codes) {
  auto rows = read_csv(path);
  if (rows.empty()) throw data_error("empty shocks file " + path);
  const Row& head = rows[0];
  auto col = [&](const std::string& name) -> int {
    auto it = std::find(head.begin(), head.end(), name);
    return it == head.end() ? -1 : static_cast<int>(it - head.begin());
  };
  int ci = col("code"), cs = col("eps_S_pct"), cr = col("rli"), ce = col("ess_w"),
      cd = col("eps_D_pct"), cf = col("f_shock_pct"), co = col("onsite");
  if (ci < 0 || cs < 0 || cr < 0 || ce < 0 || cd < 0 || cf < 0)
    throw data_error("shocks file missing required columns: " + path);
  const auto n = codes.size();
  PandemicCalibration p;
  p.codes = codes;
  p.eps_S = p.eps_D = p.rli = p.ess_w = p.ess_c = p.f_shock = Vec::Zero(n);
  p.onsite.assign(n, false);
  std::vector<bool> seen(n, false);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const Row& r = rows[k];
    if (r.size() < head.size()) throw data_error("short row in " + path);
    auto it = std::find(codes.begin(), codes.end(), r[ci]);
    if (it == codes.end()) throw data_error("unknown industry code " + r[ci] + " in " + path);
    auto i = static_cast<std::size_t>(it - codes.begin());
    seen[i] = true;
    const std::string where = path + " row " + r[ci];
    double s = parse_double(r[cs], where), d = parse_double(r[cd], where),
           f = parse_double(r[cf], where), rl = parse_double(r[cr], where),
           es = parse_double(r[ce], where);
    if (s > 0 || s < -100) throw data_error("supply shock percent out of range in " + where);
    if (d < -100 || d > 100 || f < -100 || f > 100)
      throw data_error("demand shock percent out of range in " + where);
    if (rl < 0 || rl > 100 || es < 0 || es > 100)
      throw data_error("share percent out of range in " + where);
    p.eps_S(i) = pct_to_reduction(r[cs], where);
    p.eps_D(i) = pct_to_reduction(r[cd], where);
    p.f_shock(i) = pct_to_reduction(r[cf], where);
    p.rli(i) = pct_to_fraction(r[cr], where);
    p.ess_w(i) = pct_to_fraction(r[ce], where);
    if (co >= 0) {
      p.onsite[i] = r[co] == "1";
    } else {
      p.onsite[i] = std::find(kOnsiteIndustries.begin(), kOnsiteIndustries.end(), r[ci]) !=
                    kOnsiteIndustries.end();
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!seen[i]) throw data_error("shocks file has no row for " + codes[i]);
  for (std::size_t i = 0; i < n; ++i)
    if (codes[i] == kRetailCode) p.ess_c(i) = p.ess_w(i);
  validate(p);
  return p;
}

void write_pandemic_calibration(const std::string& path, const PandemicCalibration& p) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot write " + path);
  out << "code,eps_S_pct,rli,ess_w,eps_D_pct,f_shock_pct,onsite\n";
  for (std::size_t i = 0; i < p.codes.size(); ++i)
    out << p.codes[i] << ',' << pct_string(p.eps_S(i), -1) << ',' << pct_string(p.rli(i), 1) << ','
        << pct_string(p.ess_w(i), 1) << ',' << pct_string(p.eps_D(i), -1) << ','
        << pct_string(p.f_shock(i), -1) << ',' << (p.onsite[i] ? 1 : 0) << '\n';
}

// ---------------------------------------------------------------- inventories

InventoryTargets inventory_targets_from_ratios(const Vec& ratios) {
  if (!ratios.allFinite() || (ratios.array() < 0).any()) throw data_error("negative inventory ratio");
  InventoryTargets t;
  t.n_days = 30.0 * ratios;
  t.source_ratios = ratios;
  return t;
}

InventoryTargets load_inventory_ratios(const std::string& path, const Codes& codes) {
  auto rows = read_csv(path);
  Vec r = Vec::Constant(codes.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t k = 1; k < rows.size(); ++k) {
    if (rows[k].size() < 2) throw data_error("short row in " + path);
    auto it = std::find(codes.begin(), codes.end(), rows[k][0]);
    if (it == codes.end()) throw data_error("unknown industry code " + rows[k][0] + " in " + path);
    r(it - codes.begin()) = parse_double(rows[k][1], path);
  }
  for (std::size_t i = 0; i < codes.size(); ++i)
    if (std::isnan(r(i))) throw data_error("no inventory ratio for " + codes[i]);
  return inventory_targets_from_ratios(r);
}

// ---------------------------------------------------------------- parameters

std::string to_string(ProdFn p) {
  switch (p) {
    case ProdFn::leontief: return "leontief";
    case ProdFn::linear: return "linear";
    case ProdFn::critical_baseline: return "critical_baseline";
    case ProdFn::important_critical: return "important_critical";
    case ProdFn::important_half: return "important_half";
  }
  return "?";
}

std::string to_string(ConsFn c) {
  switch (c) {
    case ConsFn::muellbauer: return "muellbauer";
    case ConsFn::keynesian: return "keynesian";
    case ConsFn::fixed: return "fixed";
  }
  return "?";
}

ProdFn prod_fn_from_string(const std::string& s) {
  for (auto p : {ProdFn::leontief, ProdFn::linear, ProdFn::critical_baseline,
                 ProdFn::important_critical, ProdFn::important_half})
    if (detail::lower(s) == to_string(p)) return p;
  throw config_error("unknown production function '" + s + "'");
}

ConsFn cons_fn_from_string(const std::string& s) {
  for (auto c : {ConsFn::muellbauer, ConsFn::keynesian, ConsFn::fixed})
    if (detail::lower(s) == to_string(c)) return c;
  throw config_error("unknown consumption function '" + s + "'");
}

void EconParams::validate() const {
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!(tau > 0)) throw config_error("tau must be positive");
  if (!(gamma_H >= 0 && gamma_H <= gamma_F && gamma_F <= 1))
    throw config_error("need 0 <= gamma_H <= gamma_F <= 1");
  if (!(rho > 0 && rho < 1)) throw config_error("rho must be in (0,1)");
  if (!(rho_bar >= 0 && rho_bar < 1)) throw config_error("rho_bar must be in [0,1)");
  if (!unit(b) || !unit(delta_s_save) || (m && !unit(*m)) || !unit(belief_L_share))
    throw config_error("b, m, delta_s_save and belief_L_share must be in [0,1]");
  if (!(t_start_lockdown >= 0 && t_start_lockdown < t_end_lockdown &&
        t_end_lockdown <= t_end_pandemic))
    throw config_error("need 0 <= t_start_lockdown < t_end_lockdown <= t_end_pandemic");
}

std::map<std::string, std::string> EconParams::to_map() const {
  std::map<std::string, std::string> kv;
  kv["tau"] = fmt_double(tau);
  kv["gamma_H"] = fmt_double(gamma_H);
  kv["gamma_F"] = fmt_double(gamma_F);
  kv["rho_bar"] = fmt_double(rho_bar);
  kv["rho"] = fmt_double(rho);
  if (m) kv["m"] = fmt_double(*m);
  kv["b"] = fmt_double(b);
  kv["delta_s_save"] = fmt_double(delta_s_save);
  kv["belief_L_share"] = fmt_double(belief_L_share);
  kv["t_start_lockdown"] = std::to_string(t_start_lockdown);
  kv["t_end_lockdown"] = std::to_string(t_end_lockdown);
  kv["t_end_pandemic"] = std::to_string(t_end_pandemic);
  kv["recovery_origin"] = recovery_origin == RecoveryOrigin::lockdown_start ? "lockdown" : "reopening";
  kv["prod_fn"] = to_string(prod_fn);
  kv["cons_fn"] = to_string(cons_fn);
  return kv;
}

namespace {

double cfg_double(const std::string& key, const std::string& v) {
  try {
    return parse_double(v, key);
  } catch (const Error&) {
    throw config_error("bad value for " + key + ": '" + v + "'");
  }
}

int cfg_int(const std::string& key, const std::string& v) {
  double d = cfg_double(key, v);
  if (d != std::floor(d)) throw config_error(key + " must be an integer");
  return static_cast<int>(d);
}

}  // namespace

void apply_params(EconParams& p, const std::map<std::string, std::string>& kv) {
  bool rho_set = false;
  for (const auto& [k, v] : kv) {
    if (k == "tau") p.tau = cfg_double(k, v);
    else if (k == "gamma_H") p.gamma_H = cfg_double(k, v);
    else if (k == "gamma_F") p.gamma_F = cfg_double(k, v);
    else if (k == "rho_bar") p.rho_bar = cfg_double(k, v);
    else if (k == "rho") { p.rho = cfg_double(k, v); rho_set = true; }
    else if (k == "m") p.m = cfg_double(k, v);
    else if (k == "b") p.b = cfg_double(k, v);
    else if (k == "delta_s_save") p.delta_s_save = cfg_double(k, v);
    else if (k == "belief_L_share") p.belief_L_share = cfg_double(k, v);
    else if (k == "t_start_lockdown") p.t_start_lockdown = cfg_int(k, v);
    else if (k == "t_end_lockdown") p.t_end_lockdown = cfg_int(k, v);
    else if (k == "t_end_pandemic") p.t_end_pandemic = cfg_int(k, v);
    else if (k == "prod_fn") p.prod_fn = prod_fn_from_string(v);
    else if (k == "cons_fn") p.cons_fn = cons_fn_from_string(v);
    else if (k == "recovery_origin") {
      if (v == "lockdown") p.recovery_origin = RecoveryOrigin::lockdown_start;
      else if (v == "reopening") p.recovery_origin = RecoveryOrigin::reopening;
      else throw config_error("recovery_origin must be lockdown or reopening");
    } else {
      throw config_error("unknown parameter '" + k + "'");
    }
  }
  if (!rho_set && kv.count("rho_bar")) p.rho = 1.0 - (1.0 - p.rho_bar) / 90.0;
  p.validate();
}

std::map<std::string, std::string> read_kv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (detail::trim(line).empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error(path + ":" + std::to_string(lineno) + ": expected key = value");
    kv[detail::trim(line.substr(0, eq))] = detail::trim(line.substr(eq + 1));
  }
  return kv;
}

EconParams load_params(const std::string& path) {
  EconParams p;
  apply_params(p, read_kv_file(path));
  return p;
}

// ---------------------------------------------------------------- synthetic

SyntheticBundle generate_synthetic_economy(int n, std::uint64_t seed) {
  if (n < 2) throw config_error("synthetic economy needs n >= 2");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto uni = [&](double a, double b) { return a + (b - a) * U(rng); };
  const auto N = static_cast<Eigen::Index>(n);

  Codes codes;
  for (int i = 0; i < n; ++i) codes.push_back("S" + std::to_string(i + 1));
  Vec x(N);
  for (Eigen::Index i = 0; i < N; ++i) x(i) = uni(50.0, 150.0);
  Mat W(N, N);
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index j = 0; j < N; ++j) W(i, j) = U(rng) < 0.7 ? U(rng) : 0.0;
  W.diagonal().array() += 0.5;
  // Z_ij = k * W_ij x_i x_j / max(row, col) scale keeps both row and column shares < 0.7
  Mat Z(N, N);
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index j = 0; j < N; ++j) Z(i, j) = W(i, j) * x(i) * x(j);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < N; ++i) {
    worst = std::max(worst, Z.row(i).sum() / x(i));
    worst = std::max(worst, Z.col(i).sum() / x(i));
  }
  Z *= uni(0.3, 0.7) / worst;
  Vec fd = x - Z.rowwise().sum();
  Vec c(N), f(N), l(N), e(N);
  for (Eigen::Index i = 0; i < N; ++i) {
    double share = uni(0.3, 0.8);
    c(i) = share * fd(i);
    f(i) = fd(i) - c(i);
  }
  Vec va = x - Z.colwise().sum().transpose();
  for (Eigen::Index i = 0; i < N; ++i) {
    l(i) = uni(0.4, 0.7) * va(i);
    e(i) = uni(0.1, 0.5) * (va(i) - l(i));
  }
  SyntheticBundle s;
  s.economy = make_economy(codes, Z, x, c, f, l, e);

  Mat R = Mat::Zero(N, N);
  for (Eigen::Index j = 0; j < N; ++j) {
    for (Eigen::Index i = 0; i < N; ++i) {
      double u = U(rng);
      R(i, j) = u < 0.15 ? 1.0 : (u < 0.35 ? 0.5 : 0.0);
    }
    auto other = static_cast<Eigen::Index>(U(rng) * (N - 1));
    if (other >= j) ++other;
    R(other, j) = 1.0;
  }
  s.criticality = aggregate_criticality({R});

  PandemicCalibration p;
  p.codes = codes;
  p.eps_S = p.eps_D = p.rli = p.ess_w = p.ess_c = p.f_shock = Vec::Zero(N);
  p.onsite.assign(n, false);
  for (Eigen::Index i = 0; i < N; ++i) {
    p.rli(i) = uni(0.0, 0.8);
    p.ess_w(i) = uni(0.0, 1.0);
    p.eps_S(i) = (1.0 - p.ess_w(i)) * (1.0 - p.rli(i));
    p.eps_D(i) = uni(0.0, 0.5);
    p.f_shock(i) = uni(0.0, 0.3);
    p.onsite[i] = U(rng) < 0.3;
  }
  s.calibration = p;

  Vec ratios(N);
  for (Eigen::Index i = 0; i < N; ++i) ratios(i) = uni(0.1, 3.0);
  s.targets = inventory_targets_from_ratios(ratios);
  return s;
}

}  // namespace reopen
