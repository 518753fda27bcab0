#pragma once

#include <gtest/gtest.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"
#include "reopen/dataset.hpp"
#include "reopen/error.hpp"

namespace reopen::test {

inline const std::string kDataDir = REOPEN_TEST_DATA_DIR;
inline const std::string kOracle = REOPEN_TEST_ORACLE;

inline const Dataset& bundled() {
  static const Dataset d = load_dataset(kDataDir);
  return d;
}

inline const nlohmann::json& oracle() {
  static const nlohmann::json j = [] {
    std::ifstream in(kOracle);
    return nlohmann::json::parse(in);
  }();
  return j;
}

inline Vec vec(std::initializer_list<double> v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

inline Vec vec(const nlohmann::json& j) {
  Vec out(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) out(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return out;
}

// Two-sector economy: Z=[[10,20],[30,5]], c=(50,45), f=(20,20), x=(100,100).
inline Economy toy_economy() {
  Mat Z(2, 2);
  Z << 10, 20, 30, 5;
  return make_economy({"S1", "S2"}, Z, vec({100, 100}), vec({50, 45}), vec({20, 20}), vec({30, 40}),
                      vec({20, 25}));
}

inline CriticalityMatrix all_critical(std::size_t n) {
  return aggregate_criticality({Mat::Ones(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n))});
}

// Everything needed for a synthetic run, owning its data.
struct Bundle {
  ModelInputs in;
  explicit Bundle(const SyntheticBundle& b, EconParams p = {}) {
    in.economy = b.economy;
    in.criticality = b.criticality;
    in.calibration = b.calibration;
    in.targets = b.targets;
    in.params = p;
  }
};

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("reopen-test-" + tag + "-" + std::to_string(::getpid()));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  std::string str() const { return path_.string(); }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace reopen::test
