#pragma once

#include <map>
#include <string>
#include <vector>

#include "reopen/analysis.hpp"
#include "reopen/epi.hpp"

namespace reopen {

struct Dataset {
  std::string dir;
  ModelInputs inputs;
  EpiCalibration epi;
  std::vector<std::string> warnings;
  std::map<std::string, std::string> files;  // role -> path of every file read
};

// Loads a data directory laid out like data/uk55. A config file, when given,
// overrides params.cfg.
Dataset load_dataset(const std::string& dir, bool strict = false, const std::string& config = "");

// Writes a synthetic economy as a complete data directory, with a generic
// epidemic calibration, loadable by load_dataset.
void write_synthetic_dataset(const std::string& dir, const SyntheticBundle& b);

}  // namespace reopen
