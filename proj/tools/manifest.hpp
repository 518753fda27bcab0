#pragma once

#include <map>
#include <string>
#include <vector>

namespace reopen::service {

// Record of one CLI run: enough to check the inputs and rerun it.
struct RunManifest {
  std::string run_id;
  std::string command;
  std::vector<std::string> args;              // full argument list without --out
  std::map<std::string, std::string> inputs;  // path -> sha256
  std::map<std::string, std::string> params;
  std::string scenario;
  std::map<std::string, std::string> outputs;  // file name inside the output directory -> sha256
  double elapsed_ms = 0.0;
};

std::string sha256_hex(const std::string& data);
std::string sha256_file(const std::string& path);

// Run id derives from the arguments and input digests only, so reruns share it.
std::string derive_run_id(const RunManifest& m);

void write_manifest(const std::string& path, const RunManifest& m);
RunManifest read_manifest(const std::string& path);

}  // namespace reopen::service
