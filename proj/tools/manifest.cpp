#include "manifest.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

#include "json.hpp"
#include "reopen/error.hpp"

namespace reopen::service {

using json = nlohmann::json;

std::string sha256_hex(const std::string& data) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1)
    throw numerical_error("sha256 failed");
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return out.str();
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

std::string derive_run_id(const RunManifest& m) {
  std::string key = m.command;
  for (const auto& a : m.args) key += '\0' + a;
  for (const auto& [path, digest] : m.inputs) key += '\0' + digest;
  return sha256_hex(key).substr(0, 16);
}

void write_manifest(const std::string& path, const RunManifest& m) {
  json j = {{"run_id", m.run_id},   {"command", m.command},   {"args", m.args},
            {"inputs", m.inputs},   {"params", m.params},     {"scenario", m.scenario},
            {"outputs", m.outputs}, {"elapsed_ms", m.elapsed_ms}};
  std::ofstream out(path);
  if (!out) throw config_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

RunManifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot read manifest " + path);
  json j;
  try {
    in >> j;
    RunManifest m;
    m.run_id = j.at("run_id").get<std::string>();
    m.command = j.at("command").get<std::string>();
    m.args = j.at("args").get<std::vector<std::string>>();
    m.inputs = j.at("inputs").get<std::map<std::string, std::string>>();
    m.params = j.value("params", std::map<std::string, std::string>{});
    m.scenario = j.value("scenario", std::string());
    m.outputs = j.at("outputs").get<std::map<std::string, std::string>>();
    m.elapsed_ms = j.value("elapsed_ms", 0.0);
    return m;
  } catch (const json::exception& e) {
    throw config_error("malformed manifest " + path + ": " + e.what());
  }
}

}  // namespace reopen::service
