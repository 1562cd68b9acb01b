#include "kblink/manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <memory>

#include <fmt/format.h>

#include "kblink/errors.hpp"

namespace kblink {

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());

  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw IoError("sha256 init failed");

  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  if (in.bad()) throw IoError("read error on " + path.string());

  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest.data(), &len);
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

nlohmann::ordered_json RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["tool_version"] = tool_version;
  j["config"] = config;
  auto& ins = j["inputs"] = nlohmann::ordered_json::array();
  for (const auto& in : inputs) ins.push_back({{"role", in.role}, {"path", in.path}, {"sha256", in.sha256}});
  auto& ts = j["timings"] = nlohmann::ordered_json::array();
  for (const auto& t : timings) ts.push_back({{"stage", t.stage}, {"seconds", t.seconds}});
  return j;
}

RunManifest RunManifest::from_json(const nlohmann::json& j) {
  RunManifest m;
  m.tool_version = j.at("tool_version").get<std::string>();
  m.config = j.at("config");
  for (const auto& in : j.at("inputs"))
    m.inputs.push_back({in.at("role").get<std::string>(), in.at("path").get<std::string>(),
                        in.at("sha256").get<std::string>()});
  for (const auto& t : j.at("timings")) m.timings.push_back({t.at("stage").get<std::string>(), t.at("seconds").get<double>()});
  return m;
}

std::filesystem::path manifest_path_for(const std::filesystem::path& predictions_path) {
  auto p = predictions_path;
  p += ".manifest.json";
  return p;
}

}  // namespace kblink
