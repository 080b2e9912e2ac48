#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <string>

#include <openssl/evp.h>

#include "stirap/app/campaigns.hpp"

namespace stirap::app {

inline constexpr const char* tool_version = "0.1.0";

namespace detail {

inline std::string hex_digest(const EVP_MD* md, const std::string& data) {
  unsigned char buf[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), buf, &len, md, nullptr) != 1) throw Error("digest computation failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[buf[i] >> 4];
    out += hex[buf[i] & 15];
  }
  return out;
}

}  // namespace detail

inline std::string sha256_hex(const std::string& data) { return detail::hex_digest(EVP_sha256(), data); }

/// Same value `git hash-object` gives for a file with this content.
inline std::string git_blob_sha1(const std::string& data) {
  return detail::hex_digest(EVP_sha1(), "blob " + std::to_string(data.size()) + '\0' + data);
}

/// Canonical text of a validated config: sorted keys, two-space indent.
inline std::string canonical_config(const json& doc) { return doc.dump(2) + "\n"; }

struct RunRecord {
  std::filesystem::path manifest_path;
  json manifest;
};

/// Writes every artifact, an optional plotting recipe and manifest.json.
/// Everything written except the manifest itself is listed in it.
inline RunRecord write_run(const std::filesystem::path& dir, const ExperimentConfig& cfg, const CampaignOutput& out,
                           double wall_seconds, bool emit_plot_script) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("output.dir", "cannot create '" + dir.string() + "': " + ec.message());

  std::vector<Artifact> files = out.artifacts;
  const std::string config_text = canonical_config(cfg.document);
  files.push_back({"config.json", config_text, std::nullopt});
  if (emit_plot_script) {
    json panels = json::array();
    for (const Artifact& a : out.artifacts) {
      if (!a.plot) continue;
      panels.push_back({{"data", a.name},
                        {"style", a.plot->style},
                        {"comment_prefix", "#"},
                        {"x", a.plot->x},
                        {"y", a.plot->y},
                        {"x_label", a.plot->x_label},
                        {"y_label", a.plot->y_label}});
    }
    files.push_back({"plot_recipe.json", json{{"panels", panels}}.dump(2) + "\n", std::nullopt});
  }

  json outputs = json::array();
  for (const Artifact& a : files) {
    const fs::path p = dir / a.name;
    std::ofstream f(p, std::ios::binary);
    f << a.content;
    if (!f) throw Error("cannot write '" + p.string() + "'");
    outputs.push_back({{"path", a.name}, {"sha256", sha256_hex(a.content)}, {"bytes", a.content.size()}});
  }
  RunRecord rec;
  rec.manifest = {{"tool", "stirap"},
                  {"version", tool_version},
                  {"campaign", cfg.campaign},
                  {"preset", cfg.preset},
                  {"seed", cfg.seed},
                  {"config_sha1", git_blob_sha1(config_text)},
                  {"wall_clock_s", wall_seconds},
                  {"status", out.failure ? "failed" : "ok"},
                  {"outputs", outputs},
                  {"summary", out.summary}};
  if (out.failure) rec.manifest["error"] = {{"kind", out.failure->kind}, {"message", out.failure->message}};
  rec.manifest_path = dir / "manifest.json";
  std::ofstream m(rec.manifest_path, std::ios::binary);
  m << rec.manifest.dump(2) << "\n";
  if (!m) throw Error("cannot write '" + rec.manifest_path.string() + "'");
  return rec;
}

}  // namespace stirap::app
