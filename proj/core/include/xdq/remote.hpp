#pragma once

// Optional HTTP client for an LMFDB-style curve endpoint, with a disk cache.

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "xdq/ellcurve.hpp"

namespace xdq {

struct RemoteConfig {
  std::string base_url;  // "http://host:port"; empty means offline
  std::string path_template = "/api/elliptic_curve/{label}";
  std::filesystem::path cache_dir;  // empty disables the cache
  int timeout_seconds = 10;

  /// XDQ_LMFDB_URL, XDQ_CACHE_DIR and XDQ_LMFDB_PATH.
  static RemoteConfig from_env();
  bool online() const { return !base_url.empty(); }
};

namespace remote {

/// "37a1" or "37.a1" style: conductor, class letters, optional index.
bool valid_label(std::string_view label);

/// JSON object with the CSV schema's fields. SchemaDriftError on missing or
/// mistyped fields, DomainError when the record fails validation.
EllipticCurveRecord record_from_json(std::string_view text);
std::string record_to_json(const EllipticCurveRecord& e);

class Client {
 public:
  explicit Client(RemoteConfig cfg);

  /// Online: GET, validate, write cache. Offline: cache or NetworkError.
  /// 404 -> UnknownLabelError, transport failure -> NetworkError.
  EllipticCurveRecord fetch(const std::string& label);
  std::optional<EllipticCurveRecord> cached(const std::string& label) const;

  const RemoteConfig& config() const { return cfg_; }

 private:
  std::filesystem::path cache_file(const std::string& label) const;
  void store(const std::string& label, const std::string& body);

  RemoteConfig cfg_;
  std::mutex write_mu_;
};

/// Client built from the environment.
EllipticCurveRecord fetch_remote(const std::string& label);

}  // namespace remote
}  // namespace xdq
