#pragma once

#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vdo/corpus.hpp"
#include "vdo/error.hpp"

namespace vdo {

enum class NvdErrorKind { MalformedId, NotFound, Transport, RateLimited, BadResponse };

class NvdError : public Error {
 public:
  NvdError(NvdErrorKind kind, const std::string& what,
           std::optional<std::string> retry_after = std::nullopt)
      : Error(what), kind_(kind), retry_after_(std::move(retry_after)) {}

  NvdErrorKind kind() const noexcept { return kind_; }
  /// Raw Retry-After header value, present for RateLimited when the server sent one.
  const std::optional<std::string>& retry_after() const noexcept { return retry_after_; }

 private:
  NvdErrorKind kind_;
  std::optional<std::string> retry_after_;
};

struct HttpResponse {
  int status = 0;
  std::string body;
  std::optional<std::string> retry_after;
};

using HttpHeaders = std::vector<std::pair<std::string, std::string>>;

/// GET https://<host><target>. Throws NvdError(Transport) when no response
/// could be obtained at all.
using HttpGet =
    std::function<HttpResponse(const std::string& host, const std::string& target, const HttpHeaders&)>;

/// HTTPS transport over cpp-httplib.
HttpGet https_transport();

inline constexpr std::string_view kNvdHost = "services.nvd.nist.gov";
inline constexpr std::string_view kNvdApiPath = "/rest/json/cves/2.0";
inline constexpr const char* kApiKeyEnv = "NVD_API_KEY";
inline constexpr const char* kCacheDirEnv = "VDO_NVD_CACHE_DIR";

struct NvdClientOptions {
  std::filesystem::path cache_dir;
  std::optional<std::string> api_key;
  HttpGet transport;
};

/// Cache dir from VDO_NVD_CACHE_DIR (else $XDG_CACHE_HOME or ~/.cache), API
/// key from NVD_API_KEY, HTTPS transport.
NvdClientOptions options_from_environment();

/// Extracts the English description from an NVD 2.0 API response.
CveRecord parse_nvd_response(std::string_view body, const std::string& cve_id);

/// Write-through cached NVD client. A cached id never touches the network.
class NvdClient {
 public:
  explicit NvdClient(NvdClientOptions options);

  CveRecord fetch(const std::string& cve_id);
  std::optional<CveRecord> cached(const std::string& cve_id) const;
  std::filesystem::path cache_path(const std::string& cve_id) const;

 private:
  void store(const CveRecord& record);

  NvdClientOptions options_;
  std::mutex cache_mu_;
};

}  // namespace vdo
