#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "vdo/nvd_client.hpp"

#include <cstdlib>
#include <fstream>
#include <httplib.h>
#include <json.hpp>
#include <sstream>

namespace vdo {
namespace {

using nlohmann::json;

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

std::filesystem::path default_cache_dir() {
  if (auto dir = env(kCacheDirEnv)) return *dir;
  if (auto xdg = env("XDG_CACHE_HOME")) return std::filesystem::path(*xdg) / "vdo-characterize" / "nvd";
  if (auto home = env("HOME")) return std::filesystem::path(*home) / ".cache" / "vdo-characterize" / "nvd";
  return ".nvd-cache";
}

std::string detail_url(const std::string& cve_id) { return "https://nvd.nist.gov/vuln/detail/" + cve_id; }

}  // namespace

HttpGet https_transport() {
  return [](const std::string& host, const std::string& target, const HttpHeaders& headers) {
    httplib::SSLClient client(host);
    client.set_connection_timeout(10);
    client.set_read_timeout(30);
    client.enable_server_certificate_verification(true);
    httplib::Headers h;
    for (const auto& [k, v] : headers) h.emplace(k, v);
    auto res = client.Get(target, h);
    if (!res) {
      throw NvdError(NvdErrorKind::Transport,
                     "request to " + host + " failed: " + httplib::to_string(res.error()));
    }
    HttpResponse out;
    out.status = res->status;
    out.body = res->body;
    if (res->has_header("Retry-After")) out.retry_after = res->get_header_value("Retry-After");
    return out;
  };
}

NvdClientOptions options_from_environment() {
  return {default_cache_dir(), env(kApiKeyEnv), https_transport()};
}

CveRecord parse_nvd_response(std::string_view body, const std::string& cve_id) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::parse_error& e) {
    throw NvdError(NvdErrorKind::BadResponse, std::string("NVD response is not JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("vulnerabilities") || !j["vulnerabilities"].is_array()) {
    throw NvdError(NvdErrorKind::BadResponse, "NVD response lacks a vulnerabilities array");
  }
  for (const auto& v : j["vulnerabilities"]) {
    if (!v.contains("cve")) continue;
    const auto& cve = v["cve"];
    if (cve.value("id", std::string{}) != cve_id) continue;
    if (!cve.contains("descriptions")) break;
    for (const auto& d : cve["descriptions"]) {
      if (d.value("lang", std::string{}) == "en") {
        auto text = d.value("value", std::string{});
        if (text.find_first_not_of(" \t\r\n") == std::string::npos) break;
        return {cve_id, std::move(text), detail_url(cve_id)};
      }
    }
    throw NvdError(NvdErrorKind::BadResponse, cve_id + " has no English description");
  }
  throw NvdError(NvdErrorKind::NotFound, cve_id + " not found in the NVD");
}

NvdClient::NvdClient(NvdClientOptions options) : options_(std::move(options)) {}

std::filesystem::path NvdClient::cache_path(const std::string& cve_id) const {
  return options_.cache_dir / (cve_id + ".json");
}

std::optional<CveRecord> NvdClient::cached(const std::string& cve_id) const {
  std::ifstream in(cache_path(cve_id), std::ios::binary);
  if (!in) return std::nullopt;
  try {
    const auto j = json::parse(in);
    CveRecord r{j.at("cve_id").get<std::string>(), j.at("description").get<std::string>(), std::nullopt};
    if (j.contains("source") && j["source"].is_string()) r.source = j["source"].get<std::string>();
    if (r.cve_id != cve_id) return std::nullopt;
    return r;
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

void NvdClient::store(const CveRecord& record) {
  std::lock_guard lock(cache_mu_);
  std::filesystem::create_directories(options_.cache_dir);
  json j;
  j["cve_id"] = record.cve_id;
  j["description"] = record.description;
  if (record.source) j["source"] = *record.source;
  const auto target = cache_path(record.cve_id);
  auto tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write cache file " + tmp.string());
    out << j.dump(2) << '\n';
  }
  std::filesystem::rename(tmp, target);
}

CveRecord NvdClient::fetch(const std::string& cve_id) {
  if (!is_valid_cve_id(cve_id)) throw NvdError(NvdErrorKind::MalformedId, "malformed CVE id \"" + cve_id + "\"");
  if (auto hit = cached(cve_id)) return *hit;
  if (!options_.transport) throw NvdError(NvdErrorKind::Transport, "no transport configured and " + cve_id + " is not cached");

  HttpHeaders headers{{"Accept", "application/json"}};
  if (options_.api_key) headers.emplace_back("apiKey", *options_.api_key);
  const auto res = options_.transport(std::string(kNvdHost), std::string(kNvdApiPath) + "?cveId=" + cve_id, headers);

  if (res.status == 403 || res.status == 429 || res.status == 503) {
    throw NvdError(NvdErrorKind::RateLimited,
                   "NVD rate limit hit (HTTP " + std::to_string(res.status) + ")" +
                       (res.retry_after ? ", retry after " + *res.retry_after : std::string{}),
                   res.retry_after);
  }
  if (res.status == 404) throw NvdError(NvdErrorKind::NotFound, cve_id + " not found in the NVD");
  if (res.status != 200) {
    throw NvdError(NvdErrorKind::Transport, "unexpected HTTP status " + std::to_string(res.status));
  }
  auto record = parse_nvd_response(res.body, cve_id);
  store(record);
  return record;
}

}  // namespace vdo
