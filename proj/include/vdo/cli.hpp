#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include <json.hpp>

namespace vdo::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFindings = 1;
inline constexpr int kExitUsage = 2;

struct RunConfig {
  std::string command;
  std::string dataset;
  std::string algo = "all";
  std::size_t k = 10;
  std::uint64_t seed = 123;
  std::string out;
  std::string format = "json";  // json | markdown | both
  std::string cve;
  std::string model;
  std::string text;
  std::string scores;
  std::string adjust = "none";  // none | holm
  std::size_t min_count = 2;
  std::size_t per_class = 20;
  unsigned threads = 0;  // 0 = hardware concurrency
};

/// The provenance block embedded in reports. Leaves out `threads` and output
/// locations (`out`, and `model` for train), which do not affect results.
nlohmann::json config_to_json(const RunConfig& config);

/// Parses argv and runs one subcommand. Exit codes: 0 success, 1 domain
/// findings, 2 usage or I/O errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vdo::cli
