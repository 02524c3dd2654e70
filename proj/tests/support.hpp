#pragma once

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "vdo/error.hpp"
#include "vdo/tfidf.hpp"

namespace testing {

inline std::filesystem::path source_dir() { return VDO_SOURCE_DIR; }
inline std::filesystem::path data_file(const std::string& name) { return source_dir() / "data" / name; }
inline std::filesystem::path fixture(const std::string& name) { return source_dir() / "tests" / "fixtures" / name; }

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  static std::atomic<int> counter{0};
  auto dir = std::filesystem::temp_directory_path() /
             ("vdo-test-" + std::to_string(::getpid()) + "-" + name + "-" + std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void spit(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

inline vdo::SparseVector sparse(const std::vector<double>& dense) {
  vdo::SparseVector v;
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (dense[i] != 0.0) v.push_back({static_cast<std::uint32_t>(i), dense[i]});
  }
  return v;
}

inline vdo::FeatureMatrix matrix(const std::vector<std::vector<double>>& rows) {
  vdo::FeatureMatrix m;
  m.num_columns = rows.empty() ? 0 : rows.front().size();
  for (const auto& r : rows) m.rows.push_back(sparse(r));
  return m;
}

}  // namespace testing
