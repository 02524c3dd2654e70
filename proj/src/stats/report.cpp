#include "vdo/stats/report.hpp"

#include <cstdio>
#include <sstream>

namespace vdo::stats {
namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace

nlohmann::json stats_to_json(const FriedmanResult& f, const PairwisePValues& p) {
  return {{"chi_squared", f.chi_squared},
          {"df", f.df},
          {"p_value", f.p_value},
          {"classifiers", p.names},
          {"rank_sums", f.rank_sums},
          {"tie_correction", f.tie_correction},
          {"pairwise_method", p.method},
          {"pairwise_p", p.p}};
}

std::string stats_markdown(const FriedmanResult& f, const PairwisePValues& p) {
  std::ostringstream out;
  out << "| Friedman's Chi-Squared | df | p-value |\n|---|---|---|\n";
  out << "| " << fmt("%.5f", f.chi_squared) << " | " << f.df << " | " << fmt("%.6g", f.p_value) << " |\n\n";

  out << "| |";
  for (const auto& n : p.names) out << ' ' << n << " |";
  out << "\n|---|";
  for (std::size_t j = 0; j < p.names.size(); ++j) out << "---|";
  out << '\n';
  for (std::size_t i = 0; i < p.names.size(); ++i) {
    out << "| " << p.names[i] << " |";
    for (std::size_t j = 0; j < p.names.size(); ++j) {
      out << ' ' << (i == j ? std::string("-") : fmt("%.6g", p.p[i][j])) << " |";
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace vdo::stats
