#pragma once

#include <string>

#include <json.hpp>

#include "vdo/stats/friedman.hpp"

namespace vdo::stats {

/// {chi_squared, df, p_value, classifiers, rank_sums, tie_correction,
/// pairwise_method, pairwise_p}; arrays follow classifier order.
nlohmann::json stats_to_json(const FriedmanResult& f, const PairwisePValues& p);

/// Two tables: the Friedman summary and the pairwise p-value grid.
std::string stats_markdown(const FriedmanResult& f, const PairwisePValues& p);

}  // namespace vdo::stats
